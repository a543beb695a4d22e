#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace dtswarm::snn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// How neurons above threshold are resolved within one Euler step.
enum class FiringMode {
  /// Every neuron with sigma_i > T_i fires, then all resets apply together.
  kSimultaneous,
  /// Greedy: the neuron furthest above threshold fires first and its fast
  /// recurrence is applied before the next candidate is chosen. Each neuron
  /// fires at most once per step.
  kSequential,
};

/// Scaling of the fast recurrent weights Omega_f = g * D^T D + mu * I.
enum class FastRecurrence {
  /// g = 1.
  kUnit,
  /// g = k * dt * trace_increment, so the reset removes exactly the membrane
  /// charge that the spike's contribution to D r will remove from the error
  /// feedback over one step.
  kMatched,
};

struct SpikeNetParams {
  int n_neurons = 100;
  int signal_dim = 3;
  double leak = 1e-4;          // lambda, shared by membrane and trace
  double sparsity = 1e-4;      // nu
  double quad_cost = 1e-4;     // mu
  double error_gain = 500.0;   // k
  double learn_rate = 0.01;    // eta
  double dt = 0.01;

  // Discretisation controls. The defaults give the plain Euler scheme
  // (unit impulses, unit fast weights, simultaneous firing, no clamp).
  double trace_increment = 1.0;  // amount added to r_i per spike
  FastRecurrence fast_recurrence = FastRecurrence::kUnit;
  FiringMode firing = FiringMode::kSimultaneous;
  /// When > 0, sigma_i is clamped to +-membrane_bound * (T_i + Omega_f[i,i])
  /// after integration. 0 disables the clamp.
  double membrane_bound = 0.0;
  /// Divergence guard on max |sigma|.
  double sigma_limit = 1e6;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  double fast_gain() const;

  bool operator==(const SpikeNetParams&) const = default;
};

struct SpikeNetState {
  VectorXd sigma;    // membrane potentials
  VectorXd r;        // filtered spike trace, non-negative
  MatrixXd D;        // decoder, signal_dim x n
  MatrixXd omega_f;  // fast recurrence, n x n
  MatrixXd omega_s;  // slow (learned) recurrence, n x n
  MatrixXd M;        // dendritic mixing, n x n
  VectorXd theta;    // dendritic offsets
  VectorXd T;        // thresholds
  std::uint64_t spike_count = 0;

  int n_neurons() const { return static_cast<int>(sigma.size()); }
};

/// Draws D ~ N(0,1), M ~ N(0,1/n), theta ~ N(0,1) from `seed` in that order.
SpikeNetState init_network(const SpikeNetParams& params, std::uint64_t seed);

/// Same as init_network but with a caller-supplied decoder. M and theta are
/// still drawn from `seed`.
SpikeNetState init_network_with_decoder(const SpikeNetParams& params, const MatrixXd& D,
                                        std::uint64_t seed);

/// Recomputes T and Omega_f from D. Used after a decoder override.
void rebuild_derived(SpikeNetState& state, const SpikeNetParams& params);

/// psi(r) = tanh(M^T r + theta).
VectorXd dendritic_nonlinearity(const VectorXd& r, const MatrixXd& M, const VectorXd& theta);

/// u_hat = D r.
VectorXd decode(const MatrixXd& D, const VectorXd& r);

/// One Euler step of the membrane, firing, reset and trace. Returns the 0/1
/// spike vector. Throws NumericalDivergence if sigma becomes non-finite or
/// exceeds params.sigma_limit.
VectorXd step_network(SpikeNetState& state, const SpikeNetParams& params, const VectorXd& e);

/// Omega_s += dt * eta * psi(r) (D^T e)^T.
void update_slow_weights(SpikeNetState& state, const SpikeNetParams& params, const VectorXd& e);

/// Time average over [0, t] of |u - u_hat|^2 + nu |r|_1 + mu |r|_2^2 using
/// the trapezoidal rule on uniformly spaced samples. A single sample returns
/// its own integrand value. Throws DomainError on empty or misaligned input.
double cost_functional(const std::vector<VectorXd>& u, const std::vector<VectorXd>& u_hat,
                       const std::vector<VectorXd>& r, double nu, double mu, double t);

}  // namespace dtswarm::snn
