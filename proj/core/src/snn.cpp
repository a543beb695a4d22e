#include "dtswarm/snn.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "dtswarm/errors.hpp"
#include "dtswarm/rng.hpp"

namespace dtswarm::snn {

namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) throw ConfigError(fmt::format("snn.{}: must satisfy {}", field, rule));
}

void check_finite(const SpikeNetState& state, const SpikeNetParams& params) {
  const double peak = state.sigma.cwiseAbs().maxCoeff();
  if (!std::isfinite(peak)) {
    throw NumericalDivergence("membrane potential became non-finite");
  }
  if (peak > params.sigma_limit) {
    throw NumericalDivergence(
        fmt::format("membrane potential {:.6g} exceeds guard {:.6g}", peak, params.sigma_limit));
  }
}

}  // namespace

void SpikeNetParams::validate() const {
  require(n_neurons >= 1, "n_neurons", ">= 1");
  require(signal_dim >= 1, "signal_dim", ">= 1");
  require(std::isfinite(leak) && leak >= 0.0, "leak", ">= 0");
  require(std::isfinite(sparsity) && sparsity >= 0.0, "sparsity", ">= 0");
  require(std::isfinite(quad_cost) && quad_cost >= 0.0, "quad_cost", ">= 0");
  require(std::isfinite(error_gain) && error_gain > 0.0, "error_gain", "> 0");
  require(std::isfinite(learn_rate) && learn_rate >= 0.0, "learn_rate", ">= 0");
  require(std::isfinite(dt) && dt > 0.0, "dt", "> 0");
  require(leak * dt <= 1.0, "leak", "leak * dt <= 1 so the trace decay stays in [0, 1]");
  require(std::isfinite(trace_increment) && trace_increment > 0.0, "trace_increment", "> 0");
  require(std::isfinite(membrane_bound) && membrane_bound >= 0.0, "membrane_bound", ">= 0");
  require(sigma_limit > 0.0, "sigma_limit", "> 0");
}

double SpikeNetParams::fast_gain() const {
  return fast_recurrence == FastRecurrence::kMatched ? error_gain * dt * trace_increment : 1.0;
}

void rebuild_derived(SpikeNetState& state, const SpikeNetParams& params) {
  state.T = (state.D.colwise().squaredNorm().transpose().array() + params.sparsity +
             params.quad_cost) /
            2.0;
  state.omega_f = params.fast_gain() * (state.D.transpose() * state.D);
  state.omega_f.diagonal().array() += params.quad_cost;
}

SpikeNetState init_network_with_decoder(const SpikeNetParams& params, const MatrixXd& D,
                                        std::uint64_t seed) {
  params.validate();
  const int n = params.n_neurons;
  if (D.rows() != params.signal_dim || D.cols() != n) {
    throw ConfigError(fmt::format("snn decoder must be {}x{}, got {}x{}", params.signal_dim, n,
                                  D.rows(), D.cols()));
  }
  Rng rng(seed);
  // Consume the decoder draws even when D is supplied so M and theta match
  // init_network for the same seed.
  for (int i = 0; i < params.signal_dim * n; ++i) rng.normal();

  SpikeNetState s;
  s.D = D;
  const double m_scale = 1.0 / std::sqrt(static_cast<double>(n));
  s.M.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) s.M(i, j) = m_scale * rng.normal();
  s.theta.resize(n);
  for (int i = 0; i < n; ++i) s.theta(i) = rng.normal();
  s.omega_s = MatrixXd::Zero(n, n);
  s.sigma = VectorXd::Zero(n);
  s.r = VectorXd::Zero(n);
  rebuild_derived(s, params);
  return s;
}

SpikeNetState init_network(const SpikeNetParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  MatrixXd D(params.signal_dim, params.n_neurons);
  for (int j = 0; j < D.cols(); ++j)
    for (int i = 0; i < D.rows(); ++i) D(i, j) = rng.normal();
  return init_network_with_decoder(params, D, seed);
}

VectorXd dendritic_nonlinearity(const VectorXd& r, const MatrixXd& M, const VectorXd& theta) {
  return (M.transpose() * r + theta).array().tanh().matrix();
}

VectorXd decode(const MatrixXd& D, const VectorXd& r) { return D * r; }

VectorXd step_network(SpikeNetState& state, const SpikeNetParams& params, const VectorXd& e) {
  const int n = state.n_neurons();
  const double dt = params.dt;

  const VectorXd psi = dendritic_nonlinearity(state.r, state.M, state.theta);
  state.sigma += dt * (-params.leak * state.sigma + state.omega_s * psi +
                       params.error_gain * (state.D.transpose() * e));

  if (params.membrane_bound > 0.0) {
    const VectorXd bound =
        params.membrane_bound * (state.T + state.omega_f.diagonal());
    state.sigma = state.sigma.cwiseMax(-bound).cwiseMin(bound);
  }

  VectorXd spikes = VectorXd::Zero(n);
  int fired = 0;
  if (params.firing == FiringMode::kSimultaneous) {
    for (int i = 0; i < n; ++i) {
      if (state.sigma(i) > state.T(i)) {
        spikes(i) = 1.0;
        ++fired;
      }
    }
    if (fired > 0) state.sigma -= state.omega_f * spikes;
  } else {
    for (;;) {
      int best = -1;
      double best_margin = 0.0;
      for (int i = 0; i < n; ++i) {
        if (spikes(i) != 0.0) continue;
        const double margin = state.sigma(i) - state.T(i);
        if (margin > best_margin) {
          best_margin = margin;
          best = i;
        }
      }
      if (best < 0) break;
      spikes(best) = 1.0;
      ++fired;
      state.sigma -= state.omega_f.col(best);
    }
  }

  state.r = (1.0 - params.leak * dt) * state.r + params.trace_increment * spikes;
  state.spike_count += static_cast<std::uint64_t>(fired);
  check_finite(state, params);
  return spikes;
}

void update_slow_weights(SpikeNetState& state, const SpikeNetParams& params, const VectorXd& e) {
  const VectorXd psi = dendritic_nonlinearity(state.r, state.M, state.theta);
  const VectorXd drive = state.D.transpose() * e;
  state.omega_s.noalias() += (params.dt * params.learn_rate) * psi * drive.transpose();
}

double cost_functional(const std::vector<VectorXd>& u, const std::vector<VectorXd>& u_hat,
                       const std::vector<VectorXd>& r, double nu, double mu, double t) {
  if (u.empty()) throw DomainError("cost_functional: empty history");
  if (u.size() != u_hat.size() || u.size() != r.size()) {
    throw DomainError("cost_functional: histories have different lengths");
  }
  if (!(t > 0.0)) throw DomainError("cost_functional: t must be positive");

  auto integrand = [&](std::size_t i) {
    return (u[i] - u_hat[i]).squaredNorm() + nu * r[i].lpNorm<1>() + mu * r[i].squaredNorm();
  };
  const std::size_t count = u.size();
  if (count == 1) return integrand(0);

  const double h = t / static_cast<double>(count - 1);
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < count; ++i) area += 0.5 * h * (integrand(i) + integrand(i + 1));
  return area / t;
}

}  // namespace dtswarm::snn
