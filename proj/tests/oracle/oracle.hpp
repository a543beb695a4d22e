#pragma once

// Reference implementations written with plain loops over std::vector, kept
// free of Eigen and of the library so they can check it independently.

#include <array>
#include <cstdint>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using P3 = std::array<double, 3>;

/// Dense row-major matrix.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i * cols + j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * cols + j)]; }
};

struct NetParams {
  double leak = 0.0;
  double nu = 0.0;
  double mu = 0.0;
  double k = 1.0;
  double eta = 0.0;
  double dt = 0.01;
  double trace_increment = 1.0;
  double fast_gain = 1.0;
  bool sequential = false;
  double membrane_bound = 0.0;
};

struct Net {
  Vec sigma;
  Vec r;
  Mat D;        // d x n
  Mat omega_f;  // n x n
  Mat omega_s;  // n x n
  Mat M;        // n x n
  Vec theta;
  Vec T;
};

Vec thresholds(const Mat& D, double nu, double mu);
Mat fast_weights(const Mat& D, double gain, double mu);
Vec psi(const Vec& r, const Mat& M, const Vec& theta);

/// One network step. Returns the 0/1 spike vector.
Vec step(Net& net, const NetParams& p, const Vec& e);
void learn(Net& net, const NetParams& p, const Vec& e);

P3 lloyd(const P3& x, const P3& w_bar, int j, double a1, double a2, double b1, double b2);

struct Collision {
  P3 u{0.0, 0.0, 0.0};
  std::vector<int> violations;
};
Collision collision(int i, const std::vector<P3>& pos, const std::vector<P3>& vel,
                    const std::vector<int>& neighbors, double r_s, double kc1, double kc2,
                    double u_max, double eps_sing);

struct Detection {
  std::vector<int> flags;
  Vec range;
  Vec fov;
};
Detection detect(const P3& p, const P3& v, const std::vector<P3>& centers, const Vec& radii,
                 double r_d, double fov_rad, double eps_v);

/// Minimum total cost over all permutations (n <= 8).
double brute_force_assignment(const std::vector<Vec>& cost, std::vector<int>* best = nullptr);

}  // namespace oracle
