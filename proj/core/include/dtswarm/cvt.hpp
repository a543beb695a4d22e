#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dtswarm/rng.hpp"

namespace dtswarm::cvt {

using Vec3 = Eigen::Vector3d;
using PointList = std::vector<Vec3>;

/// Axis-aligned box with uniform density. An axis whose lower and upper
/// bounds coincide is fixed; samples and generators are projected onto it.
struct Region {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();

  static Region box(const Vec3& lo, const Vec3& hi) { return {lo, hi}; }
  static Region fixed_z(double x0, double x1, double y0, double y1, double z) {
    return {Vec3(x0, y0, z), Vec3(x1, y1, z)};
  }

  bool is_fixed(int axis) const { return lo(axis) == hi(axis); }
  bool is_fixed_z() const { return is_fixed(2); }
  Vec3 centroid() const { return 0.5 * (lo + hi); }
  double diagonal() const { return (hi - lo).norm(); }
  bool contains(const Vec3& p, double tol = 0.0) const;
  Vec3 project(const Vec3& p) const;
  /// Throws ConfigError unless lo <= hi on every axis with at least one free axis.
  void validate() const;

  bool operator==(const Region&) const = default;
};

struct LloydParams {
  int n_generators = 1;
  int samples_per_iter = 0;  // 0 means 100 * n_generators
  double alpha1 = 0.0;
  double alpha2 = 1.0;
  double beta1 = 0.0;
  double beta2 = 1.0;
  int max_iters = 200;
  double move_tol = 1e-3;

  int effective_samples() const { return samples_per_iter > 0 ? samples_per_iter : 100 * n_generators; }
  void validate() const;

  bool operator==(const LloydParams&) const = default;
};

PointList sample_region(const Region& region, int s_num, Rng& rng);

/// Label of the nearest generator for every sample, ties to the lowest index.
std::vector<int> assign_nearest(const PointList& samples, const PointList& generators);

struct LloydStep {
  Vec3 x;
  int j;
};

/// x' = ((a1 j + b1)/(j+1)) x + ((a2 j + b2)/(j+1)) w_bar, j' = j + 1.
LloydStep lloyd_update(const Vec3& x, const Vec3& w_bar, int j, const LloydParams& params);

struct CvtResult {
  PointList generators;
  int iterations = 0;
  bool converged = false;
  /// Mean squared distance from each iteration's samples to their nearest
  /// generator, evaluated before that iteration's update.
  std::vector<double> energy;
};

CvtResult run_cvt(const Region& region, const LloydParams& params, Rng& rng);

}  // namespace dtswarm::cvt
