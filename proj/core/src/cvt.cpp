#include "dtswarm/cvt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "dtswarm/errors.hpp"

namespace dtswarm::cvt {

bool Region::contains(const Vec3& p, double tol) const {
  for (int a = 0; a < 3; ++a) {
    if (p(a) < lo(a) - tol || p(a) > hi(a) + tol) return false;
  }
  return true;
}

Vec3 Region::project(const Vec3& p) const {
  Vec3 q = p;
  for (int a = 0; a < 3; ++a) {
    if (is_fixed(a)) q(a) = lo(a);
  }
  return q;
}

void Region::validate() const {
  static constexpr const char* kAxis[] = {"x", "y", "z"};
  int free_axes = 0;
  for (int a = 0; a < 3; ++a) {
    if (!std::isfinite(lo(a)) || !std::isfinite(hi(a)) || lo(a) > hi(a)) {
      throw ConfigError(fmt::format("region.{}: lower bound must not exceed upper bound", kAxis[a]));
    }
    if (lo(a) < hi(a)) ++free_axes;
  }
  if (free_axes == 0) throw ConfigError("region: at least one axis must have extent");
}

void LloydParams::validate() const {
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  if (n_generators < 1) throw ConfigError("lloyd.n_generators: must be >= 1");
  if (!near(alpha1 + alpha2, 1.0)) throw ConfigError("lloyd.alpha1 + lloyd.alpha2 must equal 1");
  if (!near(beta1 + beta2, 1.0)) throw ConfigError("lloyd.beta1 + lloyd.beta2 must equal 1");
  if (!(alpha2 > 0.0)) throw ConfigError("lloyd.alpha2: must be > 0");
  if (!(beta2 > 0.0)) throw ConfigError("lloyd.beta2: must be > 0");
  if (effective_samples() < n_generators) {
    throw ConfigError("lloyd.samples_per_iter: must be >= n_generators");
  }
  if (max_iters < 1) throw ConfigError("lloyd.max_iters: must be >= 1");
  if (!(move_tol > 0.0)) throw ConfigError("lloyd.move_tol: must be > 0");
}

PointList sample_region(const Region& region, int s_num, Rng& rng) {
  PointList out;
  out.reserve(static_cast<std::size_t>(std::max(s_num, 0)));
  for (int s = 0; s < s_num; ++s) {
    Vec3 p;
    for (int a = 0; a < 3; ++a) {
      p(a) = region.is_fixed(a) ? region.lo(a) : rng.uniform(region.lo(a), region.hi(a));
    }
    out.push_back(p);
  }
  return out;
}

std::vector<int> assign_nearest(const PointList& samples, const PointList& generators) {
  if (generators.empty()) throw DomainError("assign_nearest: no generators");
  std::vector<int> label(samples.size(), 0);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < generators.size(); ++g) {
      const double d = (samples[s] - generators[g]).squaredNorm();
      if (d < best) {
        best = d;
        label[s] = static_cast<int>(g);
      }
    }
  }
  return label;
}

LloydStep lloyd_update(const Vec3& x, const Vec3& w_bar, int j, const LloydParams& params) {
  const double jd = static_cast<double>(j);
  const double denom = jd + 1.0;
  const double keep = (params.alpha1 * jd + params.beta1) / denom;
  const double pull = (params.alpha2 * jd + params.beta2) / denom;
  return {keep * x + pull * w_bar, j + 1};
}

CvtResult run_cvt(const Region& region, const LloydParams& params, Rng& rng) {
  region.validate();
  params.validate();
  const int n = params.n_generators;
  const int s_num = params.effective_samples();

  CvtResult res;
  res.generators = sample_region(region, n, rng);
  std::vector<int> counters(static_cast<std::size_t>(n), 1);

  for (int it = 0; it < params.max_iters; ++it) {
    const PointList samples = sample_region(region, s_num, rng);
    const std::vector<int> label = assign_nearest(samples, res.generators);

    std::vector<Vec3> sum(static_cast<std::size_t>(n), Vec3::Zero());
    std::vector<int> count(static_cast<std::size_t>(n), 0);
    double energy = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const auto g = static_cast<std::size_t>(label[s]);
      sum[g] += samples[s];
      ++count[g];
      energy += (samples[s] - res.generators[g]).squaredNorm();
    }
    res.energy.push_back(energy / static_cast<double>(samples.size()));

    double max_move = 0.0;
    for (std::size_t g = 0; g < static_cast<std::size_t>(n); ++g) {
      if (count[g] == 0) continue;  // empty cell: generator and counter unchanged
      const Vec3 w_bar = sum[g] / static_cast<double>(count[g]);
      const LloydStep step = lloyd_update(res.generators[g], w_bar, counters[g], params);
      const Vec3 next = region.project(step.x);
      max_move = std::max(max_move, (next - res.generators[g]).norm());
      res.generators[g] = next;
      counters[g] = step.j;
    }
    res.iterations = it + 1;
    if (max_move < params.move_tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace dtswarm::cvt
