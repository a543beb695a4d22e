#include "dtswarm/control.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dtswarm/errors.hpp"

namespace dtswarm::control {

namespace {

bool is_spd(const Mat3& m) {
  if (!m.allFinite() || !m.isApprox(m.transpose(), 1e-12)) return false;
  Eigen::LLT<Mat3> llt(m);
  return llt.info() == Eigen::Success;
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

bool detected(const Vec3& p, const Vec3& heading, const Obstacle& obs, double r_d, double fov_rad,
              double eps_v, double* range_out, double* fov_out) {
  const Vec3 to_obs = obs.center - p;
  const double range = to_obs.norm();
  double fov = 0.0;
  if (heading.norm() >= eps_v && range > 0.0) fov = angle_between(heading, to_obs);
  if (range_out) *range_out = range;
  if (fov_out) *fov_out = fov;
  return range < obs.radius + r_d && fov < fov_rad;
}

}  // namespace

void ControllerGains::validate() const {
  if (!is_spd(Kp)) throw ConfigError("gains.kp: must be symmetric positive definite");
  if (!is_spd(Kv)) throw ConfigError("gains.kv: must be symmetric positive definite");
  if (!(kc1 > 0.0)) throw ConfigError("gains.kc1: must be > 0");
  if (!(kc2 > 0.0)) throw ConfigError("gains.kc2: must be > 0");
  if (!(u_max > 0.0)) throw ConfigError("gains.u_max: must be > 0");
  if (!(eps_sing > 0.0)) throw ConfigError("gains.eps_sing: must be > 0");
}

bool DetectionResult::any() const {
  return std::any_of(flags.begin(), flags.end(), [](std::uint8_t f) { return f != 0; });
}

Vec3 clamp_norm(const Vec3& v, double limit) {
  const double n = v.norm();
  if (n <= limit) return v;
  return v * (limit / n);
}

Vec3 formation_control(const Vec3& p, const Vec3& v, const Vec3& c, const ControllerGains& gains) {
  return -gains.Kp * (p - c) - gains.Kv * v;
}

CollisionTerm collision_avoidance(int i, const std::vector<AgentState>& agents,
                                  const std::vector<int>& neighbors, double r_s,
                                  const ControllerGains& gains) {
  CollisionTerm out;
  for (int j : neighbors) {
    const auto [p_ij, v_ij] = swarm::relative_state(i, j, agents);
    const double dist = p_ij.norm();
    const double gap = dist - r_s;
    Vec3 repulse;
    if (dist <= r_s || gap < gains.eps_sing) {
      if (dist <= r_s) out.violations.push_back(j);
      // Coincident agents have no separating direction; split them along x
      // with an antisymmetric sign so the pair still moves apart.
      const Vec3 away = dist > 0.0 ? Vec3(-p_ij / dist) : Vec3(i < j ? -1.0 : 1.0, 0.0, 0.0);
      repulse = gains.u_max * away;
    } else {
      repulse = clamp_norm(-gains.kc1 * p_ij / (gap * gap), gains.u_max);
    }
    out.u += repulse + gains.kc2 * v_ij;
  }
  return out;
}

DetectionResult detect_obstacles(const Vec3& p, const Vec3& v, const std::vector<Obstacle>& obstacles,
                                 double r_d, double fov_rad, double eps_v) {
  DetectionResult res;
  res.flags.reserve(obstacles.size());
  res.range.reserve(obstacles.size());
  res.fov.reserve(obstacles.size());
  for (const auto& obs : obstacles) {
    double range = 0.0;
    double fov = 0.0;
    const bool hit = detected(p, v, obs, r_d, fov_rad, eps_v, &range, &fov);
    res.flags.push_back(hit ? 1 : 0);
    res.range.push_back(range);
    res.fov.push_back(fov);
  }
  return res;
}

Vec3 avoid_obstacle(const Vec3& target, const Vec3& p, const Vec3& v, const Obstacle& obstacle,
                    double r_d, double fov_rad, const AvoidanceParams& params) {
  if (!detected(p, v, obstacle, r_d, fov_rad, params.eps_v, nullptr, nullptr)) return target;

  const int lateral =
      std::abs(p.y() - obstacle.center.y()) >= std::abs(p.z() - obstacle.center.z()) ? 1 : 2;
  const bool positive_side = p(lateral) > obstacle.center(lateral);

  Vec3 adjusted = target;
  for (int pass = 0; pass < params.max_iters; ++pass) {
    adjusted.x() /= params.scaler;
    if (positive_side) {
      adjusted(lateral) *= params.scaler;
    } else {
      adjusted(lateral) /= params.scaler;
    }
    if (!detected(p, adjusted - p, obstacle, r_d, fov_rad, params.eps_v, nullptr, nullptr)) {
      return adjusted;
    }
  }
  throw AvoidanceFailure(fmt::format(
      "waypoint deflection did not clear obstacle at ({}, {}, {}) after {} passes",
      obstacle.center.x(), obstacle.center.y(), obstacle.center.z(), params.max_iters));
}

Vec3 total_control(const Vec3& u_f, const Vec3& u_c, double u_max) {
  return clamp_norm(u_f + u_c, u_max);
}

}  // namespace dtswarm::control
