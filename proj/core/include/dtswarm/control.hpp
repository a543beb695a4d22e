#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dtswarm/swarm.hpp"

namespace dtswarm::control {

using swarm::AgentState;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct ControllerGains {
  Mat3 Kp = Mat3::Identity();
  Mat3 Kv = Mat3::Identity();
  double kc1 = 1.0;
  double kc2 = 1.0;
  double u_max = 20.0;
  double eps_sing = 1e-6;  // gap below which a repulsive term saturates

  /// Throws ConfigError naming the offending key. Kp and Kv must be symmetric
  /// positive definite.
  void validate() const;

  bool operator==(const ControllerGains&) const = default;
};

struct Obstacle {
  Vec3 center = Vec3::Zero();
  double radius = 0.5;
  Vec3 velocity = Vec3::Zero();

  bool operator==(const Obstacle&) const = default;
};

struct DetectionResult {
  std::vector<std::uint8_t> flags;  // 1 when detected
  std::vector<double> range;        // |p_obs - p|
  std::vector<double> fov;          // angle between v and p_obs - p (rad)

  bool any() const;
};

/// u_f = -Kp (p - c) - Kv v.
Vec3 formation_control(const Vec3& p, const Vec3& v, const Vec3& c, const ControllerGains& gains);

struct CollisionTerm {
  Vec3 u = Vec3::Zero();
  /// Neighbours closer than or at r_s. The term for each is saturated at
  /// u_max pointing away from the neighbour.
  std::vector<int> violations;
};

/// Sum over j in `neighbors` of -kc1 p_ij / (|p_ij| - r_s)^2 + kc2 v_ij.
/// The repulsive part of every pair is norm-clamped to u_max; when the gap
/// |p_ij| - r_s is below eps_sing it is u_max pointing away from j.
CollisionTerm collision_avoidance(int i, const std::vector<AgentState>& agents,
                                  const std::vector<int>& neighbors, double r_s,
                                  const ControllerGains& gains);

/// Velocities below this norm make the field-of-view test pass.
inline constexpr double kDefaultEpsV = 1e-3;

DetectionResult detect_obstacles(const Vec3& p, const Vec3& v, const std::vector<Obstacle>& obstacles,
                                 double r_d, double fov_rad, double eps_v = kDefaultEpsV);

struct AvoidanceParams {
  double scaler = 1.05;
  int max_iters = 100;
  double eps_v = kDefaultEpsV;

  bool operator==(const AvoidanceParams&) const = default;
};

/// Multiplicative waypoint deflection. Each pass divides target.x by scaler
/// and scales the lateral coordinate (y or z, whichever has the larger
/// |p - center| clearance) up when the UAV is on the positive side of the
/// obstacle and down otherwise, then re-runs detection with the heading
/// (target - p). Returns `target` unchanged when the obstacle is not detected
/// on entry. Throws AvoidanceFailure after max_iters passes.
Vec3 avoid_obstacle(const Vec3& target, const Vec3& p, const Vec3& v, const Obstacle& obstacle,
                    double r_d, double fov_rad, const AvoidanceParams& params);

/// u = u_f + u_c, norm-clamped to u_max with direction preserved.
Vec3 total_control(const Vec3& u_f, const Vec3& u_c, double u_max);

/// Norm clamp helper shared by the control laws.
Vec3 clamp_norm(const Vec3& v, double limit);

}  // namespace dtswarm::control
