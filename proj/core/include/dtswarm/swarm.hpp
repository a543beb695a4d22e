#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dtswarm::swarm {

using Vec3 = Eigen::Vector3d;

struct AgentState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  int id = 0;
};

struct SwarmConfig {
  int n_uavs = 1;
  double r_d = 3.0;            // detection range (m)
  double r_s = 1.0;            // safety range (m)
  double fov_deg = 60.0;       // field-of-view half-angle (degrees)

  double fov_rad() const;
  /// Throws ConfigError naming the offending keys.
  void validate() const;

  bool operator==(const SwarmConfig&) const = default;
};

/// Forward Euler with the position advanced by the pre-update velocity.
AgentState step_dynamics(const AgentState& agent, const Vec3& u, double dt);

/// Indices j != i with |p_i - p_j| < r_d, ascending.
std::vector<int> neighborhood(int i, const std::vector<AgentState>& agents, double r_d);

/// (p_j - p_i, v_j - v_i). Throws DomainError when i == j or out of range.
std::pair<Vec3, Vec3> relative_state(int i, int j, const std::vector<AgentState>& agents);

/// Smallest pairwise position distance, +inf for fewer than two agents.
double min_pairwise_distance(const std::vector<AgentState>& agents);

}  // namespace dtswarm::swarm
