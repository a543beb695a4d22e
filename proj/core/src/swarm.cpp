#include "dtswarm/swarm.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "dtswarm/errors.hpp"

namespace dtswarm::swarm {

double SwarmConfig::fov_rad() const { return fov_deg * std::numbers::pi / 180.0; }

void SwarmConfig::validate() const {
  if (n_uavs < 1) throw ConfigError("swarm.n_uavs: must be >= 1");
  if (!(r_s > 0.0)) throw ConfigError("swarm.r_s: must be > 0");
  if (!(r_s < r_d)) {
    throw ConfigError(fmt::format("swarm.r_s ({}) must be smaller than swarm.r_d ({})", r_s, r_d));
  }
  if (!(fov_deg > 0.0 && fov_deg <= 180.0)) {
    throw ConfigError("swarm.fov_deg: must lie in (0, 180]");
  }
}

AgentState step_dynamics(const AgentState& agent, const Vec3& u, double dt) {
  AgentState next = agent;
  next.p = agent.p + dt * agent.v;
  next.v = agent.v + dt * u;
  return next;
}

std::vector<int> neighborhood(int i, const std::vector<AgentState>& agents, double r_d) {
  std::vector<int> out;
  const Vec3& pi = agents.at(static_cast<std::size_t>(i)).p;
  for (int j = 0; j < static_cast<int>(agents.size()); ++j) {
    if (j == i) continue;
    if ((agents[static_cast<std::size_t>(j)].p - pi).norm() < r_d) out.push_back(j);
  }
  return out;
}

std::pair<Vec3, Vec3> relative_state(int i, int j, const std::vector<AgentState>& agents) {
  const int n = static_cast<int>(agents.size());
  if (i == j) throw DomainError(fmt::format("relative_state: i and j are both {}", i));
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw DomainError(fmt::format("relative_state: index out of range ({}, {}) for {} agents", i, j, n));
  }
  const auto& a = agents[static_cast<std::size_t>(i)];
  const auto& b = agents[static_cast<std::size_t>(j)];
  return {b.p - a.p, b.v - a.v};
}

double min_pairwise_distance(const std::vector<AgentState>& agents) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < agents.size(); ++a)
    for (std::size_t b = a + 1; b < agents.size(); ++b)
      best = std::min(best, (agents[a].p - agents[b].p).norm());
  return best;
}

}  // namespace dtswarm::swarm
