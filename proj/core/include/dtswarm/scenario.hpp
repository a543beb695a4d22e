#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dtswarm/control.hpp"
#include "dtswarm/cvt.hpp"
#include "dtswarm/schedule.hpp"
#include "dtswarm/snn.hpp"
#include "dtswarm/swarm.hpp"

namespace dtswarm {

using Vec3 = Eigen::Vector3d;

/// How a deflected waypoint evolves while an obstacle stays detected.
enum class WaypointMode {
  /// The deflected waypoint is kept and deflected further on later steps
  /// until no obstacle is detected, then released back to the formation
  /// target.
  kPersistent,
  /// Every step starts again from the formation target.
  kPerStep,
};

struct Scenario {
  std::string name = "scenario";
  cvt::Region region;
  swarm::SwarmConfig swarm;  // n_uavs lives here
  control::ControllerGains gains;
  control::AvoidanceParams avoidance;
  WaypointMode waypoint_mode = WaypointMode::kPersistent;
  snn::SpikeNetParams snn;   // snn.dt mirrors dt
  cvt::LloydParams lloyd;    // lloyd.n_generators mirrors swarm.n_uavs
  runtime::CommSchedule schedule;
  Vec3 flock_velocity = Vec3::Zero();
  std::vector<control::Obstacle> obstacles;
  double dt = 0.01;
  double duration = 10.0;
  std::uint64_t master_seed = 1;
  /// Empty means "random-min-separation".
  std::vector<Vec3> initial_positions;
  /// Replaces the derived SNN seed of selected UAVs.
  std::map<int, std::uint64_t> snn_seed_overrides;

  int n_uavs() const { return swarm.n_uavs; }
  int steps() const;
  /// Copies dt and n_uavs into the nested parameter blocks.
  void sync_derived();
  /// Throws ConfigError naming the offending key(s).
  void validate() const;
  std::uint64_t snn_seed(int uav) const;

  bool operator==(const Scenario&) const = default;
};

/// Parses YAML text. Missing keys take the defaults above; unknown keys are
/// rejected. The result is validated.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// Emits YAML that parse_scenario reads back to an equal Scenario.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace dtswarm
