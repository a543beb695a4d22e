#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dtswarm/control.hpp"
#include "dtswarm/scenario.hpp"
#include "dtswarm/schedule.hpp"
#include "dtswarm/snn.hpp"
#include "dtswarm/swarm.hpp"

namespace dtswarm::runtime {

using swarm::AgentState;

struct EpisodePhase {
  std::vector<Vec3> centroids;  // per UAV, already assigned
  Vec3 flock_velocity = Vec3::Zero();
  double duration = 0.0;
};

struct ControlSample {
  int step = 0;
  int uav = 0;
  Vec3 u_cloud = Vec3::Zero();
  Vec3 u_hat = Vec3::Zero();  // decode(D, r) after the network step
  std::optional<double> err_norm;  // |u_cloud - u_hat| on gated steps only
  bool gated = false;
};

struct SpikeEvent {
  int step = 0;
  int uav = 0;
  int neuron = 0;
};

/// Cloud-side controller acting on the virtual twins. Holds the deflected
/// waypoints between steps when the scenario asks for persistent deflection.
class CloudController {
 public:
  CloudController(const Scenario& scenario, EpisodePhase phase);

  struct Output {
    std::vector<Vec3> u;
    std::vector<std::uint8_t> detecting;  // per UAV, any obstacle flagged
    /// (uav, obstacle) pairs flagged this step.
    std::vector<std::pair<int, int>> detections;
    int collision_violations = 0;
  };

  /// Computes u for every twin from the step-start snapshot, then integrates
  /// the twins with it.
  Output step(std::vector<AgentState>& twins, int step);

  /// Formation target of `uav` at time t.
  Vec3 target(int uav, double t) const;
  /// Obstacle list moved to time t.
  std::vector<control::Obstacle> obstacles_at(double t) const;

 private:
  const Scenario& scenario_;
  EpisodePhase phase_;
  std::vector<std::optional<Vec3>> waypoints_;
};

/// Per-UAV edge controllers: one SNN and one plant state each.
struct EdgeFleet {
  std::vector<snn::SpikeNetState> nets;
  std::vector<AgentState> states;
};

struct EdgeOutput {
  std::vector<ControlSample> samples;  // one per UAV
  std::vector<snn::VectorXd> spikes;   // one 0/1 vector per UAV
};

/// Feeds the cloud controls to the edge networks (error current only when
/// gated), applies threshold-gated learning, steps every network and flies
/// every edge plant on its decoded output. Numerical divergence is rethrown
/// naming the UAV and step.
EdgeOutput edge_step(EdgeFleet& fleet, const snn::SpikeNetParams& params,
                     const std::vector<Vec3>& u_cloud, bool gated, const CommSchedule& schedule,
                     double dt, int step);

/// Everything a run produces. Per-step tables are step-major: entry
/// step * n_uavs + uav.
struct RunArtifacts {
  std::string scenario_name;
  std::uint64_t master_seed = 0;
  int n_uavs = 0;
  int n_neurons = 0;
  int steps = 0;
  double dt = 0.0;

  cvt::CvtResult cvt;
  std::vector<int> generator_for_uav;
  std::vector<Vec3> initial_positions;

  std::vector<AgentState> twin;  // start-of-step states
  std::vector<AgentState> edge;
  std::vector<ControlSample> control;
  std::vector<SpikeEvent> spikes;
  /// (step, uav, obstacle) for every flagged detection.
  struct Detection {
    int step, uav, obstacle;
  };
  std::vector<Detection> detections;

  std::vector<double> min_pairwise;  // per step, twin fleet
  int safety_violation_steps = 0;    // steps with min_pairwise < r_s
  int collision_violation_events = 0;

  std::vector<std::uint64_t> spike_totals;
  std::vector<double> utilization;  // fraction of n_neurons * steps
  std::vector<double> rms_divergence;
  std::vector<double> max_divergence;
  std::vector<int> detection_steps;  // steps with any obstacle flagged, per UAV

  double fleet_mean_utilization() const;
  double overall_min_pairwise() const;
};

/// Rejection-samples n points inside the region with pairwise distance
/// greater than min_sep. Throws ConfigError when the region is too crowded.
std::vector<Vec3> random_min_separation(const cvt::Region& region, int n, double min_sep, Rng& rng);

RunArtifacts run_episode(const Scenario& scenario);

}  // namespace dtswarm::runtime
