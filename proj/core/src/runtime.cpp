#include "dtswarm/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "dtswarm/assignment.hpp"
#include "dtswarm/errors.hpp"
#include "dtswarm/rng.hpp"

namespace dtswarm::runtime {

void CommSchedule::validate() const {
  if (learning_steps < 0) throw ConfigError("schedule.learning_steps: must be >= 0");
  if (update_period < 1) throw ConfigError("schedule.update_period: must be >= 1");
  if (!(err_update_threshold >= 0.0)) {
    throw ConfigError("schedule.err_update_threshold: must be >= 0");
  }
}

bool comm_gate(int step, const CommSchedule& schedule) {
  return step < schedule.learning_steps || step % schedule.update_period == 0;
}

// ------------------------------------------------------------------ cloud

CloudController::CloudController(const Scenario& scenario, EpisodePhase phase)
    : scenario_(scenario),
      phase_(std::move(phase)),
      waypoints_(static_cast<std::size_t>(scenario.n_uavs())) {}

Vec3 CloudController::target(int uav, double t) const {
  return phase_.centroids.at(static_cast<std::size_t>(uav)) + phase_.flock_velocity * t;
}

std::vector<control::Obstacle> CloudController::obstacles_at(double t) const {
  std::vector<control::Obstacle> moved = scenario_.obstacles;
  for (auto& o : moved) o.center += o.velocity * t;
  return moved;
}

CloudController::Output CloudController::step(std::vector<AgentState>& twins, int step) {
  const int n = static_cast<int>(twins.size());
  const double t = step * scenario_.dt;
  const auto& cfg = scenario_.swarm;
  const double fov = cfg.fov_rad();
  const std::vector<control::Obstacle> obstacles = obstacles_at(t);
  const bool persistent = scenario_.waypoint_mode == WaypointMode::kPersistent;

  Output out;
  out.u.assign(static_cast<std::size_t>(n), Vec3::Zero());
  out.detecting.assign(static_cast<std::size_t>(n), 0);

  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const AgentState& me = twins[ui];

    Vec3 goal = target(i, t);
    if (persistent && waypoints_[ui]) goal = *waypoints_[ui];

    const control::DetectionResult det =
        control::detect_obstacles(me.p, me.v, obstacles, cfg.r_d, fov, scenario_.avoidance.eps_v);
    for (std::size_t k = 0; k < obstacles.size(); ++k) {
      if (!det.flags[k]) continue;
      out.detections.emplace_back(i, static_cast<int>(k));
      try {
        goal = control::avoid_obstacle(goal, me.p, me.v, obstacles[k], cfg.r_d, fov,
                                       scenario_.avoidance);
      } catch (const AvoidanceFailure& e) {
        throw AvoidanceFailure(fmt::format("step {}: UAV {} obstacle {}: {}", step, i, k, e.what()));
      }
    }
    out.detecting[ui] = det.any() ? 1 : 0;
    if (persistent) {
      if (det.any()) {
        waypoints_[ui] = goal;
      } else {
        waypoints_[ui].reset();
      }
    }

    const Vec3 u_f = control::formation_control(me.p, me.v, goal, scenario_.gains);
    const std::vector<int> nbrs = swarm::neighborhood(i, twins, cfg.r_d);
    const control::CollisionTerm u_c =
        control::collision_avoidance(i, twins, nbrs, cfg.r_s, scenario_.gains);
    out.collision_violations += static_cast<int>(u_c.violations.size());
    out.u[ui] = control::total_control(u_f, u_c.u, scenario_.gains.u_max);
  }

  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    twins[ui] = swarm::step_dynamics(twins[ui], out.u[ui], scenario_.dt);
  }
  return out;
}

// ------------------------------------------------------------------- edge

EdgeOutput edge_step(EdgeFleet& fleet, const snn::SpikeNetParams& params,
                     const std::vector<Vec3>& u_cloud, bool gated, const CommSchedule& schedule,
                     double dt, int step) {
  const std::size_t n = fleet.nets.size();
  EdgeOutput out;
  out.samples.resize(n);
  out.spikes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    snn::SpikeNetState& net = fleet.nets[i];
    snn::VectorXd e = snn::VectorXd::Zero(params.signal_dim);
    if (gated) {
      e = u_cloud[i] - snn::decode(net.D, net.r);
      if (e.norm() > schedule.err_update_threshold) snn::update_slow_weights(net, params, e);
    }
    try {
      out.spikes[i] = snn::step_network(net, params, e);
    } catch (const NumericalDivergence& err) {
      throw NumericalDivergence(fmt::format("step {}: UAV {}: {}", step, i, err.what()));
    }
    const Vec3 u_hat = snn::decode(net.D, net.r);
    fleet.states[i] = swarm::step_dynamics(fleet.states[i], u_hat, dt);

    ControlSample& sample = out.samples[i];
    sample.step = step;
    sample.uav = static_cast<int>(i);
    sample.u_cloud = u_cloud[i];
    sample.u_hat = u_hat;
    sample.gated = gated;
    if (gated) sample.err_norm = (u_cloud[i] - u_hat).norm();
  }
  return out;
}

// ---------------------------------------------------------------- episode

double RunArtifacts::fleet_mean_utilization() const {
  if (utilization.empty()) return 0.0;
  double sum = 0.0;
  for (double u : utilization) sum += u;
  return sum / static_cast<double>(utilization.size());
}

double RunArtifacts::overall_min_pairwise() const {
  double best = std::numeric_limits<double>::infinity();
  for (double d : min_pairwise) best = std::min(best, d);
  return best;
}

std::vector<Vec3> random_min_separation(const cvt::Region& region, int n, double min_sep, Rng& rng) {
  constexpr int kAttemptsPerPoint = 100000;
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(pts.size()) < n) {
    bool placed = false;
    for (int attempt = 0; attempt < kAttemptsPerPoint && !placed; ++attempt) {
      const Vec3 cand = cvt::sample_region(region, 1, rng).front();
      placed = std::all_of(pts.begin(), pts.end(),
                           [&](const Vec3& q) { return (cand - q).norm() > min_sep; });
      if (placed) pts.push_back(cand);
    }
    if (!placed) {
      throw ConfigError(fmt::format(
          "initial_positions: could not place {} UAVs {} m apart inside the region", n, min_sep));
    }
  }
  return pts;
}

RunArtifacts run_episode(const Scenario& scenario) {
  scenario.validate();
  const int n = scenario.n_uavs();
  const int steps = scenario.steps();
  const std::size_t un = static_cast<std::size_t>(n);

  RunArtifacts art;
  art.scenario_name = scenario.name;
  art.master_seed = scenario.master_seed;
  art.n_uavs = n;
  art.n_neurons = scenario.snn.n_neurons;
  art.steps = steps;
  art.dt = scenario.dt;

  Rng cvt_rng(derive_seed(scenario.master_seed, stream::kCvt));
  art.cvt = cvt::run_cvt(scenario.region, scenario.lloyd, cvt_rng);

  if (scenario.initial_positions.empty()) {
    Rng place_rng(derive_seed(scenario.master_seed, stream::kInitialPositions));
    art.initial_positions =
        random_min_separation(scenario.region, n, 2.0 * scenario.swarm.r_s, place_rng);
  } else {
    art.initial_positions = scenario.initial_positions;
  }
  art.generator_for_uav =
      assignment::assign_generators_to_uavs(art.cvt.generators, art.initial_positions);

  EpisodePhase phase;
  phase.flock_velocity = scenario.flock_velocity;
  phase.duration = scenario.duration;
  for (int i = 0; i < n; ++i) {
    phase.centroids.push_back(
        art.cvt.generators[static_cast<std::size_t>(art.generator_for_uav[static_cast<std::size_t>(i)])]);
  }

  std::vector<AgentState> twins(un);
  EdgeFleet fleet;
  fleet.states.resize(un);
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    twins[ui].p = art.initial_positions[ui];
    twins[ui].id = i;
    fleet.states[ui] = twins[ui];
    fleet.nets.push_back(snn::init_network(scenario.snn, scenario.snn_seed(i)));
  }

  CloudController cloud(scenario, phase);
  art.twin.reserve(un * static_cast<std::size_t>(steps));
  art.edge.reserve(un * static_cast<std::size_t>(steps));
  art.control.reserve(un * static_cast<std::size_t>(steps));
  art.min_pairwise.reserve(static_cast<std::size_t>(steps));
  art.detection_steps.assign(un, 0);

  for (int s = 0; s < steps; ++s) {
    art.twin.insert(art.twin.end(), twins.begin(), twins.end());
    art.edge.insert(art.edge.end(), fleet.states.begin(), fleet.states.end());
    const double dmin = swarm::min_pairwise_distance(twins);
    art.min_pairwise.push_back(dmin);
    if (dmin < scenario.swarm.r_s) ++art.safety_violation_steps;

    const CloudController::Output cloud_out = cloud.step(twins, s);
    art.collision_violation_events += cloud_out.collision_violations;
    for (const auto& [uav, obs] : cloud_out.detections) art.detections.push_back({s, uav, obs});
    for (std::size_t i = 0; i < un; ++i) art.detection_steps[i] += cloud_out.detecting[i];

    const bool gated = comm_gate(s, scenario.schedule);
    EdgeOutput edge_out =
        edge_step(fleet, scenario.snn, cloud_out.u, gated, scenario.schedule, scenario.dt, s);
    for (std::size_t i = 0; i < un; ++i) {
      art.control.push_back(edge_out.samples[i]);
      const snn::VectorXd& spk = edge_out.spikes[i];
      for (Eigen::Index k = 0; k < spk.size(); ++k) {
        if (spk(k) != 0.0) art.spikes.push_back({s, static_cast<int>(i), static_cast<int>(k)});
      }
    }
  }

  art.spike_totals.assign(un, 0);
  for (const auto& ev : art.spikes) ++art.spike_totals[static_cast<std::size_t>(ev.uav)];
  art.utilization.assign(un, 0.0);
  art.rms_divergence.assign(un, 0.0);
  art.max_divergence.assign(un, 0.0);
  const double capacity = static_cast<double>(art.n_neurons) * static_cast<double>(steps);
  for (std::size_t i = 0; i < un; ++i) {
    if (steps > 0) art.utilization[i] = static_cast<double>(art.spike_totals[i]) / capacity;
    double sq = 0.0;
    for (int s = 0; s < steps; ++s) {
      const std::size_t row = static_cast<std::size_t>(s) * un + i;
      const double d = (art.edge[row].p - art.twin[row].p).norm();
      sq += d * d;
      art.max_divergence[i] = std::max(art.max_divergence[i], d);
    }
    if (steps > 0) art.rms_divergence[i] = std::sqrt(sq / steps);
  }
  return art;
}

}  // namespace dtswarm::runtime
