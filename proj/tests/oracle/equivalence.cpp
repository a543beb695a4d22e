#include "equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "dtswarm/assignment.hpp"
#include "dtswarm/control.hpp"
#include "dtswarm/cvt.hpp"
#include "dtswarm/snn.hpp"
#include "dtswarm/swarm.hpp"
#include "oracle.hpp"

namespace oracle {

namespace {

using Gen = std::mt19937_64;

double uni(Gen& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }
int pick(Gen& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

void track(OpResult& res, double a, double b) {
  res.max_abs_error = std::max(res.max_abs_error, std::abs(a - b));
}

P3 to_p3(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

Eigen::Vector3d random_vec(Gen& g, double lo, double hi) {
  return {uni(g, lo, hi), uni(g, lo, hi), uni(g, lo, hi)};
}

struct NetPair {
  dtswarm::snn::SpikeNetParams params;
  dtswarm::snn::SpikeNetState lib;
  NetParams ref_params;
  Net ref;
};

NetPair random_net(Gen& g) {
  NetPair np;
  auto& p = np.params;
  p.n_neurons = pick(g, 1, 5);
  p.signal_dim = pick(g, 1, 3);
  p.leak = uni(g, 0.0, 0.5);
  p.sparsity = uni(g, 0.0, 0.01);
  p.quad_cost = uni(g, 0.0, 0.01);
  p.error_gain = uni(g, 1.0, 500.0);
  p.learn_rate = uni(g, 0.0, 0.1);
  p.dt = 0.01;
  p.trace_increment = pick(g, 0, 1) ? 1.0 : 0.01;
  p.fast_recurrence = pick(g, 0, 1) ? dtswarm::snn::FastRecurrence::kMatched : dtswarm::snn::FastRecurrence::kUnit;
  p.firing = pick(g, 0, 1) ? dtswarm::snn::FiringMode::kSequential : dtswarm::snn::FiringMode::kSimultaneous;
  p.membrane_bound = pick(g, 0, 1) ? 1.0 : 0.0;

  const int n = p.n_neurons;
  const int d = p.signal_dim;
  Eigen::MatrixXd D(d, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < n; ++j) D(i, j) = uni(g, -1.5, 1.5);
  np.lib = dtswarm::snn::init_network_with_decoder(p, D, g());
  for (int i = 0; i < n; ++i) {
    np.lib.theta(i) = uni(g, -1.0, 1.0);
    np.lib.r(i) = uni(g, 0.0, 1.0);
    for (int j = 0; j < n; ++j) {
      np.lib.M(i, j) = uni(g, -1.0, 1.0);
      np.lib.omega_s(i, j) = uni(g, -1.0, 1.0);
    }
  }
  for (int i = 0; i < n; ++i) np.lib.sigma(i) = uni(g, -0.5, 2.0) * np.lib.T(i);

  auto& rp = np.ref_params;
  rp.leak = p.leak;
  rp.nu = p.sparsity;
  rp.mu = p.quad_cost;
  rp.k = p.error_gain;
  rp.eta = p.learn_rate;
  rp.dt = p.dt;
  rp.trace_increment = p.trace_increment;
  rp.fast_gain = p.fast_recurrence == dtswarm::snn::FastRecurrence::kMatched
                     ? p.error_gain * p.dt * p.trace_increment
                     : 1.0;
  rp.sequential = p.firing == dtswarm::snn::FiringMode::kSequential;
  rp.membrane_bound = p.membrane_bound;

  auto& r = np.ref;
  r.D = Mat(d, n);
  r.M = Mat(n, n);
  r.omega_s = Mat(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < n; ++j) r.D(i, j) = D(i, j);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      r.M(i, j) = np.lib.M(i, j);
      r.omega_s(i, j) = np.lib.omega_s(i, j);
    }
    r.theta.push_back(np.lib.theta(i));
    r.r.push_back(np.lib.r(i));
    r.sigma.push_back(np.lib.sigma(i));
  }
  r.T = thresholds(r.D, rp.nu, rp.mu);
  r.omega_f = fast_weights(r.D, rp.fast_gain, rp.mu);
  return np;
}

void compare_nets(OpResult& res, const NetPair& np) {
  const int n = np.params.n_neurons;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    track(res, np.lib.sigma(i), np.ref.sigma[ui]);
    track(res, np.lib.r(i), np.ref.r[ui]);
    track(res, np.lib.T(i), np.ref.T[ui]);
    for (int j = 0; j < n; ++j) {
      track(res, np.lib.omega_s(i, j), np.ref.omega_s(i, j));
      track(res, np.lib.omega_f(i, j), np.ref.omega_f(i, j));
    }
  }
}

}  // namespace

OpResult check_step_network(std::uint64_t seed, int instances, int steps_per_instance) {
  Gen g(seed);
  OpResult res{"step_network"};
  for (int k = 0; k < instances; ++k) {
    NetPair np = random_net(g);
    compare_nets(res, np);
    for (int s = 0; s < steps_per_instance; ++s) {
      Eigen::VectorXd e(np.params.signal_dim);
      Vec e_ref;
      for (int c = 0; c < e.size(); ++c) {
        e(c) = uni(g, -2.0, 2.0);
        e_ref.push_back(e(c));
      }
      const Eigen::VectorXd spikes = dtswarm::snn::step_network(np.lib, np.params, e);
      const Vec spikes_ref = step(np.ref, np.ref_params, e_ref);
      for (int i = 0; i < spikes.size(); ++i) {
        if (spikes(i) != spikes_ref[static_cast<std::size_t>(i)]) ++res.discrete_mismatches;
      }
      compare_nets(res, np);
    }
    ++res.instances;
  }
  return res;
}

OpResult check_update_slow_weights(std::uint64_t seed, int instances) {
  Gen g(seed);
  OpResult res{"update_slow_weights"};
  for (int k = 0; k < instances; ++k) {
    NetPair np = random_net(g);
    Eigen::VectorXd e(np.params.signal_dim);
    Vec e_ref;
    for (int c = 0; c < e.size(); ++c) {
      e(c) = uni(g, -3.0, 3.0);
      e_ref.push_back(e(c));
    }
    dtswarm::snn::update_slow_weights(np.lib, np.params, e);
    learn(np.ref, np.ref_params, e_ref);
    compare_nets(res, np);
    ++res.instances;
  }
  return res;
}

OpResult check_lloyd_update(std::uint64_t seed, int instances) {
  Gen g(seed);
  OpResult res{"lloyd_update"};
  for (int k = 0; k < instances; ++k) {
    dtswarm::cvt::LloydParams lp;
    lp.alpha2 = uni(g, 0.05, 1.0);
    lp.alpha1 = 1.0 - lp.alpha2;
    lp.beta2 = uni(g, 0.05, 1.0);
    lp.beta1 = 1.0 - lp.beta2;
    const Eigen::Vector3d x = random_vec(g, -5.0, 5.0);
    const Eigen::Vector3d w = random_vec(g, -5.0, 5.0);
    const int j = pick(g, 0, 200);
    const auto lib = dtswarm::cvt::lloyd_update(x, w, j, lp);
    const P3 ref = lloyd(to_p3(x), to_p3(w), j, lp.alpha1, lp.alpha2, lp.beta1, lp.beta2);
    for (int c = 0; c < 3; ++c) track(res, lib.x(c), ref[static_cast<std::size_t>(c)]);
    if (lib.j != j + 1) ++res.discrete_mismatches;
    ++res.instances;
  }
  return res;
}

OpResult check_collision_avoidance(std::uint64_t seed, int instances) {
  Gen g(seed);
  OpResult res{"collision_avoidance"};
  for (int k = 0; k < instances; ++k) {
    const int n = pick(g, 2, 5);
    dtswarm::control::ControllerGains gains;
    gains.kc1 = uni(g, 0.1, 10.0);
    gains.kc2 = uni(g, 0.0, 2.0);
    gains.u_max = uni(g, 1.0, 30.0);
    const double r_s = uni(g, 0.2, 1.0);
    const double r_d = r_s + uni(g, 0.5, 2.5);

    std::vector<dtswarm::swarm::AgentState> agents(static_cast<std::size_t>(n));
    std::vector<P3> pos, vel;
    for (int i = 0; i < n; ++i) {
      auto& a = agents[static_cast<std::size_t>(i)];
      a.id = i;
      a.p = random_vec(g, 0.0, 2.5);
      a.v = random_vec(g, -1.0, 1.0);
    }
    // Occasionally place a pair at or just outside the safety range, or on
    // top of each other, to reach the saturated branches.
    const int mode = pick(g, 0, 3);
    if (mode == 1) agents[1].p = agents[0].p + Eigen::Vector3d(r_s, 0.0, 0.0);
    if (mode == 2) agents[1].p = agents[0].p + Eigen::Vector3d(0.0, r_s + 1e-9, 0.0);
    if (mode == 3) agents[1].p = agents[0].p;
    for (const auto& a : agents) {
      pos.push_back(to_p3(a.p));
      vel.push_back(to_p3(a.v));
    }

    for (int i = 0; i < n; ++i) {
      std::vector<int> nbrs_ref;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dx = pos[static_cast<std::size_t>(j)][0] - pos[static_cast<std::size_t>(i)][0];
        const double dy = pos[static_cast<std::size_t>(j)][1] - pos[static_cast<std::size_t>(i)][1];
        const double dz = pos[static_cast<std::size_t>(j)][2] - pos[static_cast<std::size_t>(i)][2];
        if (std::sqrt(dx * dx + dy * dy + dz * dz) < r_d) nbrs_ref.push_back(j);
      }
      const std::vector<int> nbrs = dtswarm::swarm::neighborhood(i, agents, r_d);
      if (nbrs != nbrs_ref) ++res.discrete_mismatches;

      const auto lib = dtswarm::control::collision_avoidance(i, agents, nbrs_ref, r_s, gains);
      const Collision ref = collision(i, pos, vel, nbrs_ref, r_s, gains.kc1, gains.kc2, gains.u_max,
                                      gains.eps_sing);
      for (int c = 0; c < 3; ++c) track(res, lib.u(c), ref.u[static_cast<std::size_t>(c)]);
      if (lib.violations != ref.violations) ++res.discrete_mismatches;
    }
    ++res.instances;
  }
  return res;
}

OpResult check_detect_obstacles(std::uint64_t seed, int instances) {
  Gen g(seed);
  OpResult res{"detect_obstacles"};
  for (int k = 0; k < instances; ++k) {
    const int m = pick(g, 1, 5);
    const double r_d = uni(g, 0.5, 3.0);
    const double fov = uni(g, 0.2, 3.1);
    const Eigen::Vector3d p = random_vec(g, -2.0, 2.0);
    Eigen::Vector3d v = random_vec(g, -1.0, 1.0);
    if (pick(g, 0, 5) == 0) v *= 1e-4;  // below eps_v: FOV test waived
    std::vector<dtswarm::control::Obstacle> obstacles;
    std::vector<P3> centers;
    Vec radii;
    for (int o = 0; o < m; ++o) {
      dtswarm::control::Obstacle ob;
      ob.center = random_vec(g, -4.0, 4.0);
      ob.radius = uni(g, 0.1, 1.0);
      obstacles.push_back(ob);
      centers.push_back(to_p3(ob.center));
      radii.push_back(ob.radius);
    }
    const auto lib = dtswarm::control::detect_obstacles(p, v, obstacles, r_d, fov, 1e-3);
    const Detection ref = detect(to_p3(p), to_p3(v), centers, radii, r_d, fov, 1e-3);
    for (std::size_t o = 0; o < obstacles.size(); ++o) {
      if (static_cast<int>(lib.flags[o]) != ref.flags[o]) ++res.discrete_mismatches;
      track(res, lib.range[o], ref.range[o]);
      track(res, lib.fov[o], ref.fov[o]);
    }
    ++res.instances;
  }
  return res;
}

OpResult check_assignment(std::uint64_t seed, int instances_per_size, int max_n) {
  Gen g(seed);
  OpResult res{"assignment"};
  for (int n = 1; n <= max_n; ++n) {
    for (int k = 0; k < instances_per_size; ++k) {
      std::vector<Eigen::Vector3d> gens, uavs;
      for (int i = 0; i < n; ++i) {
        gens.push_back(random_vec(g, 0.0, 10.0));
        uavs.push_back(random_vec(g, 0.0, 10.0));
      }
      std::vector<Vec> cost(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(n)));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              (uavs[static_cast<std::size_t>(i)] - gens[static_cast<std::size_t>(j)]).norm();
      const double best = brute_force_assignment(cost);

      const std::vector<int> perm = dtswarm::assignment::assign_generators_to_uavs(gens, uavs);
      std::vector<int> seen(static_cast<std::size_t>(n), 0);
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        const int j = perm[static_cast<std::size_t>(i)];
        if (j < 0 || j >= n || seen[static_cast<std::size_t>(j)]++) {
          ++res.discrete_mismatches;
          continue;
        }
        total += cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
      track(res, total, best);
      ++res.instances;
    }
  }
  return res;
}

std::vector<OpResult> run_all(std::uint64_t seed) {
  return {
      check_step_network(seed + 1, 400, 10),
      check_update_slow_weights(seed + 2, 400),
      check_lloyd_update(seed + 3, 1000),
      check_collision_avoidance(seed + 4, 1000),
      check_detect_obstacles(seed + 5, 1000),
      check_assignment(seed + 6, 30, 7),
  };
}

}  // namespace oracle
