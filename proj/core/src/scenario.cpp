#include "dtswarm/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "dtswarm/errors.hpp"
#include "dtswarm/rng.hpp"

namespace dtswarm {

// ---------------------------------------------------------------- scenario

int Scenario::steps() const { return static_cast<int>(std::llround(duration / dt)); }

void Scenario::sync_derived() {
  snn.dt = dt;
  lloyd.n_generators = swarm.n_uavs;
}

std::uint64_t Scenario::snn_seed(int uav) const {
  if (auto it = snn_seed_overrides.find(uav); it != snn_seed_overrides.end()) return it->second;
  return derive_seed(master_seed, stream::kSnnBase + static_cast<std::uint64_t>(uav));
}

void Scenario::validate() const {
  if (!(std::isfinite(dt) && dt > 0.0)) throw ConfigError("dt: must be > 0");
  if (!(std::isfinite(duration) && duration >= 0.0)) throw ConfigError("duration: must be >= 0");
  region.validate();
  swarm.validate();
  gains.validate();
  if (!(avoidance.scaler > 1.0)) throw ConfigError("avoidance.scaler: must be > 1");
  if (avoidance.max_iters < 1) throw ConfigError("avoidance.max_iters: must be >= 1");
  if (!(avoidance.eps_v >= 0.0)) throw ConfigError("avoidance.eps_v: must be >= 0");
  snn.validate();
  lloyd.validate();
  schedule.validate();
  if (snn.dt != dt) throw ConfigError("snn.dt must equal dt");
  if (lloyd.n_generators != swarm.n_uavs) throw ConfigError("lloyd.n_generators must equal n_uavs");
  if (!flock_velocity.allFinite()) throw ConfigError("phase.flock_velocity: must be finite");
  for (std::size_t k = 0; k < obstacles.size(); ++k) {
    const auto& o = obstacles[k];
    if (!(o.radius > 0.0)) throw ConfigError(fmt::format("obstacles[{}].radius: must be > 0", k));
    if (!o.center.allFinite() || !o.velocity.allFinite()) {
      throw ConfigError(fmt::format("obstacles[{}]: center and velocity must be finite", k));
    }
  }
  if (!initial_positions.empty()) {
    if (static_cast<int>(initial_positions.size()) != swarm.n_uavs) {
      throw ConfigError(fmt::format("initial_positions: {} entries for n_uavs = {}",
                                    initial_positions.size(), swarm.n_uavs));
    }
    for (std::size_t i = 0; i < initial_positions.size(); ++i) {
      if (!region.contains(initial_positions[i])) {
        throw ConfigError(fmt::format("initial_positions[{}]: outside region", i));
      }
      for (std::size_t j = i + 1; j < initial_positions.size(); ++j) {
        if (!((initial_positions[i] - initial_positions[j]).norm() > swarm.r_s)) {
          throw ConfigError(fmt::format(
              "initial_positions[{}] and [{}]: closer than swarm.r_s", i, j));
        }
      }
    }
  }
  for (const auto& entry : snn_seed_overrides) {
    const int uav = entry.first;
    if (uav < 0 || uav >= swarm.n_uavs) {
      throw ConfigError(fmt::format("snn_seed_overrides: UAV index {} out of range", uav));
    }
  }
}

// ----------------------------------------------------------------- parsing

namespace {

class Reader {
 public:
  Reader(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsMap()) throw ConfigError(fmt::format("{}: expected a mapping", label()));
  }

  YAML::Node take(const std::string& key) {
    seen_.insert(key);
    return node_ ? node_[key] : YAML::Node();
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  template <typename T>
  void scalar(const std::string& k, T& out) {
    const YAML::Node n = take(k);
    if (!n) return;
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(fmt::format("{}: cannot parse value '{}'", key(k), n.Scalar()));
    }
  }

  void vec3(const std::string& k, Vec3& out) {
    const YAML::Node n = take(k);
    if (!n) return;
    out = parse_vec3(n, key(k));
  }

  void finish() const {
    if (!node_) return;
    for (const auto& kv : node_) {
      const auto name = kv.first.as<std::string>();
      if (!seen_.count(name)) throw ConfigError(fmt::format("{}: unknown key", key(name)));
    }
  }

  static Vec3 parse_vec3(const YAML::Node& n, const std::string& where) {
    if (!n.IsSequence() || n.size() != 3) {
      throw ConfigError(fmt::format("{}: expected a list of 3 numbers", where));
    }
    Vec3 v;
    for (std::size_t a = 0; a < 3; ++a) {
      try {
        v(static_cast<Eigen::Index>(a)) = n[a].as<double>();
      } catch (const YAML::Exception&) {
        throw ConfigError(fmt::format("{}[{}]: not a number", where, a));
      }
    }
    return v;
  }

 private:
  std::string label() const { return path_.empty() ? "scenario" : path_; }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

control::Mat3 parse_gain_matrix(const YAML::Node& n, const std::string& where) {
  if (n.IsSequence() && n.size() == 3 && n[0].IsScalar()) {
    return Reader::parse_vec3(n, where).asDiagonal();
  }
  if (n.IsSequence() && n.size() == 3) {
    control::Mat3 m;
    for (std::size_t r = 0; r < 3; ++r) {
      m.row(static_cast<Eigen::Index>(r)) =
          Reader::parse_vec3(n[r], fmt::format("{}[{}]", where, r)).transpose();
    }
    return m;
  }
  throw ConfigError(fmt::format("{}: expected 3 diagonal entries or a 3x3 nested list", where));
}

void parse_axis(const YAML::Node& n, const std::string& where, double& lo, double& hi) {
  try {
    if (n.IsScalar()) {
      lo = hi = n.as<double>();
      return;
    }
    if (n.IsSequence() && n.size() == 2) {
      lo = n[0].as<double>();
      hi = n[1].as<double>();
      return;
    }
  } catch (const YAML::Exception&) {
  }
  throw ConfigError(fmt::format("{}: expected [min, max] or a single fixed value", where));
}

snn::FastRecurrence parse_fast(const std::string& s, const std::string& where) {
  if (s == "unit") return snn::FastRecurrence::kUnit;
  if (s == "matched") return snn::FastRecurrence::kMatched;
  throw ConfigError(fmt::format("{}: expected 'unit' or 'matched', got '{}'", where, s));
}

snn::FiringMode parse_firing(const std::string& s, const std::string& where) {
  if (s == "simultaneous") return snn::FiringMode::kSimultaneous;
  if (s == "sequential") return snn::FiringMode::kSequential;
  throw ConfigError(fmt::format("{}: expected 'simultaneous' or 'sequential', got '{}'", where, s));
}

WaypointMode parse_waypoint(const std::string& s, const std::string& where) {
  if (s == "persistent") return WaypointMode::kPersistent;
  if (s == "per_step") return WaypointMode::kPerStep;
  throw ConfigError(fmt::format("{}: expected 'persistent' or 'per_step', got '{}'", where, s));
}

constexpr const char* kRandomPlacement = "random-min-separation";

}  // namespace

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("scenario parse error: {}", e.what()));
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);

  Scenario s;
  Reader top(root, "");
  top.scalar("name", s.name);
  top.scalar("dt", s.dt);
  top.scalar("duration", s.duration);
  top.scalar("master_seed", s.master_seed);
  top.scalar("n_uavs", s.swarm.n_uavs);

  if (auto n = top.take("region")) {
    Reader r(n, "region");
    for (int a = 0; a < 3; ++a) {
      static constexpr const char* kAxis[] = {"x", "y", "z"};
      if (auto axis = r.take(kAxis[a])) parse_axis(axis, r.key(kAxis[a]), s.region.lo(a), s.region.hi(a));
    }
    r.finish();
  }
  if (auto n = top.take("swarm")) {
    Reader r(n, "swarm");
    r.scalar("r_d", s.swarm.r_d);
    r.scalar("r_s", s.swarm.r_s);
    r.scalar("fov_deg", s.swarm.fov_deg);
    r.finish();
  }
  if (auto n = top.take("gains")) {
    Reader r(n, "gains");
    if (auto kp = r.take("kp")) s.gains.Kp = parse_gain_matrix(kp, "gains.kp");
    if (auto kv = r.take("kv")) s.gains.Kv = parse_gain_matrix(kv, "gains.kv");
    r.scalar("kc1", s.gains.kc1);
    r.scalar("kc2", s.gains.kc2);
    r.scalar("u_max", s.gains.u_max);
    r.scalar("eps_sing", s.gains.eps_sing);
    r.finish();
  }
  if (auto n = top.take("avoidance")) {
    Reader r(n, "avoidance");
    r.scalar("scaler", s.avoidance.scaler);
    r.scalar("max_iters", s.avoidance.max_iters);
    r.scalar("eps_v", s.avoidance.eps_v);
    std::string mode;
    r.scalar("waypoint", mode);
    if (!mode.empty()) s.waypoint_mode = parse_waypoint(mode, "avoidance.waypoint");
    r.finish();
  }
  if (auto n = top.take("snn")) {
    Reader r(n, "snn");
    r.scalar("n_neurons", s.snn.n_neurons);
    r.scalar("leak", s.snn.leak);
    r.scalar("sparsity", s.snn.sparsity);
    r.scalar("quad_cost", s.snn.quad_cost);
    r.scalar("error_gain", s.snn.error_gain);
    r.scalar("learn_rate", s.snn.learn_rate);
    r.scalar("trace_increment", s.snn.trace_increment);
    r.scalar("membrane_bound", s.snn.membrane_bound);
    r.scalar("sigma_limit", s.snn.sigma_limit);
    std::string fast, firing;
    r.scalar("fast_recurrence", fast);
    r.scalar("firing", firing);
    if (!fast.empty()) s.snn.fast_recurrence = parse_fast(fast, "snn.fast_recurrence");
    if (!firing.empty()) s.snn.firing = parse_firing(firing, "snn.firing");
    r.finish();
  }
  if (auto n = top.take("lloyd")) {
    Reader r(n, "lloyd");
    r.scalar("samples_per_iter", s.lloyd.samples_per_iter);
    r.scalar("alpha1", s.lloyd.alpha1);
    r.scalar("alpha2", s.lloyd.alpha2);
    r.scalar("beta1", s.lloyd.beta1);
    r.scalar("beta2", s.lloyd.beta2);
    r.scalar("max_iters", s.lloyd.max_iters);
    r.scalar("move_tol", s.lloyd.move_tol);
    r.finish();
  }
  if (auto n = top.take("schedule")) {
    Reader r(n, "schedule");
    r.scalar("learning_steps", s.schedule.learning_steps);
    r.scalar("update_period", s.schedule.update_period);
    r.scalar("err_update_threshold", s.schedule.err_update_threshold);
    r.finish();
  }
  if (auto n = top.take("phase")) {
    Reader r(n, "phase");
    r.vec3("flock_velocity", s.flock_velocity);
    r.finish();
  }
  if (auto n = top.take("obstacles")) {
    if (!n.IsSequence()) throw ConfigError("obstacles: expected a list");
    for (std::size_t k = 0; k < n.size(); ++k) {
      Reader r(n[k], fmt::format("obstacles[{}]", k));
      control::Obstacle o;
      r.vec3("center", o.center);
      r.scalar("radius", o.radius);
      r.vec3("velocity", o.velocity);
      r.finish();
      s.obstacles.push_back(o);
    }
  }
  if (auto n = top.take("initial_positions")) {
    if (n.IsScalar()) {
      if (n.Scalar() != kRandomPlacement) {
        throw ConfigError(fmt::format("initial_positions: expected '{}' or a list of points",
                                      kRandomPlacement));
      }
    } else if (n.IsSequence()) {
      for (std::size_t k = 0; k < n.size(); ++k) {
        s.initial_positions.push_back(
            Reader::parse_vec3(n[k], fmt::format("initial_positions[{}]", k)));
      }
    } else {
      throw ConfigError("initial_positions: expected a string or a list of points");
    }
  }
  if (auto n = top.take("snn_seed_overrides")) {
    if (!n.IsMap()) throw ConfigError("snn_seed_overrides: expected a mapping uav -> seed");
    for (const auto& kv : n) {
      try {
        s.snn_seed_overrides[kv.first.as<int>()] = kv.second.as<std::uint64_t>();
      } catch (const YAML::Exception&) {
        throw ConfigError("snn_seed_overrides: entries must be integer uav: integer seed");
      }
    }
  }
  top.finish();

  s.sync_derived();
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open scenario file {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ------------------------------------------------------------- serializing

namespace {

// Shortest representation that reads back to the same double.
std::string num(double x) { return fmt::format("{}", x); }

std::string list3(const Vec3& v) { return fmt::format("[{}, {}, {}]", num(v.x()), num(v.y()), num(v.z())); }

std::string axis(double lo, double hi) {
  return lo == hi ? num(lo) : fmt::format("[{}, {}]", num(lo), num(hi));
}

std::string gain(const control::Mat3& m) {
  const bool diagonal = (m - control::Mat3(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  if (diagonal) return list3(m.diagonal());
  return fmt::format("[{}, {}, {}]", list3(m.row(0).transpose()), list3(m.row(1).transpose()),
                     list3(m.row(2).transpose()));
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  std::string out;
  auto line = [&out](const std::string& l) {
    out += l;
    out += '\n';
  };
  // Names are quoted so that numeric-looking names survive the round trip.
  YAML::Emitter name_emitter;
  name_emitter << YAML::DoubleQuoted << s.name;

  line(fmt::format("name: {}", name_emitter.c_str()));
  line(fmt::format("dt: {}", num(s.dt)));
  line(fmt::format("duration: {}", num(s.duration)));
  line(fmt::format("master_seed: {}", s.master_seed));
  line(fmt::format("n_uavs: {}", s.swarm.n_uavs));
  line("region:");
  line(fmt::format("  x: {}", axis(s.region.lo.x(), s.region.hi.x())));
  line(fmt::format("  y: {}", axis(s.region.lo.y(), s.region.hi.y())));
  line(fmt::format("  z: {}", axis(s.region.lo.z(), s.region.hi.z())));
  line("swarm:");
  line(fmt::format("  r_d: {}", num(s.swarm.r_d)));
  line(fmt::format("  r_s: {}", num(s.swarm.r_s)));
  line(fmt::format("  fov_deg: {}", num(s.swarm.fov_deg)));
  line("gains:");
  line(fmt::format("  kp: {}", gain(s.gains.Kp)));
  line(fmt::format("  kv: {}", gain(s.gains.Kv)));
  line(fmt::format("  kc1: {}", num(s.gains.kc1)));
  line(fmt::format("  kc2: {}", num(s.gains.kc2)));
  line(fmt::format("  u_max: {}", num(s.gains.u_max)));
  line(fmt::format("  eps_sing: {}", num(s.gains.eps_sing)));
  line("avoidance:");
  line(fmt::format("  scaler: {}", num(s.avoidance.scaler)));
  line(fmt::format("  max_iters: {}", s.avoidance.max_iters));
  line(fmt::format("  eps_v: {}", num(s.avoidance.eps_v)));
  line(fmt::format("  waypoint: {}",
                   s.waypoint_mode == WaypointMode::kPersistent ? "persistent" : "per_step"));
  line("snn:");
  line(fmt::format("  n_neurons: {}", s.snn.n_neurons));
  line(fmt::format("  leak: {}", num(s.snn.leak)));
  line(fmt::format("  sparsity: {}", num(s.snn.sparsity)));
  line(fmt::format("  quad_cost: {}", num(s.snn.quad_cost)));
  line(fmt::format("  error_gain: {}", num(s.snn.error_gain)));
  line(fmt::format("  learn_rate: {}", num(s.snn.learn_rate)));
  line(fmt::format("  trace_increment: {}", num(s.snn.trace_increment)));
  line(fmt::format("  fast_recurrence: {}",
                   s.snn.fast_recurrence == snn::FastRecurrence::kMatched ? "matched" : "unit"));
  line(fmt::format("  firing: {}",
                   s.snn.firing == snn::FiringMode::kSequential ? "sequential" : "simultaneous"));
  line(fmt::format("  membrane_bound: {}", num(s.snn.membrane_bound)));
  line(fmt::format("  sigma_limit: {}", num(s.snn.sigma_limit)));
  line("lloyd:");
  line(fmt::format("  samples_per_iter: {}", s.lloyd.samples_per_iter));
  line(fmt::format("  alpha1: {}", num(s.lloyd.alpha1)));
  line(fmt::format("  alpha2: {}", num(s.lloyd.alpha2)));
  line(fmt::format("  beta1: {}", num(s.lloyd.beta1)));
  line(fmt::format("  beta2: {}", num(s.lloyd.beta2)));
  line(fmt::format("  max_iters: {}", s.lloyd.max_iters));
  line(fmt::format("  move_tol: {}", num(s.lloyd.move_tol)));
  line("schedule:");
  line(fmt::format("  learning_steps: {}", s.schedule.learning_steps));
  line(fmt::format("  update_period: {}", s.schedule.update_period));
  line(fmt::format("  err_update_threshold: {}", num(s.schedule.err_update_threshold)));
  line("phase:");
  line(fmt::format("  flock_velocity: {}", list3(s.flock_velocity)));
  if (s.obstacles.empty()) {
    line("obstacles: []");
  } else {
    line("obstacles:");
    for (const auto& o : s.obstacles) {
      line(fmt::format("  - center: {}", list3(o.center)));
      line(fmt::format("    radius: {}", num(o.radius)));
      line(fmt::format("    velocity: {}", list3(o.velocity)));
    }
  }
  if (s.initial_positions.empty()) {
    line(fmt::format("initial_positions: {}", kRandomPlacement));
  } else {
    line("initial_positions:");
    for (const auto& p : s.initial_positions) line(fmt::format("  - {}", list3(p)));
  }
  if (!s.snn_seed_overrides.empty()) {
    line("snn_seed_overrides:");
    for (const auto& [uav, seed] : s.snn_seed_overrides) line(fmt::format("  {}: {}", uav, seed));
  }
  return out;
}

}  // namespace dtswarm
