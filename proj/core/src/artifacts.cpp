#include "dtswarm/artifacts.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dtswarm/errors.hpp"

namespace dtswarm::artifacts {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_double(double x) { return fmt::format("{}", x); }

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  return out;
}

ordered_json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

std::string metrics_json(const runtime::RunArtifacts& art, double r_s) {
  ordered_json j;
  j["scenario"] = art.scenario_name;
  j["master_seed"] = art.master_seed;
  j["n_uavs"] = art.n_uavs;
  j["n_neurons"] = art.n_neurons;
  j["steps"] = art.steps;
  j["dt"] = art.dt;
  j["r_s"] = r_s;
  j["min_pairwise_distance"] = number_or_null(art.overall_min_pairwise());
  j["safety_violation_steps"] = art.safety_violation_steps;
  j["collision_violation_events"] = art.collision_violation_events;

  std::uint64_t total = 0;
  for (auto t : art.spike_totals) total += t;
  j["fleet"] = {
      {"spike_total", total},
      {"mean_utilization_percent", 100.0 * art.fleet_mean_utilization()},
  };

  ordered_json uavs = ordered_json::array();
  for (int i = 0; i < art.n_uavs; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    uavs.push_back({
        {"uav", i},
        {"spikes", art.spike_totals[ui]},
        {"utilization_percent", 100.0 * art.utilization[ui]},
        {"rms_divergence", art.rms_divergence[ui]},
        {"max_divergence", art.max_divergence[ui]},
        {"detection_steps", art.detection_steps[ui]},
    });
  }
  j["uavs"] = uavs;
  j["cvt"] = {
      {"iterations", art.cvt.iterations},
      {"converged", art.cvt.converged},
  };
  return j.dump(2) + "\n";
}

void write_generators(const std::vector<Eigen::Vector3d>& generators, const fs::path& path) {
  auto out = open_out(path);
  out << kGeneratorsHeader << '\n';
  for (std::size_t g = 0; g < generators.size(); ++g) {
    out << fmt::format("{},{},{},{}\n", g, format_double(generators[g].x()),
                       format_double(generators[g].y()), format_double(generators[g].z()));
  }
}

void write_run(const runtime::RunArtifacts& art, double r_s, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const auto un = static_cast<std::size_t>(art.n_uavs);

  {
    auto out = open_out(out_dir / kTrajectoriesCsv);
    out << kTrajectoriesHeader << '\n';
    std::string buf;
    for (int s = 0; s < art.steps; ++s) {
      const std::string time = format_double(s * art.dt);
      for (int source = 0; source < 2; ++source) {
        const auto& table = source == 0 ? art.twin : art.edge;
        const char* label = source == 0 ? "twin" : "edge";
        for (std::size_t i = 0; i < un; ++i) {
          const auto& a = table[static_cast<std::size_t>(s) * un + i];
          buf.clear();
          fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{},{},{},{}\n", s, time, i,
                         label, format_double(a.p.x()), format_double(a.p.y()),
                         format_double(a.p.z()), format_double(a.v.x()), format_double(a.v.y()),
                         format_double(a.v.z()));
          out << buf;
        }
      }
    }
  }
  {
    auto out = open_out(out_dir / kSpikesCsv);
    out << kSpikesHeader << '\n';
    for (const auto& ev : art.spikes) out << ev.step << ',' << ev.uav << ',' << ev.neuron << '\n';
  }
  {
    auto out = open_out(out_dir / kControlCsv);
    out << kControlHeader << '\n';
    std::string buf;
    for (const auto& c : art.control) {
      buf.clear();
      fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{},{},{},{}\n", c.step, c.uav,
                     format_double(c.u_cloud.x()), format_double(c.u_cloud.y()),
                     format_double(c.u_cloud.z()), format_double(c.u_hat.x()),
                     format_double(c.u_hat.y()), format_double(c.u_hat.z()),
                     c.err_norm ? format_double(*c.err_norm) : std::string(), c.gated ? 1 : 0);
      out << buf;
    }
  }
  {
    auto out = open_out(out_dir / kDetectionsCsv);
    out << kDetectionsHeader << '\n';
    for (const auto& d : art.detections) out << d.step << ',' << d.uav << ',' << d.obstacle << '\n';
  }
  write_generators(art.cvt.generators, out_dir / kGeneratorsCsv);
  {
    auto out = open_out(out_dir / kMetricsJson);
    out << metrics_json(art, r_s);
  }
}

}  // namespace dtswarm::artifacts
