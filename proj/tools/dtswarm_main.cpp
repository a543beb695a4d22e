// dtswarm command line front end: run an episode, export CVT generators, or
// compare the edge fleet against the virtual twins of a finished run.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dtswarm/artifacts.hpp"
#include "dtswarm/compare.hpp"
#include "dtswarm/cvt.hpp"
#include "dtswarm/errors.hpp"
#include "dtswarm/rng.hpp"
#include "dtswarm/runtime.hpp"
#include "dtswarm/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

constexpr const char* kOutDirEnv = "DTSWARM_OUT_DIR";

int cmd_run(const std::string& scenario_path, std::string out_dir, std::optional<std::uint64_t> seed) {
  if (const char* env = std::getenv(kOutDirEnv); env && *env) out_dir = env;
  if (out_dir.empty()) throw dtswarm::ConfigError("run: --out is required (or set DTSWARM_OUT_DIR)");

  dtswarm::Scenario scenario = dtswarm::load_scenario(scenario_path);
  if (seed) scenario.master_seed = *seed;

  const auto t0 = std::chrono::steady_clock::now();
  const auto art = dtswarm::runtime::run_episode(scenario);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  dtswarm::artifacts::write_run(art, scenario.swarm.r_s, out_dir);

  std::cout << fmt::format("{}: {} UAVs, {} steps in {:.2f} s -> {}\n", scenario.name, art.n_uavs,
                           art.steps, elapsed, out_dir);
  for (int i = 0; i < art.n_uavs; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    std::cout << fmt::format("  uav {:>2}: {:>6} spikes  {:6.2f}%  rms divergence {:.4f} m\n", i,
                             art.spike_totals[ui], 100.0 * art.utilization[ui], art.rms_divergence[ui]);
  }
  std::cout << fmt::format("  fleet mean utilization {:.2f}%, min pairwise distance {:.3f} m, "
                           "safety violation steps {}\n",
                           100.0 * art.fleet_mean_utilization(), art.overall_min_pairwise(),
                           art.safety_violation_steps);
  return kExitOk;
}

int cmd_cvt(const std::string& scenario_path, const std::string& out_path) {
  const dtswarm::Scenario scenario = dtswarm::load_scenario(scenario_path);
  dtswarm::Rng rng(dtswarm::derive_seed(scenario.master_seed, dtswarm::stream::kCvt));
  const auto res = dtswarm::cvt::run_cvt(scenario.region, scenario.lloyd, rng);
  if (const auto parent = fs::path(out_path).parent_path(); !parent.empty()) fs::create_directories(parent);
  dtswarm::artifacts::write_generators(res.generators, out_path);
  std::cout << fmt::format("{} generators after {} iterations{} -> {}\n", res.generators.size(),
                           res.iterations, res.converged ? "" : " (move tolerance not reached)", out_path);
  return kExitOk;
}

int cmd_compare(const std::string& run_dir, double threshold) {
  const auto rep = dtswarm::compare::compare_run(run_dir, threshold);
  std::cout << rep.to_text();
  const fs::path json_path = fs::path(run_dir) / "compare.json";
  std::ofstream out(json_path, std::ios::binary | std::ios::trunc);
  if (!out) throw dtswarm::Error(fmt::format("cannot write {}", json_path.string()));
  out << rep.to_json();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neuromorphic digital-twin UAV swarm simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run an episode and write csv/json artifacts");
  run->add_option("--scenario", scenario_path, "Scenario YAML file")->required();
  run->add_option("--out", out_dir, "Output directory (DTSWARM_OUT_DIR overrides)");
  run->add_option("--seed", seed, "Override the scenario master seed");

  std::string cvt_scenario;
  std::string cvt_out;
  auto* cvt = app.add_subcommand("cvt", "Compute CVT generators and write index,x,y,z rows");
  cvt->add_option("--scenario", cvt_scenario, "Scenario YAML file")->required();
  cvt->add_option("--out", cvt_out, "Output csv path")->required();

  std::string run_dir;
  double threshold = 0.05;
  auto* compare = app.add_subcommand("compare", "Compare edge and twin trajectories of a run");
  compare->add_option("dir", run_dir, "Run directory")->required();
  compare->add_option("--threshold", threshold, "Convergence limit as a fraction of cloud-signal RMS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*run) return cmd_run(scenario_path, out_dir, seed);
    if (*cvt) return cmd_cvt(cvt_scenario, cvt_out);
    if (*compare) return cmd_compare(run_dir, threshold);
  } catch (const dtswarm::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
