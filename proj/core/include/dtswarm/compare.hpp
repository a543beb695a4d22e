#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dtswarm::compare {

/// First step after which every gated error stays below `limit`. `gated` holds
/// (step, err_norm) pairs in step order. Returns 0 when no sample reaches the
/// limit and nullopt when the final gated sample is still at or above it.
std::optional<int> convergence_step(const std::vector<std::pair<int, double>>& gated, double limit);

struct UavComparison {
  int uav = 0;
  double rms_divergence = 0.0;
  double max_divergence = 0.0;
  double cloud_rms = 0.0;  // RMS of |u_cloud| over the whole run
  double err_limit = 0.0;  // relative_threshold * cloud_rms
  std::optional<int> convergence_step;
};

struct CompareReport {
  int n_uavs = 0;
  int steps = 0;
  double relative_threshold = 0.05;
  std::vector<UavComparison> uavs;

  std::string to_text() const;
  std::string to_json() const;
};

/// Reads a run directory written by artifacts::write_run and compares edge
/// with twin. Throws IntegrityError naming the file when artifacts are
/// missing, malformed or inconsistent with metrics.json.
CompareReport compare_run(const std::filesystem::path& run_dir, double relative_threshold = 0.05);

}  // namespace dtswarm::compare
