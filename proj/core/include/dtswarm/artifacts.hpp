#pragma once

#include <filesystem>
#include <string>

#include "dtswarm/runtime.hpp"

namespace dtswarm::artifacts {

inline constexpr const char* kTrajectoriesCsv = "trajectories.csv";
inline constexpr const char* kSpikesCsv = "spikes.csv";
inline constexpr const char* kControlCsv = "control.csv";
inline constexpr const char* kDetectionsCsv = "detections.csv";
inline constexpr const char* kMetricsJson = "metrics.json";
inline constexpr const char* kGeneratorsCsv = "generators.csv";

inline constexpr const char* kTrajectoriesHeader = "step,time,uav,source,x,y,z,vx,vy,vz";
inline constexpr const char* kSpikesHeader = "step,uav,neuron";
inline constexpr const char* kControlHeader = "step,uav,ux,uy,uz,uhx,uhy,uhz,err_norm,gated";
inline constexpr const char* kDetectionsHeader = "step,uav,obstacle";
inline constexpr const char* kGeneratorsHeader = "index,x,y,z";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// metrics.json text (pretty printed, stable key order).
std::string metrics_json(const runtime::RunArtifacts& art, double r_s);

/// Writes trajectories.csv, spikes.csv, control.csv, detections.csv,
/// generators.csv and metrics.json into out_dir (created if missing).
void write_run(const runtime::RunArtifacts& art, double r_s, const std::filesystem::path& out_dir);

/// Writes "index,x,y,z" rows.
void write_generators(const std::vector<Eigen::Vector3d>& generators, const std::filesystem::path& path);

}  // namespace dtswarm::artifacts
