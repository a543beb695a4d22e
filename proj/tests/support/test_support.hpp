#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "dtswarm/scenario.hpp"

namespace dtswarm::testing {

inline std::filesystem::path preset_path(const std::string& name) {
  return std::filesystem::path(DTSWARM_TEST_PRESET_DIR) / (name + ".yaml");
}

inline Scenario load_preset(const std::string& name) { return load_scenario(preset_path(name)); }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("dtswarm_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Small, fast scenario: a few UAVs with the preset network discretisation.
inline Scenario small_scenario(int n_uavs = 3, double duration = 1.0) {
  Scenario s = load_preset("case1");
  s.name = "small";
  s.swarm.n_uavs = n_uavs;
  s.region = cvt::Region::fixed_z(0.0, 10.0, 0.0, 10.0, 3.0);
  s.snn.n_neurons = 30;
  s.duration = duration;
  s.sync_derived();
  s.validate();
  return s;
}

}  // namespace dtswarm::testing
