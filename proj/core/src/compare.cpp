#include "dtswarm/compare.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dtswarm/artifacts.hpp"
#include "dtswarm/errors.hpp"

namespace dtswarm::compare {

namespace fs = std::filesystem;

std::optional<int> convergence_step(const std::vector<std::pair<int, double>>& gated, double limit) {
  int last_bad = -1;
  for (const auto& [step, err] : gated) {
    if (!(err < limit)) last_bad = step;
  }
  if (last_bad < 0) return 0;
  if (gated.empty() || gated.back().first == last_bad) return std::nullopt;
  return last_bad + 1;
}

namespace {

/// Reads a csv with a fixed header and a fixed field count. Fields are
/// returned as string views into `storage`.
class CsvTable {
 public:
  CsvTable(const fs::path& path, const std::string& header, std::size_t fields) : name_(path.filename().string()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IntegrityError(fmt::format("{}: missing", name_));
    std::stringstream buf;
    buf << in.rdbuf();
    text_ = buf.str();
    if (!text_.empty() && text_.back() != '\n') {
      throw IntegrityError(fmt::format("{}: truncated final row", name_));
    }
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text_.size()) {
      const std::size_t end = text_.find('\n', pos);
      std::string_view line(text_.data() + pos, end - pos);
      if (line_no == 0) {
        if (line != header) throw IntegrityError(fmt::format("{}: unexpected header", name_));
      } else {
        std::vector<std::string_view> row;
        std::size_t start = 0;
        for (;;) {
          const std::size_t comma = line.find(',', start);
          row.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
          if (comma == std::string_view::npos) break;
          start = comma + 1;
        }
        if (row.size() != fields) {
          throw IntegrityError(fmt::format("{}: row {} has {} fields, expected {}", name_, line_no,
                                           row.size(), fields));
        }
        rows_.push_back(std::move(row));
      }
      ++line_no;
      pos = end + 1;
    }
    if (line_no == 0) throw IntegrityError(fmt::format("{}: empty file", name_));
  }

  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string_view>& row(std::size_t r) const { return rows_[r]; }

  double real(std::size_t r, std::size_t c) const {
    const auto f = rows_[r][c];
    double v = 0.0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
      throw IntegrityError(fmt::format("{}: row {} column {} is not a number", name_, r + 1, c + 1));
    }
    return v;
  }

  long integer(std::size_t r, std::size_t c) const {
    const auto f = rows_[r][c];
    long v = 0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
      throw IntegrityError(fmt::format("{}: row {} column {} is not an integer", name_, r + 1, c + 1));
    }
    return v;
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::string text_;
  std::vector<std::vector<std::string_view>> rows_;
};

}  // namespace

CompareReport compare_run(const fs::path& run_dir, double relative_threshold) {
  const fs::path metrics_path = run_dir / artifacts::kMetricsJson;
  std::ifstream metrics_in(metrics_path);
  if (!metrics_in) throw IntegrityError(fmt::format("{}: missing", artifacts::kMetricsJson));
  nlohmann::json metrics;
  try {
    metrics_in >> metrics;
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(fmt::format("{}: {}", artifacts::kMetricsJson, e.what()));
  }

  CompareReport rep;
  rep.relative_threshold = relative_threshold;
  std::vector<std::uint64_t> expected_spikes;
  try {
    rep.n_uavs = metrics.at("n_uavs").get<int>();
    rep.steps = metrics.at("steps").get<int>();
    for (const auto& u : metrics.at("uavs")) expected_spikes.push_back(u.at("spikes").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(fmt::format("{}: {}", artifacts::kMetricsJson, e.what()));
  }
  const auto un = static_cast<std::size_t>(rep.n_uavs);
  const auto steps = static_cast<std::size_t>(rep.steps);
  if (expected_spikes.size() != un) {
    throw IntegrityError(fmt::format("{}: uav list does not match n_uavs", artifacts::kMetricsJson));
  }

  const CsvTable spikes(run_dir / artifacts::kSpikesCsv, artifacts::kSpikesHeader, 3);
  std::vector<std::uint64_t> spike_counts(un, 0);
  for (std::size_t r = 0; r < spikes.size(); ++r) {
    const long uav = spikes.integer(r, 1);
    if (uav < 0 || static_cast<std::size_t>(uav) >= un) {
      throw IntegrityError(fmt::format("{}: row {} names unknown UAV {}", spikes.name(), r + 1, uav));
    }
    ++spike_counts[static_cast<std::size_t>(uav)];
  }
  if (spike_counts != expected_spikes) {
    throw IntegrityError(fmt::format("{}: spike rows do not match the totals in {}", spikes.name(),
                                     artifacts::kMetricsJson));
  }

  const CsvTable traj(run_dir / artifacts::kTrajectoriesCsv, artifacts::kTrajectoriesHeader, 10);
  if (traj.size() != 2 * un * steps) {
    throw IntegrityError(fmt::format("{}: {} rows, expected {}", traj.name(), traj.size(), 2 * un * steps));
  }
  const CsvTable control(run_dir / artifacts::kControlCsv, artifacts::kControlHeader, 10);
  if (control.size() != un * steps) {
    throw IntegrityError(fmt::format("{}: {} rows, expected {}", control.name(), control.size(), un * steps));
  }

  rep.uavs.resize(un);
  std::vector<double> div_sq(un, 0.0);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t twin_base = s * 2 * un;
    const std::size_t edge_base = twin_base + un;
    for (std::size_t i = 0; i < un; ++i) {
      const std::size_t tr = twin_base + i;
      const std::size_t er = edge_base + i;
      if (traj.row(tr)[3] != "twin" || traj.row(er)[3] != "edge") {
        throw IntegrityError(fmt::format("{}: unexpected row order at step {}", traj.name(), s));
      }
      double d2 = 0.0;
      for (std::size_t c = 4; c < 7; ++c) {
        const double diff = traj.real(er, c) - traj.real(tr, c);
        d2 += diff * diff;
      }
      const double d = std::sqrt(d2);
      div_sq[i] += d * d;
      rep.uavs[i].max_divergence = std::max(rep.uavs[i].max_divergence, d);
    }
  }

  std::vector<double> u_sq(un, 0.0);
  std::vector<std::vector<std::pair<int, double>>> gated(un);
  for (std::size_t r = 0; r < control.size(); ++r) {
    const auto i = static_cast<std::size_t>(control.integer(r, 1));
    if (i >= un) throw IntegrityError(fmt::format("{}: row {} names unknown UAV", control.name(), r + 1));
    double n2 = 0.0;
    for (std::size_t c = 2; c < 5; ++c) n2 += control.real(r, c) * control.real(r, c);
    u_sq[i] += n2;
    if (control.integer(r, 9) == 1) {
      gated[i].emplace_back(static_cast<int>(control.integer(r, 0)), control.real(r, 8));
    }
  }

  for (std::size_t i = 0; i < un; ++i) {
    UavComparison& c = rep.uavs[i];
    c.uav = static_cast<int>(i);
    if (steps > 0) {
      c.rms_divergence = std::sqrt(div_sq[i] / static_cast<double>(steps));
      c.cloud_rms = std::sqrt(u_sq[i] / static_cast<double>(steps));
    }
    c.err_limit = relative_threshold * c.cloud_rms;
    c.convergence_step = convergence_step(gated[i], c.err_limit);
  }
  return rep;
}

std::string CompareReport::to_text() const {
  std::string out = fmt::format("{} UAVs, {} steps, convergence limit {:.0f}% of cloud-signal RMS\n",
                                n_uavs, steps, 100.0 * relative_threshold);
  out += fmt::format("{:>4} {:>14} {:>14} {:>11} {:>11} {:>11}\n", "uav", "rms_divergence",
                     "max_divergence", "cloud_rms", "err_limit", "converged@");
  for (const auto& u : uavs) {
    out += fmt::format("{:>4} {:>14.6f} {:>14.6f} {:>11.5f} {:>11.5f} {:>11}\n", u.uav, u.rms_divergence,
                       u.max_divergence, u.cloud_rms, u.err_limit,
                       u.convergence_step ? std::to_string(*u.convergence_step) : std::string("never"));
  }
  return out;
}

std::string CompareReport::to_json() const {
  nlohmann::ordered_json j;
  j["n_uavs"] = n_uavs;
  j["steps"] = steps;
  j["relative_threshold"] = relative_threshold;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& u : uavs) {
    nlohmann::ordered_json e;
    e["uav"] = u.uav;
    e["rms_divergence"] = u.rms_divergence;
    e["max_divergence"] = u.max_divergence;
    e["cloud_rms"] = u.cloud_rms;
    e["err_limit"] = u.err_limit;
    if (u.convergence_step) {
      e["convergence_step"] = *u.convergence_step;
    } else {
      e["convergence_step"] = nullptr;
    }
    list.push_back(e);
  }
  j["uavs"] = list;
  return j.dump(2) + "\n";
}

}  // namespace dtswarm::compare
