#pragma once

namespace dtswarm::runtime {

/// Communication pattern between cloud and edge: continuous for the first
/// learning_steps steps, then every update_period steps.
struct CommSchedule {
  int learning_steps = 50;
  int update_period = 5;
  /// Slow weights adapt only when |e| exceeds this value.
  double err_update_threshold = 0.05;

  void validate() const;

  bool operator==(const CommSchedule&) const = default;
};

bool comm_gate(int step, const CommSchedule& schedule);

}  // namespace dtswarm::runtime
