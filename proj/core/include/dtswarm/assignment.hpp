#pragma once

#include <vector>

#include <Eigen/Dense>

namespace dtswarm::assignment {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
/// O(n^3)). Returns col_for_row.
std::vector<int> solve(const Eigen::MatrixXd& cost);

/// Assigns each UAV a generator minimising the total Euclidean distance.
/// Returns generator_for_uav. Throws ConfigError on count mismatch.
std::vector<int> assign_generators_to_uavs(const std::vector<Eigen::Vector3d>& generators,
                                           const std::vector<Eigen::Vector3d>& uav_positions);

}  // namespace dtswarm::assignment
