#include "dtswarm/assignment.hpp"

#include <limits>

#include <fmt/format.h>

#include "dtswarm/errors.hpp"

namespace dtswarm::assignment {

// Shortest augmenting path formulation with row/column potentials. Arrays
// are 1-based internally with index 0 as the virtual source column.
std::vector<int> solve(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw DomainError("assignment::solve: cost matrix must be square");
  if (n == 0) return {};

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> row_of_col(n + 1, 0), way(n + 1, 0);

  for (int row = 1; row <= n; ++row) {
    row_of_col[0] = row;
    int col0 = 0;
    std::vector<double> min_slack(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const int r0 = row_of_col[col0];
      double delta = inf;
      int col1 = 0;
      for (int c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double slack = cost(r0 - 1, c - 1) - u[r0] - v[c];
        if (slack < min_slack[c]) {
          min_slack[c] = slack;
          way[c] = col0;
        }
        if (min_slack[c] < delta) {
          delta = min_slack[c];
          col1 = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        if (used[c]) {
          u[row_of_col[c]] += delta;
          v[c] -= delta;
        } else {
          min_slack[c] -= delta;
        }
      }
      col0 = col1;
    } while (row_of_col[col0] != 0);
    do {
      const int col1 = way[col0];
      row_of_col[col0] = row_of_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<int> col_for_row(static_cast<std::size_t>(n), -1);
  for (int c = 1; c <= n; ++c) col_for_row[static_cast<std::size_t>(row_of_col[c] - 1)] = c - 1;
  return col_for_row;
}

std::vector<int> assign_generators_to_uavs(const std::vector<Eigen::Vector3d>& generators,
                                           const std::vector<Eigen::Vector3d>& uav_positions) {
  if (generators.size() != uav_positions.size()) {
    throw ConfigError(fmt::format("assignment: {} generators for {} UAVs", generators.size(),
                                  uav_positions.size()));
  }
  const auto n = static_cast<Eigen::Index>(generators.size());
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index g = 0; g < n; ++g)
      cost(i, g) = (uav_positions[static_cast<std::size_t>(i)] -
                    generators[static_cast<std::size_t>(g)]).norm();
  return solve(cost);
}

}  // namespace dtswarm::assignment
