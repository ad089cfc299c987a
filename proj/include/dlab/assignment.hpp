#pragma once

#include <limits>
#include <vector>

namespace dlab {

/// Minimum-cost perfect assignment on an n x m cost matrix (n <= m),
/// Jonker-Volgenant style shortest augmenting paths. Returns for each
/// row the matched column. Costs must be finite.
inline std::vector<int> min_cost_assignment(const std::vector<std::vector<double>> &cost) {
  const int n = int(cost.size());
  if (n == 0) return {};
  const int m = int(cost[0].size());
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(std::size_t(n) + 1, 0.0), v(std::size_t(m) + 1, 0.0);
  std::vector<int> p(std::size_t(m) + 1, 0), way(std::size_t(m) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(std::size_t(m) + 1, inf);
    std::vector<char> used(std::size_t(m) + 1, false);
    do {
      used[std::size_t(j0)] = true;
      const int i0 = p[std::size_t(j0)];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= m; ++j) {
        if (used[std::size_t(j)]) continue;
        const double cur = cost[std::size_t(i0 - 1)][std::size_t(j - 1)] - u[std::size_t(i0)] - v[std::size_t(j)];
        if (cur < minv[std::size_t(j)]) {
          minv[std::size_t(j)] = cur;
          way[std::size_t(j)] = j0;
        }
        if (minv[std::size_t(j)] < delta) {
          delta = minv[std::size_t(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[std::size_t(j)]) {
          u[std::size_t(p[std::size_t(j)])] += delta;
          v[std::size_t(j)] -= delta;
        } else {
          minv[std::size_t(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[std::size_t(j0)] != 0);
    do {
      const int j1 = way[std::size_t(j0)];
      p[std::size_t(j0)] = p[std::size_t(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(std::size_t(n), -1);
  for (int j = 1; j <= m; ++j)
    if (p[std::size_t(j)] > 0) row_to_col[std::size_t(p[std::size_t(j)] - 1)] = j - 1;
  return row_to_col;
}

inline double assignment_cost(const std::vector<std::vector<double>> &cost,
                              const std::vector<int> &match) {
  double total = 0.0;
  for (std::size_t i = 0; i < match.size(); ++i) total += cost[i][std::size_t(match[i])];
  return total;
}

/// Cost of the best assignment that differs from `match` in at least one
/// edge; found by forbidding each matched edge in turn.
inline double second_best_assignment_cost(std::vector<std::vector<double>> cost,
                                          const std::vector<int> &match) {
  const double inf = 1e100;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < match.size(); ++i) {
    const double saved = cost[i][std::size_t(match[i])];
    cost[i][std::size_t(match[i])] = inf;
    const auto alt = min_cost_assignment(cost);
    const double c = assignment_cost(cost, alt);
    if (c < best) best = c;
    cost[i][std::size_t(match[i])] = saved;
  }
  return best;
}

} // namespace dlab
