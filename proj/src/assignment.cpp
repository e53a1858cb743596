#include <algorithm>
#include <limits>
#include <vector>

#include "pointres/geometry.hpp"

namespace pointres {

namespace {

struct HungarianState {
  std::vector<double> u, v;      // row / column potentials (1-based, index 0 unused)
  std::vector<int> row_of_col;   // 1-based; row_of_col[0] is scratch
};

// Shortest augmenting path Hungarian method for min-cost assignment,
// O(n^3). Leaves feasible potentials: cost(i,j) - u[i] - v[j] >= 0 with
// equality on matched edges.
HungarianState hungarian_min(const std::vector<double>& cost, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  HungarianState s;
  s.u.assign(n + 1, 0.0);
  s.v.assign(n + 1, 0.0);
  s.row_of_col.assign(n + 1, 0);
  std::vector<int> way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    s.row_of_col[0] = static_cast<int>(i);
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = static_cast<std::size_t>(s.row_of_col[j0]);
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - s.u[i0] - s.v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = static_cast<int>(j0);
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          s.u[static_cast<std::size_t>(s.row_of_col[j])] += delta;
          s.v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (s.row_of_col[j0] != 0);
    do {
      const std::size_t j1 = static_cast<std::size_t>(way[j0]);
      s.row_of_col[j0] = s.row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  return s;
}

// Every optimal assignment is a perfect matching in the equality subgraph
// of the optimal duals. Walk rows in order and pin each to the smallest
// column that still admits a perfect matching on the remaining rows.
void lexmin_refine(const std::vector<std::vector<int>>& adj, std::vector<int>& col_of_row) {
  const std::size_t n = col_of_row.size();
  std::vector<int> row_of_col(n);
  for (std::size_t i = 0; i < n; ++i) row_of_col[static_cast<std::size_t>(col_of_row[i])] = static_cast<int>(i);
  std::vector<char> col_locked(n, 0);

  std::vector<int> parent_row(n);
  std::vector<char> seen(n);

  for (std::size_t i = 0; i < n; ++i) {
    for (int j : adj[i]) {
      if (col_locked[static_cast<std::size_t>(j)]) continue;
      if (col_of_row[i] == j) break;

      // Try i -> j: row r2 loses j, column c0 = col_of_row[i] becomes free.
      const int r2 = row_of_col[static_cast<std::size_t>(j)];
      const int c0 = col_of_row[i];
      std::fill(seen.begin(), seen.end(), 0);
      seen[static_cast<std::size_t>(j)] = 1;
      int found = -1;
      // BFS over columns; parent_row[c] is the row that reaches column c.
      std::vector<int> frontier_rows{r2};
      while (!frontier_rows.empty() && found < 0) {
        std::vector<int> next;
        for (int r : frontier_rows) {
          for (int c : adj[static_cast<std::size_t>(r)]) {
            const auto cu = static_cast<std::size_t>(c);
            if (seen[cu] || col_locked[cu]) continue;
            seen[cu] = 1;
            parent_row[cu] = r;
            if (c == c0) {
              found = c;
              break;
            }
            const int rn = row_of_col[cu];
            if (rn == static_cast<int>(i)) continue;
            next.push_back(rn);
          }
          if (found >= 0) break;
        }
        frontier_rows.swap(next);
      }
      if (found < 0) continue;

      // Flip the alternating path ending at c0, then pin i -> j.
      int c = found;
      while (true) {
        const int r = parent_row[static_cast<std::size_t>(c)];
        const int prev = col_of_row[static_cast<std::size_t>(r)];
        col_of_row[static_cast<std::size_t>(r)] = c;
        row_of_col[static_cast<std::size_t>(c)] = r;
        if (r == r2) break;
        c = prev;
      }
      col_of_row[i] = j;
      row_of_col[static_cast<std::size_t>(j)] = static_cast<int>(i);
      break;
    }
    col_locked[static_cast<std::size_t>(col_of_row[i])] = 1;
  }
}

}  // namespace

Assignment max_weight_assignment(std::span<const double> weights, std::size_t n, double tie_tol) {
  Assignment out;
  if (n == 0) return out;

  std::vector<double> cost(weights.begin(), weights.end());
  for (double& x : cost) x = -x;
  const HungarianState s = hungarian_min(cost, n);

  out.column_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j)
    out.column_of_row[static_cast<std::size_t>(s.row_of_col[j] - 1)] = static_cast<int>(j - 1);

  std::vector<std::vector<int>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double reduced = cost[i * n + j] - s.u[i + 1] - s.v[j + 1];
      if (reduced <= tie_tol || out.column_of_row[i] == static_cast<int>(j))
        adj[i].push_back(static_cast<int>(j));
    }
  }
  lexmin_refine(adj, out.column_of_row);

  for (std::size_t i = 0; i < n; ++i)
    out.value += weights[i * n + static_cast<std::size_t>(out.column_of_row[i])];
  return out;
}

}  // namespace pointres
