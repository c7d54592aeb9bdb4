#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "pf/vec.hpp"

namespace pf {

struct RetrievalResult {
  std::map<int, double> recall_at;
  int num_queries = 0;
};

// Recall@K: the fraction of queries with at least one same-class point among
// their K nearest other embeddings. Self is excluded; distance ties break
// toward the lower index so results are platform-stable.
inline RetrievalResult recall_at_k(const std::vector<Vec>& embeddings,
                                   const std::vector<int>& labels, const std::vector<int>& ks) {
  const std::size_t n = embeddings.size();
  if (labels.size() != n) throw std::invalid_argument("recall_at_k: labels size mismatch");
  if (n < 2) throw std::invalid_argument("recall_at_k: need at least two embeddings");
  int max_k = 0;
  for (int k : ks) {
    if (k < 1 || static_cast<std::size_t>(k) >= n)
      throw std::invalid_argument("recall_at_k: K must satisfy 1 <= K < n");
    max_k = std::max(max_k, k);
  }
  RetrievalResult res;
  res.num_queries = static_cast<int>(n);
  std::vector<int> hits(ks.size(), 0);
  std::vector<std::pair<double, int>> order(n - 1);
  for (std::size_t q = 0; q < n; ++q) {
    std::size_t m = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == q) continue;
      order[m++] = {squared_distance(embeddings[q], embeddings[j]), static_cast<int>(j)};
    }
    std::partial_sort(order.begin(), order.begin() + max_k, order.end());
    int best_rank = -1;  // rank of the first same-class neighbor, if within max_k
    for (int r = 0; r < max_k; ++r) {
      if (labels[static_cast<std::size_t>(order[static_cast<std::size_t>(r)].second)] ==
          labels[q]) {
        best_rank = r;
        break;
      }
    }
    if (best_rank >= 0) {
      for (std::size_t i = 0; i < ks.size(); ++i) {
        if (best_rank < ks[i]) ++hits[i];
      }
    }
  }
  for (std::size_t i = 0; i < ks.size(); ++i)
    res.recall_at[ks[i]] = static_cast<double>(hits[i]) / static_cast<double>(n);
  return res;
}

// Min-cost rectangular assignment (rows <= cols) by shortest augmenting
// paths with dual potentials; O(rows^2 * cols). Returns row -> column.
inline std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int m = static_cast<int>(cost.size());
  const int n = m > 0 ? static_cast<int>(cost[0].size()) : 0;
  if (m > n) throw std::invalid_argument("min_cost_assignment: more rows than columns");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // column -> row (1-based)
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= m; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(m), -1);
  for (int j = 1; j <= n; ++j) {
    if (match[static_cast<std::size_t>(j)] > 0)
      row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return row_to_col;
}

struct AlignmentResult {
  double w2 = 0.0;
  std::vector<int> matched_subset;  // data indices, ascending
  std::vector<int> assignment;      // proxy index -> data index
};

// Mean-distance proxy alignment: minimizes (1/m) * sum ||p_k - z_pi(k)||
// jointly over the m-subset of data and the matching pi, which reduces
// exactly to rectangular min-cost assignment on the m x n distance matrix.
inline AlignmentResult w2_alignment(const std::vector<Vec>& proxies,
                                    const std::vector<Vec>& data) {
  const std::size_t m = proxies.size();
  const std::size_t n = data.size();
  if (m < 1) throw std::invalid_argument("w2_alignment: need at least one proxy");
  if (n < m) throw std::invalid_argument("w2_alignment: need at least as many data points");
  std::vector<std::vector<double>> cost(m, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i][j] = distance(proxies[i], data[j]);
  AlignmentResult res;
  res.assignment = min_cost_assignment(cost);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    total += cost[i][static_cast<std::size_t>(res.assignment[i])];
  res.w2 = total / static_cast<double>(m);
  res.matched_subset = res.assignment;
  std::sort(res.matched_subset.begin(), res.matched_subset.end());
  return res;
}

}  // namespace pf
