#pragma once

#include <random>
#include <vector>

#include "pf/vec.hpp"

namespace pftest {

// Random rotation matrix (dim x dim, row-major) by Gram-Schmidt on Gaussian
// columns; determinant sign is irrelevant for the invariance checks.
inline std::vector<pf::Vec> random_rotation(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<pf::Vec> rows;
  while (static_cast<int>(rows.size()) < dim) {
    pf::Vec v(static_cast<std::size_t>(dim));
    for (double& x : v) x = gauss(rng);
    for (const pf::Vec& r : rows) pf::add_scaled(v, -pf::dot(v, r), r);
    const double n = pf::norm(v);
    if (n < 1e-8) continue;
    for (double& x : v) x /= n;
    rows.push_back(std::move(v));
  }
  return rows;
}

inline pf::Vec apply_matrix(const std::vector<pf::Vec>& rows, const pf::Vec& x) {
  pf::Vec out(rows.size(), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = pf::dot(rows[i], x);
  return out;
}

}  // namespace pftest
