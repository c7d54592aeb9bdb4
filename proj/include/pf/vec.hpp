#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pf {

// Embedding-space point. Dimension is dynamic; every position inside one
// snapshot must share it.
using Vec = std::vector<double>;

inline void require_same_dim(const Vec& a, const Vec& b, const char* where) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
}

inline double squared_distance(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double distance(const Vec& a, const Vec& b) {
  require_same_dim(a, b, "distance");
  return std::sqrt(squared_distance(a, b));
}

inline double squared_norm(const Vec& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(squared_norm(a)); }

inline double dot(const Vec& a, const Vec& b) {
  require_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec sub(const Vec& a, const Vec& b) {
  require_same_dim(a, b, "sub");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Vec add(const Vec& a, const Vec& b) {
  require_same_dim(a, b, "add");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline void add_scaled(Vec& acc, double c, const Vec& x) {
  require_same_dim(acc, x, "add_scaled");
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * x[i];
}

inline Vec scaled(const Vec& a, double c) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

inline bool all_finite(const Vec& a) {
  for (double x : a) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// Unit-normalize in place; zero vectors are left untouched.
inline void normalize(Vec& a) {
  const double n = norm(a);
  if (n > 0.0) {
    for (double& x : a) x /= n;
  }
}

inline Vec normalized(Vec a) {
  normalize(a);
  return a;
}

}  // namespace pf
