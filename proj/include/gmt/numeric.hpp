#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace gmt {

using Vec = std::array<double, 3>;

inline double dot(const Vec& a, const Vec& b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double distance(const Vec& a, const Vec& b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Pairwise (tree) summation. All grid reductions go through this so the
/// result depends only on the order of the terms, never on the thread layout.
inline double pairwise_sum(std::span<const double> terms) {
  constexpr std::size_t block = 32;
  if (terms.size() <= block) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& terms) {
  return pairwise_sum(std::span<const double>(terms.data(), terms.size()));
}

inline bool close_rel(double a, double b, double rel) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= rel * scale;
}

}  // namespace gmt
