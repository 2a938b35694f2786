#pragma once

#include <cmath>
#include <span>

namespace jointvec {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double squared_l2(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

inline double l2_norm(std::span<const double> a) { return std::sqrt(squared_l2(a)); }

inline double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

}  // namespace jointvec
