#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace tomo {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Generalized Laguerre polynomial L_n^{(alpha)}(x) by the three-term recurrence.
inline double laguerre(int n, double alpha, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace tomo
