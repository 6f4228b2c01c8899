#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's norm code; everything is written as plain loops.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "mixnorm/rng.hpp"
#include "mixnorm/tensor.hpp"

namespace oracle {

using Complex = std::complex<double>;

/// (Σ_i (Σ_j |a_ij|^q2)^{q1/q2})^{1/q1} for a row-major r×c block.
template <class S>
double mixed2(const std::vector<S>& a, std::size_t rows, std::size_t cols, double q1, double q2) {
  double outer = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < cols; ++j) inner += std::pow(std::abs(a[i * cols + j]), q2);
    outer += std::pow(std::pow(inner, 1.0 / q2), q1);
  }
  return std::pow(outer, 1.0 / q1);
}

template <class S>
double entry_norm(const std::vector<S>& a, double r) {
  double s = 0.0;
  for (const auto& x : a) s += std::pow(std::abs(x), r);
  return std::pow(s, 1.0 / r);
}

/// max over x, y ∈ {±1}^n of |Σ a_ij x_i y_j| by full enumeration.
inline double bilinear_linf(const std::vector<double>& a, std::size_t rows, std::size_t cols) {
  double best = 0.0;
  for (std::uint32_t xm = 0; xm < (1U << rows); ++xm)
    for (std::uint32_t ym = 0; ym < (1U << cols); ++ym) {
      double v = 0.0;
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
          v += a[i * cols + j] * ((xm >> i) & 1U ? -1.0 : 1.0) * ((ym >> j) & 1U ? -1.0 : 1.0);
      best = std::max(best, std::abs(v));
    }
  return best;
}

/// Full enumeration of every argument's sign vector for an order-m cube of
/// side n (m·n ≤ ~20).
inline double multilinear_linf(const std::vector<double>& a, int m, int n) {
  const int bits = m * n;
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    double v = 0.0;
    for (std::size_t flat = 0; flat < a.size(); ++flat) {
      std::size_t rem = flat;
      double sign = 1.0;
      for (int k = m - 1; k >= 0; --k) {
        const auto i = rem % n;
        rem /= n;
        if ((mask >> (k * n + i)) & 1U) sign = -sign;
      }
      v += a[flat] * sign;
    }
    best = std::max(best, std::abs(v));
  }
  return best;
}

inline std::vector<double> random_reals(std::size_t count, std::uint64_t seed) {
  mixnorm::CounterRng rng(seed);
  std::vector<double> v(count);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

inline std::vector<Complex> random_complex(std::size_t count, std::uint64_t seed) {
  mixnorm::CounterRng rng(seed);
  std::vector<Complex> v(count);
  for (auto& x : v) x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return v;
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace oracle
