#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "mixnorm/error.hpp"
#include "mixnorm/tensor.hpp"

namespace mixnorm {

enum class Provenance { formula, recursion, literature };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::formula: return "formula";
    case Provenance::recursion: return "recursion";
    case Provenance::literature: return "literature";
  }
  return "?";
}

/// A named constant with the parameters that produced it.
struct ConstantValue {
  std::string name;
  double value = 0.0;
  Provenance provenance = Provenance::formula;
  std::string field;     // "", "real" or "complex"
  int m = 0;             // 0 when not applicable
  double p = 0.0;        // 0 when not applicable
  std::string strategy;  // "" when not applicable
};

inline double euler_gamma() { return std::numbers::egamma; }

/// Unique p₀ ∈ (1,2) with Γ((p₀+1)/2) = √π/2, by bisection.
///
/// Γ is decreasing up to its minimum near 1.4616, so the bracket [1, 1.9]
/// isolates p₀ from the second root at p = 2.
inline double khinchine_p0() {
  const double target = std::sqrt(std::numbers::pi) / 2.0;
  double lo = 1.0, hi = 1.9;  // f(lo) > 0 > f(hi)
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (std::tgamma(0.5 * (mid + 1.0)) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Best constant A_{K,p} of the Khinchine inequality, p ∈ [1,2]:
///   complex (Steinhaus):  Γ((p+2)/2)^{1/p}
///   real, p < p₀:         2^{1/2 − 1/p}
///   real, p ≥ p₀:         √2 (Γ((1+p)/2)/√π)^{1/p}
inline double khinchine_constant(Field field, double p) {
  detail::require(p >= 1.0 && p <= 2.0, "khinchine_constant: p must lie in [1, 2]");
  if (field == Field::complex) return std::pow(std::tgamma(0.5 * p + 1.0), 1.0 / p);
  static const double p0 = khinchine_p0();
  if (p < p0) return std::exp2(0.5 - 1.0 / p);
  return std::numbers::sqrt2 *
         std::exp((std::lgamma(0.5 * (1.0 + p)) - 0.5 * std::log(std::numbers::pi)) / p);
}

/// How an upper bound for the multilinear Bohnenblust–Hille constant is built.
struct BhStrategy {
  enum class Kind { best, davie, ps2012, recursion };
  Kind kind = Kind::best;
  int k = 0;  // only for recursion

  static BhStrategy best() { return {Kind::best, 0}; }
  static BhStrategy davie() { return {Kind::davie, 0}; }
  static BhStrategy ps2012() { return {Kind::ps2012, 0}; }
  static BhStrategy recursion(int k) { return {Kind::recursion, k}; }

  [[nodiscard]] std::string to_string() const {
    switch (kind) {
      case Kind::best: return "best";
      case Kind::davie: return "davie";
      case Kind::ps2012: return "ps2012";
      case Kind::recursion: return "recursion:" + std::to_string(k);
    }
    return "?";
  }
};

namespace detail {

/// log of Π_{j=2}^m Γ(2−1/j)^{j/(2−2j)} (complex) or, for real scalars,
/// (√2)^{H_{m−1}} up to m = 13 and 2^{446381/55440 − m/2} Π_{j=14}^m
/// (Γ(3/2−1/j)/√π)^{j/(2−2j)} beyond.
inline double log_bh_best(Field field, int m) {
  double s = 0.0;
  if (field == Field::complex) {
    for (int j = 2; j <= m; ++j) s += (j / (2.0 - 2.0 * j)) * std::lgamma(2.0 - 1.0 / j);
    return s;
  }
  if (m <= 13) {
    for (int j = 1; j < m; ++j) s += 1.0 / j;
    return 0.5 * std::numbers::ln2 * s;
  }
  const double log_sqrt_pi = 0.5 * std::log(std::numbers::pi);
  s = (446381.0 / 55440.0 - 0.5 * m) * std::numbers::ln2;
  for (int j = 14; j <= m; ++j) s += (j / (2.0 - 2.0 * j)) * (std::lgamma(1.5 - 1.0 / j) - log_sqrt_pi);
  return s;
}

/// B₁ = 1, B_j = A_{2(j−1)/j}^{−1} B_{j−1}, evaluated through khinchine_constant.
inline double log_bh_chain(Field field, int m) {
  double s = 0.0;
  for (int j = 2; j <= m; ++j) s -= std::log(khinchine_constant(field, 2.0 * (j - 1) / j));
  return s;
}

inline double log_bh_ps2012(Field field, int m, std::map<int, double>& memo) {
  if (m == 1) return 0.0;
  if (auto it = memo.find(m); it != memo.end()) return it->second;
  auto log_a = [field](double p) { return std::log(khinchine_constant(field, p)); };
  double v;
  if (m % 2 == 0) {
    v = -0.5 * m * log_a(2.0 * m / (m + 2.0)) + log_bh_ps2012(field, m / 2, memo);
  } else {
    const double lower = -0.5 * (m + 1) * log_a((2.0 * m - 2.0) / (m + 1.0)) +
                         log_bh_ps2012(field, (m - 1) / 2, memo);
    const double upper = 0.5 * (1 - m) * log_a((2.0 * m + 2.0) / (m + 3.0)) +
                         log_bh_ps2012(field, (m + 1) / 2, memo);
    v = (m - 1.0) / (2.0 * m) * lower + (m + 1.0) / (2.0 * m) * upper;
  }
  memo.emplace(m, v);
  return v;
}

}  // namespace detail

/// Natural log of the chosen upper bound for B^mult_{K,m}; every strategy
/// gives B₁ = 1.
///
/// `recursion(k)` applies B_m ≤ A_{2k/(k+1)}^{−1} B_k with B_k from the
/// k = j−1 chain. Only k = m−1 is backed by a written argument; other k are
/// exposed for experimentation.
inline double log_bh_mult_upper(Field field, int m, BhStrategy strategy = BhStrategy::best()) {
  detail::require(m >= 1, "bh_mult_upper: need m >= 1");
  if (strategy.kind == BhStrategy::Kind::recursion) {
    detail::require(strategy.k >= 1 && strategy.k < m, "bh_mult_upper: recursion needs 1 <= k < m");
  }
  if (m == 1) return 0.0;
  switch (strategy.kind) {
    case BhStrategy::Kind::best: return detail::log_bh_best(field, m);
    case BhStrategy::Kind::davie: return 0.5 * std::numbers::ln2 * (m - 1);
    case BhStrategy::Kind::ps2012: {
      std::map<int, double> memo;
      return detail::log_bh_ps2012(field, m, memo);
    }
    case BhStrategy::Kind::recursion: {
      const int k = strategy.k;
      return detail::log_bh_chain(field, k) - std::log(khinchine_constant(field, 2.0 * k / (k + 1.0)));
    }
  }
  return 0.0;
}

inline double bh_mult_upper(Field field, int m, BhStrategy strategy = BhStrategy::best()) {
  return std::exp(log_bh_mult_upper(field, m, strategy));
}

/// Least-squares slope of log B_m against log m over `points` geometrically
/// spaced m in [m_lo, m_hi] (duplicates after rounding dropped).
inline double bh_growth_fit(Field field, int m_lo, int m_hi, BhStrategy strategy = BhStrategy::best(),
                            int points = 13) {
  detail::require(2 <= m_lo && m_lo < m_hi, "bh_growth_fit: need 2 <= m_lo < m_hi");
  detail::require(points >= 2, "bh_growth_fit: need at least two grid points");
  std::vector<int> grid;
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    const int m = static_cast<int>(std::lround(m_lo * std::pow(static_cast<double>(m_hi) / m_lo, t)));
    if (grid.empty() || grid.back() != m) grid.push_back(m);
  }
  std::vector<double> xs, ys;
  for (int m : grid) {
    xs.push_back(std::log(m));
    ys.push_back(log_bh_mult_upper(field, m, strategy));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

enum class PolynomialBhStrategy { original, polarization };

/// Upper bound for the polynomial Bohnenblust–Hille constant.
///   original:      D_m = (√2)^{m−1} m^{m/2}(m+1)^{(m+1)/2} / (2^m (m!)^{(m+1)/(2m)})
///   polarization:  B^mult_{K,m} · m^m/(m!)^{(m+1)/(2m)}
inline double polynomial_bh_upper(int m, PolynomialBhStrategy strategy, Field field = Field::complex) {
  detail::require(m >= 1, "polynomial_bh_upper: need m >= 1");
  const double log_fact = std::lgamma(m + 1.0);
  const double fact_exp = (m + 1.0) / (2.0 * m);
  if (strategy == PolynomialBhStrategy::original) {
    const double ln2 = std::numbers::ln2;
    return std::exp(0.5 * ln2 * (m - 1) + 0.5 * m * std::log(m) + 0.5 * (m + 1) * std::log(m + 1.0) - m * ln2 -
                    fact_exp * log_fact);
  }
  return std::exp(log_bh_mult_upper(field, m) + m * std::log(m) - fact_exp * log_fact);
}

/// Upper bound for the Hardy–Littlewood constant C^K_{m,p}, 2m ≤ p < ∞:
/// base^{2m(m−1)/p} · (B^mult_{K,m})^{(p−2m)/p}, base √2 (real) or 2/√π (complex).
inline double hl_constant_upper(Field field, int m, double p) {
  detail::require(m >= 2, "hl_constant_upper: need m >= 2");
  detail::require(std::isfinite(p) && p >= 2.0 * m, "hl_constant_upper: need 2m <= p < inf");
  const double log_base = field == Field::real ? 0.5 * std::numbers::ln2
                                               : std::log(2.0 / std::sqrt(std::numbers::pi));
  return std::exp(2.0 * m * (m - 1) / p * log_base + (p - 2.0 * m) / p * log_bh_mult_upper(field, m));
}

struct BohrBracket {
  double lower = 0.0;           ///< max of the two lower branches
  double upper = 0.0;           ///< min{2√(log n/n), 1}
  double rigorous_lower = 0.0;  ///< (1/3)√(1/n)
  double asymptotic_lower = 0.0;  ///< (1/√2)√(log n/n), valid only up to an o(1) term
  bool lower_is_asymptotic = false;
  bool upper_clamped = false;
};

/// Closed-form bracket around the n-dimensional Bohr radius K_n, n ≥ 2.
inline BohrBracket bohr_radius_bounds(long long n) {
  detail::require(n >= 2, "bohr_radius_bounds: need n >= 2");
  const double nd = static_cast<double>(n);
  const double scale = std::sqrt(std::log(nd) / nd);
  BohrBracket b;
  b.rigorous_lower = std::sqrt(1.0 / nd) / 3.0;
  b.asymptotic_lower = scale / std::numbers::sqrt2;
  b.lower_is_asymptotic = b.asymptotic_lower > b.rigorous_lower;
  b.lower = std::max(b.rigorous_lower, b.asymptotic_lower);
  const double raw_upper = 2.0 * scale;
  b.upper_clamped = raw_upper > 1.0;
  b.upper = b.upper_clamped ? 1.0 : raw_upper;
  return b;
}

/// K₁, the one-variable Bohr radius.
inline constexpr double bohr_radius_one() { return 1.0 / 3.0; }

}  // namespace mixnorm
