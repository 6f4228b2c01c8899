#pragma once

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include "mixnorm/error.hpp"

namespace mixnorm {

/// An ℓ_p exponent. Infinity is carried as an explicit tag rather than a
/// large float so that sup-reductions are taken by their own branch.
class Exponent {
 public:
  constexpr Exponent() = default;
  // Implicit on purpose: `ExponentTuple{2, 1.5}` reads naturally.
  constexpr Exponent(double value) : value_(value) {}  // NOLINT

  static constexpr Exponent infinity() {
    Exponent e;
    e.infinite_ = true;
    return e;
  }

  [[nodiscard]] constexpr bool is_infinite() const { return infinite_; }

  /// Finite value, or +inf for the infinite tag.
  [[nodiscard]] constexpr double value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  /// 1/p with 1/∞ := 0.
  [[nodiscard]] constexpr double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

  /// p/θ; infinity stays infinite.
  [[nodiscard]] constexpr Exponent divided_by(double theta) const {
    return infinite_ ? infinity() : Exponent(value_ / theta);
  }

  [[nodiscard]] std::string to_string() const;

  friend constexpr bool operator==(const Exponent& a, const Exponent& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  double value_ = 1.0;
  bool infinite_ = false;
};

inline std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

/// Exponent from its reciprocal; a zero reciprocal yields the infinite tag.
inline Exponent exponent_from_reciprocal(double reciprocal) {
  return reciprocal == 0.0 ? Exponent::infinity() : Exponent(1.0 / reciprocal);
}

using ExponentTuple = std::vector<Exponent>;

namespace detail {

/// Every entry must be a genuine ℓ_p exponent, p ∈ [1, ∞].
inline void require_norm_exponents(const ExponentTuple& q, const char* what) {
  require(!q.empty(), std::string(what) + ": exponent tuple is empty");
  for (const auto& e : q) {
    if (e.is_infinite()) continue;
    require(std::isfinite(e.value()) && e.value() >= 1.0,
            std::string(what) + ": exponent " + e.to_string() + " is below 1");
  }
}

}  // namespace detail
}  // namespace mixnorm
