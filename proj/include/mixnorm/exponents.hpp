#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixnorm/error.hpp"
#include "mixnorm/exponent.hpp"

namespace mixnorm {

/// Convex-combination weights θ: non-negative, summing to one within 1e-12.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> theta) : theta_(std::move(theta)) {
    detail::require(!theta_.empty(), "weight vector is empty");
    double total = 0.0;
    for (double t : theta_) {
      detail::require(std::isfinite(t) && t >= 0.0 && t <= 1.0, "weights must lie in [0, 1]");
      total += t;
    }
    detail::require(std::abs(total - 1.0) <= 1e-12, "weights must sum to 1");
  }

  [[nodiscard]] std::size_t size() const { return theta_.size(); }
  [[nodiscard]] double operator[](std::size_t k) const { return theta_[k]; }
  [[nodiscard]] std::span<const double> values() const { return theta_; }

 private:
  std::vector<double> theta_;
};

inline constexpr double kSplitTolerance = 1e-12;
inline constexpr double kInterpolationTolerance = 1e-9;
inline constexpr std::size_t kMaxInterpolationCandidates = 20;

/// True iff 1/r_j = Σ_k 1/q_j(k) on every axis j, within 1e-12.
inline bool holder_split_check(const ExponentTuple& r, std::span<const ExponentTuple> qs) {
  detail::require_norm_exponents(r, "holder_split_check");
  detail::require(!qs.empty(), "holder_split_check: no factor exponents given");
  for (const auto& q : qs) {
    detail::require(q.size() == r.size(), "holder_split_check: tuple length mismatch");
    detail::require_norm_exponents(q, "holder_split_check");
  }
  for (std::size_t j = 0; j < r.size(); ++j) {
    double sum = 0.0;
    for (const auto& q : qs) sum += q[j].reciprocal();
    if (std::abs(sum - r[j].reciprocal()) > kSplitTolerance) return false;
  }
  return true;
}

/// max_j |Σ_k θ_k/q_j(k) − 1/q_j|, together with |Σθ − 1|.
inline double interpolation_residual(const ExponentTuple& target, std::span<const ExponentTuple> candidates,
                                     std::span<const double> theta) {
  double worst = std::abs(std::accumulate(theta.begin(), theta.end(), 0.0) - 1.0);
  for (std::size_t j = 0; j < target.size(); ++j) {
    double mix = 0.0;
    for (std::size_t k = 0; k < candidates.size(); ++k) mix += theta[k] * candidates[k][j].reciprocal();
    worst = std::max(worst, std::abs(mix - target[j].reciprocal()));
  }
  return worst;
}

/// Finds θ on the simplex whose reciprocal mixture Σ_k θ_k/q(k) reproduces
/// 1/target, or nullopt when no simplex point does so to 1e-9.
///
/// Among feasible θ the one minimising Σθ_k² is returned. The problem is a
/// least-norm QP over the simplex; the optimum is the equality-constrained
/// least-norm solution on its own support, so every support is tried and
/// the best non-negative, feasible candidate kept. With at most 20
/// candidates this is exhaustive and exact. Candidate sets whose optimum is
/// not unique to 1e-12 (collinear reciprocal points) return one optimum.
inline std::optional<WeightVector> interpolation_weights(const ExponentTuple& target,
                                                         std::span<const ExponentTuple> candidates) {
  const std::size_t m = target.size();
  const std::size_t n = candidates.size();
  detail::require(m >= 1, "interpolation_weights: empty target");
  detail::require(n >= 1, "interpolation_weights: no candidates");
  detail::require(n <= kMaxInterpolationCandidates, "interpolation_weights: at most 20 candidates supported");
  detail::require_norm_exponents(target, "interpolation_weights");
  for (const auto& q : candidates) {
    detail::require(q.size() == m, "interpolation_weights: dimension mismatch");
    detail::require_norm_exponents(q, "interpolation_weights");
  }
  auto finite = [](const ExponentTuple& q) {
    return std::none_of(q.begin(), q.end(), [](const Exponent& e) { return e.is_infinite(); });
  };
  detail::require(finite(target), "interpolation_weights: infinite exponents are not interpolated");
  for (const auto& q : candidates)
    detail::require(finite(q), "interpolation_weights: infinite exponents are not interpolated");

  Eigen::MatrixXd a(m + 1, n);
  Eigen::VectorXd b(m + 1);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < n; ++k) a(j, k) = candidates[k][j].reciprocal();
    b(j) = target[j].reciprocal();
  }
  a.row(m).setOnes();
  b(m) = 1.0;

  std::optional<std::vector<double>> best;
  double best_norm = std::numeric_limits<double>::infinity();
  std::vector<double> theta(n);
  std::vector<std::size_t> support;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    support.clear();
    for (std::size_t k = 0; k < n; ++k)
      if (mask & (1U << k)) support.push_back(k);
    Eigen::MatrixXd sub(m + 1, support.size());
    for (std::size_t c = 0; c < support.size(); ++c) sub.col(c) = a.col(support[c]);
    const Eigen::VectorXd sol = sub.completeOrthogonalDecomposition().solve(b);

    if ((sol.array() < -1e-12).any()) continue;
    std::fill(theta.begin(), theta.end(), 0.0);
    for (std::size_t c = 0; c < support.size(); ++c) theta[support[c]] = std::clamp(sol(c), 0.0, 1.0);
    if (interpolation_residual(target, candidates, theta) > kInterpolationTolerance) continue;
    const double norm = std::inner_product(theta.begin(), theta.end(), theta.begin(), 0.0);
    if (norm < best_norm) {
      best_norm = norm;
      best = theta;
    }
  }
  if (!best) return std::nullopt;
  // Project the sum exactly onto 1 before handing back a WeightVector.
  const double total = std::accumulate(best->begin(), best->end(), 0.0);
  for (auto& t : *best) t /= total;
  return WeightVector(std::move(*best));
}

struct BleiExponents {
  double w;    ///< w(s1, s2)
  double f12;  ///< f(s1, s2), weight on the row factor
  double f21;  ///< f(s2, s1), weight on the column factor
};

/// w(x,y) = (q²(x+y) − 2qxy)/(q² − xy), f(x,y) = (q²x − qxy)/(q²(x+y) − 2qxy),
/// for q, s1, s2 ≥ 1 with q > max(s1, s2).
inline BleiExponents blei_exponents(double q, double s1, double s2) {
  detail::require(std::isfinite(q) && std::isfinite(s1) && std::isfinite(s2) && s1 >= 1.0 && s2 >= 1.0,
                  "blei_exponents: exponents must be finite and >= 1");
  detail::require(q > std::max(s1, s2), "blei_exponents: need q > max(s1, s2)");
  const double q2 = q * q;
  const double denom_f = q2 * (s1 + s2) - 2.0 * q * s1 * s2;
  return {denom_f / (q2 - s1 * s2), (q2 * s1 - q * s1 * s2) / denom_f, (q2 * s2 - q * s1 * s2) / denom_f};
}

/// ρ = msq/(kq + (m−k)s), the entry exponent reachable from the size-k
/// grouped (s, q) norms.
inline double rho_exponent(int m, int k, double s, double q) {
  detail::require(1 <= k && k <= m, "rho_exponent: need 1 <= k <= m");
  detail::require(std::isfinite(q) && 1.0 <= s && s <= q, "rho_exponent: need 1 <= s <= q < inf");
  return m * s * q / (k * q + (m - k) * s);
}

/// Hardy–Littlewood exponent 2mp/(mp + p − 2m); the infinite p gives 2m/(m+1).
inline double hl_exponent(int m, const Exponent& p) {
  detail::require(m >= 2, "hl_exponent: need m >= 2");
  if (p.is_infinite()) return 2.0 * m / (m + 1.0);
  detail::require(std::isfinite(p.value()) && p.value() >= 2.0 * m, "hl_exponent: need p >= 2m");
  const double pv = p.value();
  return 2.0 * m * pv / (m * pv + pv - 2.0 * m);
}

}  // namespace mixnorm
