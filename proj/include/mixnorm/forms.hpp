#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixnorm/error.hpp"
#include "mixnorm/exponent.hpp"
#include "mixnorm/rng.hpp"
#include "mixnorm/tensor.hpp"

namespace mixnorm {

inline constexpr std::uint64_t kDefaultExactBudget = std::uint64_t{1} << 24;

/// m-linear form T(x¹,…,xᵐ) = Σ_i a_i x¹_{i1}⋯xᵐ_{im}, stored by its
/// coefficient tensor a_i = T(e_{i1},…,e_{im}).
template <Scalar S>
class MultilinearForm {
 public:
  explicit MultilinearForm(Tensor<S> coefficients) : coefficients_(std::move(coefficients)) {}

  [[nodiscard]] const Tensor<S>& coefficients() const { return coefficients_; }
  [[nodiscard]] std::size_t order() const { return coefficients_.order(); }
  [[nodiscard]] std::size_t extent(std::size_t axis) const { return coefficients_.extent(axis); }

 private:
  Tensor<S> coefficients_;
};

using MultiIndex = std::vector<int>;

/// m-homogeneous polynomial P(x) = Σ_{|α|=m} a_α x^α in n variables.
template <Scalar S>
class HomogeneousPolynomial {
 public:
  HomogeneousPolynomial(int degree, int nvars) : degree_(degree), nvars_(nvars) {
    detail::require(degree >= 1, "polynomial degree must be positive");
    detail::require(nvars >= 1, "polynomial must have at least one variable");
  }

  /// Adds `coefficient` to the term x^α.
  void add_term(const MultiIndex& alpha, S coefficient) {
    check_multi_index(alpha);
    detail::require(detail::is_finite(coefficient), "polynomial coefficients must be finite");
    terms_[alpha] += coefficient;
  }

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int nvars() const { return nvars_; }
  [[nodiscard]] const std::map<MultiIndex, S>& terms() const { return terms_; }

  [[nodiscard]] S coefficient(const MultiIndex& alpha) const {
    check_multi_index(alpha);
    auto it = terms_.find(alpha);
    return it == terms_.end() ? S{} : it->second;
  }

  [[nodiscard]] S operator()(std::span<const S> x) const {
    detail::require(x.size() == static_cast<std::size_t>(nvars_), "polynomial evaluated at wrong dimension");
    S total{};
    for (const auto& [alpha, a] : terms_) {
      S mono = a;
      for (int i = 0; i < nvars_; ++i)
        for (int e = 0; e < alpha[i]; ++e) mono *= x[i];
      total += mono;
    }
    return total;
  }

  void check_multi_index(const MultiIndex& alpha) const {
    detail::require(alpha.size() == static_cast<std::size_t>(nvars_), "multi-index length must equal nvars");
    int total = 0;
    for (int a : alpha) {
      detail::require(a >= 0, "multi-index entries must be non-negative");
      total += a;
    }
    detail::require(total == degree_, "multi-index order |alpha| must equal the degree");
  }

 private:
  int degree_;
  int nvars_;
  std::map<MultiIndex, S> terms_;
};

/// All α ∈ ℕⁿ with |α| = m, in lexicographically decreasing order.
inline std::vector<MultiIndex> monomial_exponents(int nvars, int degree) {
  std::vector<MultiIndex> out;
  MultiIndex alpha(nvars, 0);
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == nvars - 1) {
      alpha[var] = remaining;
      out.push_back(alpha);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      alpha[var] = e;
      self(self, var + 1, remaining - e);
    }
  };
  rec(rec, 0, degree);
  return out;
}

/// m!/(α₁!⋯αₙ!).
inline double multinomial(const MultiIndex& alpha) {
  int m = 0;
  double value = 1.0;
  for (int a : alpha) {
    for (int k = 1; k <= a; ++k) value = value * (m + k) / k;
    m += a;
  }
  return std::round(value);
}

namespace detail {

template <Scalar S>
void check_arguments(const MultilinearForm<S>& t, std::span<const std::vector<S>> args) {
  require(args.size() == t.order(), "form expects " + std::to_string(t.order()) + " arguments");
  for (std::size_t k = 0; k < args.size(); ++k)
    require(args[k].size() == t.extent(k), "argument " + std::to_string(k) + " has the wrong length");
}

/// Contracts axis 0 of a row-major block of extent `len` with x.
template <Scalar S>
std::vector<S> contract_front(std::span<const S> block, std::size_t len, std::span<const S> x) {
  const std::size_t rest = block.size() / len;
  std::vector<S> out(rest, S{});
  for (std::size_t i = 0; i < len; ++i) {
    const S xi = x[i];
    if (xi == S{}) continue;
    const S* row = block.data() + i * rest;
    for (std::size_t r = 0; r < rest; ++r) out[r] += xi * row[r];
  }
  return out;
}

/// Contracts the last axis (extent `len`) with x.
template <Scalar S>
std::vector<S> contract_back(std::span<const S> block, std::size_t len, std::span<const S> x) {
  const std::size_t groups = block.size() / len;
  std::vector<S> out(groups, S{});
  for (std::size_t g = 0; g < groups; ++g) {
    S acc{};
    const S* row = block.data() + g * len;
    for (std::size_t i = 0; i < len; ++i) acc += row[i] * x[i];
    out[g] = acc;
  }
  return out;
}

/// T(x¹,…,·,…,xᵐ): every argument except `skip` applied; the result is the
/// induced linear functional on axis `skip`.
template <Scalar S>
std::vector<S> induced_functional(const MultilinearForm<S>& t, std::span<const std::vector<S>> args,
                                  std::size_t skip) {
  const auto& shape = t.coefficients().shape();
  std::vector<S> cur(t.coefficients().data().begin(), t.coefficients().data().end());
  for (std::size_t k = shape.size(); k-- > skip + 1;) cur = contract_back<S>(cur, shape[k], args[k]);
  for (std::size_t k = 0; k < skip; ++k) cur = contract_front<S>(cur, shape[k], args[k]);
  return cur;
}

template <Scalar S>
double abs_sum(std::span<const S> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::abs(x);
  return s;
}

}  // namespace detail

template <Scalar S>
S evaluate_form(const MultilinearForm<S>& t, std::span<const std::vector<S>> args) {
  detail::check_arguments(t, args);
  const auto last = t.order() - 1;
  const auto c = detail::induced_functional(t, args, last);
  S total{};
  for (std::size_t i = 0; i < c.size(); ++i) total += c[i] * args[last][i];
  return total;
}

template <Scalar S>
S evaluate_form(const MultilinearForm<S>& t, std::initializer_list<std::vector<S>> args) {
  return evaluate_form(t, std::span<const std::vector<S>>(args.begin(), args.size()));
}

/// Exact ℓ_∞ norm together with maximising sign vectors (one per axis).
struct ExactNorm {
  double value = 0.0;
  std::vector<std::vector<double>> arguments;
};

/// ‖T‖ = sup over [−1,1]ⁿ¹×⋯×[−1,1]ⁿᵐ of |T(x¹,…,xᵐ)| for a real form.
///
/// The supremum is attained at sign vectors. The first m−1 arguments are
/// enumerated in Gray-code order (x¹₀ fixed to +1 by the symmetry x¹ → −x¹);
/// for each, the last argument is the sign pattern of the induced functional
/// c, worth ‖c‖₁. Deeper axes take the low Gray bits, so a typical step only
/// updates c by a row. Partial contractions P_k = T(x¹,…,xᵏ,·,…) are kept per
/// level and refreshed every 4096 steps; the winner is re-evaluated from the
/// raw coefficients.
template <Scalar S>
ExactNorm sup_norm_linf_exact_argmax(const MultilinearForm<S>& t, std::uint64_t budget = kDefaultExactBudget) {
  if constexpr (is_complex_v<S>) {
    throw DomainError("sup_norm_linf_exact: complex forms have no exact routine; use sup_norm_ball_estimate");
  } else {
    const auto& coeffs = t.coefficients();
    const auto& shape = coeffs.shape();
    const std::size_t m = shape.size();
    const std::size_t last = m - 1;

    std::size_t bits = 0;
    for (std::size_t k = 0; k < last; ++k) bits += shape[k];
    if (bits >= 63 || (std::uint64_t{1} << bits) > budget) {
      throw BudgetExceeded("sup_norm_linf_exact: 2^" + std::to_string(bits) +
                           " sign patterns exceed the budget of " + std::to_string(budget));
    }

    std::vector<std::vector<double>> x(m);
    for (std::size_t k = 0; k < m; ++k) x[k].assign(shape[k], 1.0);

    // Gray bit b -> (axis, index); low bits belong to the deepest axis.
    std::vector<std::pair<std::size_t, std::size_t>> bit_owner;
    for (std::size_t k = last; k-- > 0;)
      for (std::size_t i = 0; i < shape[k]; ++i)
        if (!(k == 0 && i == 0)) bit_owner.emplace_back(k, i);

    // level[k] = coefficients contracted with x¹..xᵏ (level[0] is T itself).
    std::vector<std::vector<double>> level(m);
    level[0].assign(coeffs.data().begin(), coeffs.data().end());
    auto rebuild_from = [&](std::size_t k) {
      for (std::size_t j = k; j < last; ++j) level[j + 1] = detail::contract_front<double>(level[j], shape[j], x[j]);
    };
    rebuild_from(0);

    auto current = [&] { return detail::abs_sum<double>(level[last]); };
    double best = current();
    std::vector<std::vector<double>> best_x = x;

    const std::uint64_t steps = bit_owner.empty() ? 1 : (std::uint64_t{1} << bit_owner.size());
    for (std::uint64_t step = 1; step < steps; ++step) {
      const auto [axis, index] = bit_owner[std::countr_zero(step)];
      x[axis][index] = -x[axis][index];
      if ((step & 0xFFF) == 0) {
        rebuild_from(0);
      } else {
        // level[axis+1] += 2 x_new · slice_index(level[axis]), then deeper levels.
        const std::size_t rest = level[axis].size() / shape[axis];
        const double* slice = level[axis].data() + index * rest;
        const double delta = 2.0 * x[axis][index];
        auto& next = level[axis + 1];
        for (std::size_t r = 0; r < rest; ++r) next[r] += delta * slice[r];
        rebuild_from(axis + 1);
      }
      const double v = current();
      if (v > best) {
        best = v;
        best_x = x;
      }
    }

    // Recompute the winner from scratch so rounding drift never leaks out.
    const auto c = detail::induced_functional(t, std::span<const std::vector<double>>(best_x), last);
    for (std::size_t i = 0; i < c.size(); ++i) best_x[last][i] = c[i] < 0.0 ? -1.0 : 1.0;
    return {detail::abs_sum<double>(c), std::move(best_x)};
  }
}

template <Scalar S>
double sup_norm_linf_exact(const MultilinearForm<S>& t, std::uint64_t budget = kDefaultExactBudget) {
  return sup_norm_linf_exact_argmax(t, budget).value;
}

struct BallEstimate {
  double value = 0.0;          ///< best |T(x)| found, a lower bound on ‖T‖
  std::size_t best_restart = 0;
  std::vector<double> trace;   ///< |T(x)| after each sweep of the best restart
};

struct EstimatorOptions {
  std::size_t restarts = 50;
  std::size_t max_sweeps = 200;
  double relative_gain = 1e-12;
  std::uint64_t seed = 1889;
};

namespace detail {

/// Maximiser of |Σ c_i x_i| over the unit ℓ_p ball; returns ‖c‖_{p′}.
template <Scalar S>
double align_to_functional(std::span<const S> c, const Exponent& p, std::vector<S>& x) {
  auto phase = [](const S& v) -> S {
    const double a = std::abs(v);
    if (a == 0.0) return S{1};
    if constexpr (is_complex_v<S>) {
      return std::conj(v) / a;
    } else {
      return v / a;
    }
  };
  if (p.is_infinite()) {
    for (std::size_t i = 0; i < c.size(); ++i) x[i] = phase(c[i]);
    return abs_sum<S>(c);
  }
  const double pc = p.value() / (p.value() - 1.0);
  std::vector<double> mod(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) mod[i] = std::abs(c[i]);
  std::vector<double> scratch;
  const double dual = lp_reduce(mod, Exponent(pc), scratch);
  if (dual == 0.0) return 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) x[i] = phase(c[i]) * std::pow(mod[i] / dual, pc - 1.0);
  return dual;
}

template <Scalar S>
std::vector<S> random_unit_vector(std::size_t n, const Exponent& p, CounterRng& rng) {
  std::vector<S> v(n);
  std::vector<double> mod(n);
  for (std::size_t i = 0; i < n; ++i) {
    if constexpr (is_complex_v<S>) {
      v[i] = rng.unit_disc();
    } else {
      v[i] = rng.uniform(-1.0, 1.0);
    }
    mod[i] = std::abs(v[i]);
  }
  std::vector<double> scratch;
  const double norm = lp_reduce(mod, p, scratch);
  if (norm == 0.0) {
    v.assign(n, S{});
    v[0] = S{1};
    return v;
  }
  for (auto& e : v) e /= norm;
  return v;
}

}  // namespace detail

/// Lower estimate of ‖T‖ on a product of unit ℓ_p balls, p ∈ (1, ∞] per axis.
///
/// Alternating ascent: with all arguments but one fixed, T is a linear
/// functional c in the free argument and the ball maximiser is
/// x_i = phase(c_i)|c_i|^{p′−1}/‖c‖_{p′}^{p′−1}. Each update can only raise
/// |T(x)|, so the per-sweep trace is non-decreasing. A restart stops once a
/// sweep gains less than `relative_gain`, or after `max_sweeps`. Restart r
/// draws its start from stream (seed, r); the best restart wins.
template <Scalar S>
BallEstimate sup_norm_ball_estimate(const MultilinearForm<S>& t, const ExponentTuple& p,
                                    const EstimatorOptions& opts = {}) {
  const std::size_t m = t.order();
  detail::require(p.size() == m, "sup_norm_ball_estimate: one exponent per axis required");
  for (const auto& e : p) {
    detail::require(e.is_infinite() || (std::isfinite(e.value()) && e.value() > 1.0),
                    "sup_norm_ball_estimate: exponents must lie in (1, inf]");
  }
  detail::require(opts.restarts >= 1, "sup_norm_ball_estimate: need at least one restart");

  BallEstimate result;
  std::vector<std::vector<S>> x(m);
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    auto rng = CounterRng::stream(opts.seed, r);
    for (std::size_t k = 0; k < m; ++k) x[k] = detail::random_unit_vector<S>(t.extent(k), p[k], rng);
    std::vector<double> trace;
    double value = std::abs(evaluate_form(t, std::span<const std::vector<S>>(x)));
    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      double v = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const auto c = detail::induced_functional(t, std::span<const std::vector<S>>(x), k);
        v = detail::align_to_functional<S>(c, p[k], x[k]);
      }
      // Guard against last-ulp wobble so the trace stays monotone.
      v = std::max(v, value);
      trace.push_back(v);
      const bool converged = v - value <= opts.relative_gain * v;
      value = v;
      if (converged) break;
    }
    if (value > result.value || r == 0) {
      result.value = value;
      result.best_restart = r;
      result.trace = std::move(trace);
    }
  }
  return result;
}

/// (Σ_i |a_i|^r)^{1/r} over the coefficient tensor.
template <Scalar S>
double power_sum_lhs(const MultilinearForm<S>& t, double r) {
  detail::require(std::isfinite(r) && r >= 1.0, "power_sum_lhs: need r >= 1");
  return entry_norm(t.coefficients(), Exponent(r));
}

/// (Σ_α |a_α|^r)^{1/r} over the monomial coefficients.
template <Scalar S>
double power_sum_lhs(const HomogeneousPolynomial<S>& p, double r) {
  detail::require(std::isfinite(r) && r >= 1.0, "power_sum_lhs: need r >= 1");
  std::vector<double> mod;
  for (const auto& [alpha, a] : p.terms()) mod.push_back(std::abs(a));
  if (mod.empty()) return 0.0;
  std::vector<double> scratch;
  return detail::lp_reduce(mod, Exponent(r), scratch);
}

inline constexpr int kMaxPolarizationDegree = 6;
inline constexpr int kMaxPolarizationVars = 8;

/// Symmetric m-linear L with L(x,…,x) = P(x), entry by entry from
/// L(e_{j1},…,e_{jm}) = (1/(m!2^m)) Σ_{ε∈{±1}^m} ε₁⋯ε_m P(ε₁e_{j1}+⋯+ε_m e_{jm}).
/// Only non-decreasing index tuples are evaluated; the rest are copies, so
/// the output is exactly symmetric.
template <Scalar S>
MultilinearForm<S> polarize(const HomogeneousPolynomial<S>& poly) {
  const int m = poly.degree();
  const int n = poly.nvars();
  if (m > kMaxPolarizationDegree || n > kMaxPolarizationVars) {
    throw BudgetExceeded("polarize: supported up to degree 6 in 8 variables");
  }
  double scale = std::ldexp(1.0, m);
  for (int k = 2; k <= m; ++k) scale *= k;

  Shape shape(m, static_cast<std::size_t>(n));
  std::map<std::vector<std::size_t>, S> cache;
  std::vector<S> point(n);
  auto entry = [&](const std::vector<std::size_t>& idx) -> S {
    auto key = idx;
    std::sort(key.begin(), key.end());
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    S sum{};
    for (std::uint32_t signs = 0; signs < (1U << m); ++signs) {
      std::fill(point.begin(), point.end(), S{});
      double eps_product = 1.0;
      for (int k = 0; k < m; ++k) {
        const double eps = (signs >> k) & 1U ? -1.0 : 1.0;
        eps_product *= eps;
        point[key[k]] += eps;
      }
      sum += eps_product * poly(point);
    }
    const S value = sum / scale;
    cache.emplace(std::move(key), value);
    return value;
  };
  return MultilinearForm<S>(Tensor<S>::generate(shape, entry));
}

/// a_α / binom(m, α) = L(e₁^{α₁},…,eₙ^{αₙ}) for the polar L of P.
template <Scalar S>
S polar_coefficient(const HomogeneousPolynomial<S>& poly, const MultiIndex& alpha) {
  return poly.coefficient(alpha) / multinomial(alpha);
}

/// Index tuple (1,…,1,2,…,2,…) listing each variable αᵢ times.
inline std::vector<std::size_t> index_tuple(const MultiIndex& alpha) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int e = 0; e < alpha[i]; ++e) idx.push_back(i);
  return idx;
}

/// max over index permutations of |a_i − a_σ(i)|.
template <Scalar S>
double symmetry_defect(const Tensor<S>& t) {
  double worst = 0.0;
  const auto m = t.order();
  for (std::size_t k = 1; k < m; ++k)
    detail::require(t.extent(k) == t.extent(0), "symmetry_defect expects a cubical tensor");
  std::vector<std::size_t> sorted;
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    sorted.assign(m, 0);
    std::size_t rem = flat;
    for (std::size_t k = m; k-- > 0;) {
      sorted[k] = rem % t.extent(k);
      rem /= t.extent(k);
    }
    std::sort(sorted.begin(), sorted.end());
    worst = std::max(worst, std::abs(t[flat] - t(sorted)));
  }
  return worst;
}

/// Lower estimate of sup_{x ∈ [−1,1]ⁿ} |P(x)| for a real polynomial: every
/// vertex of the cube (n ≤ 16), then coordinate ascent on a 129-point grid
/// from random starts.
inline double polynomial_sup_estimate(const HomogeneousPolynomial<double>& poly, std::size_t restarts = 32,
                                      std::uint64_t seed = 1889) {
  const int n = poly.nvars();
  std::vector<double> x(n);
  double best = 0.0;
  if (n <= 16) {
    for (std::uint32_t v = 0; v < (1U << n); ++v) {
      for (int i = 0; i < n; ++i) x[i] = (v >> i) & 1U ? -1.0 : 1.0;
      best = std::max(best, std::abs(poly(x)));
    }
  }
  constexpr int kGrid = 129;
  for (std::size_t r = 0; r < restarts; ++r) {
    auto rng = CounterRng::stream(seed, r);
    for (auto& xi : x) xi = rng.uniform(-1.0, 1.0);
    double value = std::abs(poly(x));
    for (int sweep = 0; sweep < 50; ++sweep) {
      const double before = value;
      for (int i = 0; i < n; ++i) {
        double arg = x[i];
        for (int g = 0; g < kGrid; ++g) {
          x[i] = -1.0 + 2.0 * g / (kGrid - 1);
          const double v = std::abs(poly(x));
          if (v > value) {
            value = v;
            arg = x[i];
          }
        }
        x[i] = arg;
      }
      if (value <= before) break;
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace mixnorm
