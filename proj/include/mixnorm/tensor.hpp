#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "mixnorm/error.hpp"
#include "mixnorm/exponent.hpp"

namespace mixnorm {

enum class Field { real, complex };

inline const char* to_string(Field f) { return f == Field::real ? "real" : "complex"; }

using Complex = std::complex<double>;
using Shape = std::vector<std::size_t>;

template <class S>
inline constexpr bool is_complex_v = std::is_same_v<S, Complex>;

template <class S>
concept Scalar = std::is_same_v<S, double> || std::is_same_v<S, Complex>;

template <Scalar S>
inline constexpr Field field_of = is_complex_v<S> ? Field::complex : Field::real;

namespace detail {

inline std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

inline std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

template <Scalar S>
bool is_finite(const S& x) {
  if constexpr (is_complex_v<S>) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  } else {
    return std::isfinite(x);
  }
}

}  // namespace detail

/// Dense m-way array in row-major order (last axis fastest).
///
/// Values are immutable once built: every operation returns a new tensor,
/// so instances can be shared across threads freely. Construction checks
/// that the shape is non-empty with positive extents, that the data length
/// matches, and that every entry is finite.
template <Scalar S>
class Tensor {
 public:
  using value_type = S;
  static constexpr Field field = field_of<S>;

  Tensor(Shape shape, std::vector<S> data) : shape_(std::move(shape)), data_(std::move(data)) {
    detail::require(!shape_.empty(), "tensor order must be at least 1");
    for (auto extent : shape_) detail::require(extent >= 1, "tensor extents must be positive");
    detail::require(detail::shape_size(shape_) == data_.size(),
                    "data length " + std::to_string(data_.size()) + " does not match shape " +
                        detail::shape_string(shape_));
    for (const auto& x : data_) detail::require(detail::is_finite(x), "tensor entries must be finite");
    strides_.assign(shape_.size(), 1);
    for (std::size_t k = shape_.size() - 1; k > 0; --k) strides_[k - 1] = strides_[k] * shape_[k];
  }

  static Tensor filled(Shape shape, S value) {
    const auto n = detail::shape_size(shape);
    return Tensor(std::move(shape), std::vector<S>(n, value));
  }
  static Tensor zeros(Shape shape) { return filled(std::move(shape), S{}); }

  /// Builds a tensor by evaluating `f(multi_index)` at every position.
  template <class F>
  static Tensor generate(Shape shape, F&& f) {
    std::vector<S> data;
    data.reserve(detail::shape_size(shape));
    std::vector<std::size_t> idx(shape.size(), 0);
    const auto n = detail::shape_size(shape);
    for (std::size_t flat = 0; flat < n; ++flat) {
      data.push_back(static_cast<S>(f(std::as_const(idx))));
      for (std::size_t k = shape.size(); k-- > 0;) {
        if (++idx[k] < shape[k]) break;
        idx[k] = 0;
      }
    }
    return Tensor(std::move(shape), std::move(data));
  }

  [[nodiscard]] const Shape& shape() const { return shape_; }
  [[nodiscard]] std::size_t order() const { return shape_.size(); }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
  [[nodiscard]] std::span<const S> data() const { return data_; }
  [[nodiscard]] const std::vector<std::size_t>& strides() const { return strides_; }

  [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) flat += idx[k] * strides_[k];
    return flat;
  }

  [[nodiscard]] const S& operator()(std::span<const std::size_t> idx) const {
    return data_[flat_index(idx)];
  }
  [[nodiscard]] const S& operator()(std::initializer_list<std::size_t> idx) const {
    return data_[flat_index(std::span<const std::size_t>(idx.begin(), idx.size()))];
  }
  [[nodiscard]] const S& operator[](std::size_t flat) const { return data_[flat]; }

  [[nodiscard]] bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const S& x) { return x == S{}; });
  }

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<S> data_;
  std::vector<std::size_t> strides_;
};

using RealTensor = Tensor<double>;
using ComplexTensor = Tensor<Complex>;

namespace detail {

/// Plain summation below 1024 terms, pairwise above.
inline double stable_sum(std::span<const double> xs) {
  constexpr std::size_t kPairwiseThreshold = 1024;
  if (xs.size() < kPairwiseThreshold) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return stable_sum(xs.first(half)) + stable_sum(xs.subspan(half));
}

/// (Σ|x_i|^p)^{1/p} for any p > 0 (p < 1 gives the quasi-norm), or max for
/// the infinite tag. Entries are scaled by the largest one before powering.
inline double lp_reduce(std::span<const double> xs, const Exponent& p, std::vector<double>& scratch) {
  double largest = 0.0;
  for (double x : xs) largest = std::max(largest, x);
  if (p.is_infinite() || largest == 0.0) return largest;
  const double pv = p.value();
  scratch.resize(xs.size());
  if (pv == 1.0) {
    std::copy(xs.begin(), xs.end(), scratch.begin());
    return stable_sum(scratch);
  }
  for (std::size_t i = 0; i < xs.size(); ++i) scratch[i] = std::pow(xs[i] / largest, pv);
  return largest * std::pow(stable_sum(scratch), 1.0 / pv);
}

/// Nested norm of a non-negative row-major array: the last axis is reduced
/// with exps.back(), the result with the exponent before it, and so on.
/// No domain checks; callers validate exponents.
inline double nested_norm(std::vector<double> values, const Shape& shape, const ExponentTuple& exps) {
  std::vector<double> scratch;
  for (std::size_t axis = shape.size(); axis-- > 0;) {
    const std::size_t len = shape[axis];
    const std::size_t groups = values.size() / len;
    std::vector<double> next(groups);
    for (std::size_t g = 0; g < groups; ++g) {
      next[g] = lp_reduce(std::span<const double>(values).subspan(g * len, len), exps[axis], scratch);
    }
    values = std::move(next);
  }
  return values.front();
}

template <Scalar S>
std::vector<double> moduli(const Tensor<S>& t) {
  std::vector<double> out(t.size());
  std::transform(t.data().begin(), t.data().end(), out.begin(), [](const S& x) { return std::abs(x); });
  return out;
}

}  // namespace detail

/// Reorders axes so that axis k of the result is axis `perm[k]` of `t`.
template <Scalar S>
Tensor<S> permute_axes(const Tensor<S>& t, std::span<const std::size_t> perm) {
  const auto m = t.order();
  detail::require(perm.size() == m, "permutation length must equal tensor order");
  std::vector<bool> seen(m, false);
  for (auto p : perm) {
    detail::require(p < m && !seen[p], "invalid axis permutation");
    seen[p] = true;
  }
  Shape shape(m);
  for (std::size_t k = 0; k < m; ++k) shape[k] = t.extent(perm[k]);
  std::vector<std::size_t> src(m);
  return Tensor<S>::generate(shape, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t k = 0; k < m; ++k) src[perm[k]] = idx[k];
    return t(src);
  });
}

template <Scalar S>
Tensor<S> transpose(const Tensor<S>& t) {
  detail::require(t.order() == 2, "transpose expects a 2-axis tensor");
  const std::size_t perm[] = {1, 0};
  return permute_axes(t, perm);
}

/// Mixed ℓ_q norm, axis 0 outermost:
/// (Σ_{i1}(…(Σ_{im}|a_i|^{q_m})^{q_{m-1}/q_m}…)^{q_1/q_2})^{1/q_1},
/// with a supremum in place of the sum wherever q_j is infinite.
template <Scalar S>
double mixed_norm(const Tensor<S>& t, const ExponentTuple& q) {
  detail::require(q.size() == t.order(), "exponent tuple length " + std::to_string(q.size()) +
                                             " does not match tensor order " + std::to_string(t.order()));
  detail::require_norm_exponents(q, "mixed_norm");
  return detail::nested_norm(detail::moduli(t), t.shape(), q);
}

/// Plain ℓ_r norm over all entries, (Σ|a_i|^r)^{1/r}.
template <Scalar S>
double entry_norm(const Tensor<S>& t, const Exponent& r) {
  return mixed_norm(t, ExponentTuple(t.order(), r));
}

/// Coordinatewise product (a_i b_i).
template <Scalar S>
Tensor<S> hadamard_product(const Tensor<S>& a, const Tensor<S>& b) {
  detail::require(a.shape() == b.shape(), "hadamard_product: shape mismatch " +
                                              detail::shape_string(a.shape()) + " vs " +
                                              detail::shape_string(b.shape()));
  std::vector<S> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return Tensor<S>(a.shape(), std::move(out));
}

/// Entries |a_i|^θ. The result is real for either input field.
template <Scalar S>
RealTensor pointwise_power(const Tensor<S>& a, double theta) {
  detail::require(theta > 0.0 && std::isfinite(theta), "pointwise_power: theta must be positive");
  auto out = detail::moduli(a);
  if (theta != 1.0) {
    for (auto& x : out) x = std::pow(x, theta);
  }
  return RealTensor(a.shape(), std::move(out));
}

/// Modulus tensor |a|.
template <Scalar S>
RealTensor abs(const Tensor<S>& a) {
  return RealTensor(a.shape(), detail::moduli(a));
}

/// (Σ_{i_S}(Σ_{i_Ŝ}|a_i|^q)^{s/q})^{1/s}: outer ℓ_s over the axes listed in
/// `outer_axes` (0-based), inner ℓ_q over the remaining ones.
///
/// Evaluated as the mixed norm of the axis permutation (S in ascending order,
/// then the complement) with tuple (s,…,s,q,…,q), so S = {0,…,k-1} reproduces
/// `mixed_norm` bit for bit.
template <Scalar S>
double grouped_mixed_norm(const Tensor<S>& t, std::span<const std::size_t> outer_axes, double s, double q) {
  const auto m = t.order();
  detail::require(!outer_axes.empty(), "grouped_mixed_norm: axis set is empty");
  detail::require(std::isfinite(s) && s >= 1.0 && std::isfinite(q) && q >= 1.0,
                  "grouped_mixed_norm: exponents must lie in [1, inf)");
  std::vector<bool> in_set(m, false);
  for (auto a : outer_axes) {
    detail::require(a < m, "grouped_mixed_norm: axis out of range");
    detail::require(!in_set[a], "grouped_mixed_norm: repeated axis");
    in_set[a] = true;
  }
  std::vector<std::size_t> perm;
  for (std::size_t a = 0; a < m; ++a)
    if (in_set[a]) perm.push_back(a);
  const auto k = perm.size();
  for (std::size_t a = 0; a < m; ++a)
    if (!in_set[a]) perm.push_back(a);

  ExponentTuple exps(m, Exponent(q));
  std::fill_n(exps.begin(), k, Exponent(s));

  bool identity = true;
  for (std::size_t a = 0; a < m; ++a) identity = identity && perm[a] == a;
  if (identity) return detail::nested_norm(detail::moduli(t), t.shape(), exps);
  const auto permuted = permute_axes(t, perm);
  return detail::nested_norm(detail::moduli(permuted), permuted.shape(), exps);
}

struct MinkowskiPair {
  double lhs;
  double rhs;
};

/// Both sides of (Σ_i(Σ_j|c_ij|^p)^{q/p})^{1/q} ≤ (Σ_j(Σ_i|c_ij|^q)^{p/q})^{1/p}
/// for 0 < p ≤ q < ∞. Exponents below 1 are allowed here.
template <Scalar S>
MinkowskiPair minkowski_pair(const Tensor<S>& c, double p, double q) {
  detail::require(c.order() == 2, "minkowski_pair expects a matrix");
  detail::require(p > 0.0, "minkowski_pair: p must be positive");
  detail::require(std::isfinite(q) && p <= q, "minkowski_pair: need p <= q < inf");
  const ExponentTuple row_major{Exponent(q), Exponent(p)};
  const ExponentTuple col_major{Exponent(p), Exponent(q)};
  const auto ct = transpose(c);
  return {detail::nested_norm(detail::moduli(c), c.shape(), row_major),
          detail::nested_norm(detail::moduli(ct), ct.shape(), col_major)};
}

template <Scalar S>
Tensor<S> scale(const Tensor<S>& t, S factor) {
  std::vector<S> out(t.data().begin(), t.data().end());
  for (auto& x : out) x *= factor;
  return Tensor<S>(t.shape(), std::move(out));
}

}  // namespace mixnorm
