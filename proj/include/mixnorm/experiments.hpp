#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mixnorm/constants.hpp"
#include "mixnorm/error.hpp"
#include "mixnorm/exponent.hpp"
#include "mixnorm/exponents.hpp"
#include "mixnorm/forms.hpp"
#include "mixnorm/rng.hpp"
#include "mixnorm/tensor.hpp"

namespace mixnorm {

inline constexpr std::uint64_t kDefaultSeed = 1889;

/// Parameters shared by the random campaigns. `m` and `n` are upper bounds
/// for campaigns that draw the order/extents, and the fixed order for the
/// ones that take it as given (BH, HL, Cor-ρ).
struct TrialConfig {
  std::uint64_t seed = kDefaultSeed;
  std::size_t trials = 1000;
  int m = 2;
  int n = 4;
  Field field = Field::real;
  double tolerance = 1e-10;
  unsigned threads = 1;
  std::uint64_t budget = kDefaultExactBudget;

  void validate() const {
    detail::require(trials >= 1, "trials must be at least 1");
    detail::require(tolerance > 0.0, "tolerance must be positive");
    detail::require(m >= 1 && n >= 1, "m and n must be positive");
  }
};

struct Violation {
  std::size_t trial = 0;
  double ratio = 0.0;
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Outcome of one campaign. `ratio` is always lhs/(constant·rhs), so the
/// pass condition is ratio ≤ 1 + tolerance; `statistic` is lhs/rhs without
/// the constant (e.g. the Littlewood quotient compared against √2).
struct VerificationReport {
  std::string campaign;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double tolerance = 0.0;
  double constant = 1.0;
  double max_ratio = 0.0;
  double max_statistic = 0.0;
  std::vector<Violation> violations;
  std::vector<Violation> flagged;
  double elapsed_seconds = 0.0;

  [[nodiscard]] bool passed() const { return violations.empty() && flagged.empty(); }

  /// Field-wise equality ignoring the elapsed time.
  [[nodiscard]] bool same_outcome(const VerificationReport& o) const {
    return campaign == o.campaign && seed == o.seed && trials == o.trials && tolerance == o.tolerance &&
           constant == o.constant && max_ratio == o.max_ratio && max_statistic == o.max_statistic &&
           violations == o.violations && flagged == o.flagged;
  }
};

namespace detail {

struct TrialOutcome {
  double statistic = 0.0;  // lhs/rhs
};

/// Runs `trial(t, rng)` for every t with rng = stream(seed, t), across
/// `threads` workers, then folds the outcomes in trial order.
template <class Fn>
VerificationReport run_campaign(std::string name, const TrialConfig& cfg, double constant, bool flag_only,
                                Fn&& trial) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<TrialOutcome> outcomes(cfg.trials);
  const unsigned workers = std::max(1U, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.trials)));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t t = w; t < cfg.trials; t += workers) {
        auto rng = CounterRng::stream(cfg.seed, t);
        outcomes[t] = trial(t, rng);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  VerificationReport report;
  report.campaign = std::move(name);
  report.seed = cfg.seed;
  report.trials = cfg.trials;
  report.tolerance = cfg.tolerance;
  report.constant = constant;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const double stat = outcomes[t].statistic;
    const double ratio = stat / constant;
    report.max_statistic = std::max(report.max_statistic, stat);
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (ratio > 1.0 + cfg.tolerance) (flag_only ? report.flagged : report.violations).push_back({t, ratio});
  }
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline double safe_quotient(double lhs, double rhs) {
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

}  // namespace detail

/// Real entries uniform on [−1,1]; complex entries uniform on the unit disc.
template <Scalar S>
Tensor<S> random_tensor(const Shape& shape, CounterRng& rng) {
  return Tensor<S>::generate(shape, [&](const auto&) -> S {
    if constexpr (is_complex_v<S>) {
      return rng.unit_disc();
    } else {
      return rng.uniform(-1.0, 1.0);
    }
  });
}

inline Shape random_shape(int order, int max_extent, CounterRng& rng) {
  Shape shape(order);
  for (auto& e : shape) e = static_cast<std::size_t>(rng.uniform_int(1, max_extent));
  return shape;
}

inline RealTensor random_signs(const Shape& shape, CounterRng& rng) {
  return RealTensor::generate(shape, [&](const auto&) { return rng.sign(); });
}

// ---------------------------------------------------------------------------
// Hölder for mixed sums

/// ‖Π a_k‖_r / Π ‖a_k‖_{q(k)}; at most 1 whenever the exponents split.
template <Scalar S>
double mixed_holder_ratio(std::span<const Tensor<S>> factors, const ExponentTuple& r,
                          std::span<const ExponentTuple> qs) {
  detail::require(!factors.empty() && factors.size() == qs.size(), "mixed_holder_ratio: one tuple per factor");
  detail::require(holder_split_check(r, qs), "mixed_holder_ratio: exponents do not form a Hölder split");
  Tensor<S> product = factors[0];
  double rhs = mixed_norm(factors[0], qs[0]);
  for (std::size_t k = 1; k < factors.size(); ++k) {
    product = hadamard_product(product, factors[k]);
    rhs *= mixed_norm(factors[k], qs[k]);
  }
  return detail::safe_quotient(mixed_norm(product, r), rhs);
}

namespace detail {

template <Scalar S>
TrialOutcome mixed_holder_trial(const TrialConfig& cfg, CounterRng& rng) {
  const int m = static_cast<int>(rng.uniform_int(1, cfg.m));
  const int factors = static_cast<int>(rng.uniform_int(2, 3));
  const auto shape = random_shape(m, cfg.n, rng);
  std::vector<ExponentTuple> qs(factors, ExponentTuple(m));
  ExponentTuple r(m);
  for (int j = 0; j < m; ++j) {
    // Total reciprocal 1/r_j in (0,1], split among the factors; a zero share
    // gives that factor an infinite exponent on this axis.
    const double total = rng.uniform() < 0.2 ? 1.0 : rng.uniform_open_closed();
    std::vector<double> share(factors);
    for (auto& s : share) s = rng.uniform() < 0.2 ? 0.0 : rng.uniform_open_closed();
    const double weight = std::accumulate(share.begin(), share.end(), 0.0);
    if (weight == 0.0) share[0] = 1.0;
    const double norm = weight == 0.0 ? 1.0 : weight;
    double sum = 0.0;
    for (int k = 0; k < factors; ++k) {
      const double part = total * share[k] / norm;
      qs[k][j] = exponent_from_reciprocal(part);
      sum += qs[k][j].reciprocal();
    }
    r[j] = exponent_from_reciprocal(std::min(sum, 1.0));
  }
  std::vector<Tensor<S>> a;
  for (int k = 0; k < factors; ++k) a.push_back(random_tensor<S>(shape, rng));
  return {mixed_holder_ratio<S>(a, r, qs)};
}

}  // namespace detail

/// Random instances of ‖Π a_k‖_r ≤ Π ‖a_k‖_{q(k)} with 1/r = Σ 1/q(k):
/// order up to cfg.m, extents up to cfg.n, two or three factors.
inline VerificationReport verify_mixed_holder(const TrialConfig& cfg) {
  return detail::run_campaign("mixed_holder", cfg, 1.0, false, [&](std::size_t, CounterRng& rng) {
    return cfg.field == Field::real ? detail::mixed_holder_trial<double>(cfg, rng)
                                    : detail::mixed_holder_trial<Complex>(cfg, rng);
  });
}

/// ‖a‖_q / Π ‖a‖_{q(k)}^{θ_k}.
template <Scalar S>
double interpolative_holder_ratio(const Tensor<S>& a, const ExponentTuple& target,
                                  std::span<const ExponentTuple> candidates, const WeightVector& theta) {
  detail::require(theta.size() == candidates.size(), "interpolative_holder_ratio: one weight per candidate");
  detail::require(interpolation_residual(target, candidates, theta.values()) <= kInterpolationTolerance,
                  "interpolative_holder_ratio: target is not the weighted reciprocal mixture");
  double log_rhs = 0.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (theta[k] == 0.0) continue;
    log_rhs += theta[k] * std::log(mixed_norm(a, candidates[k]));
  }
  return detail::safe_quotient(mixed_norm(a, target), std::exp(log_rhs));
}

namespace detail {

template <Scalar S>
TrialOutcome interpolative_trial(const TrialConfig& cfg, CounterRng& rng) {
  const int m = static_cast<int>(rng.uniform_int(1, cfg.m));
  const int count = static_cast<int>(rng.uniform_int(2, 3));
  const auto shape = random_shape(m, cfg.n, rng);
  std::vector<ExponentTuple> candidates(count, ExponentTuple(m));
  for (auto& q : candidates)
    for (auto& e : q) e = Exponent(1.0 / rng.uniform_open_closed());
  std::vector<double> w(count);
  if (rng.uniform() < 0.1) {
    w.assign(count, 0.0);
    w[rng.uniform_int(0, count - 1)] = 1.0;
  } else {
    for (auto& x : w) x = -std::log(rng.uniform_open_closed());
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= total;
  }
  const WeightVector theta(w);
  ExponentTuple target(m);
  for (int j = 0; j < m; ++j) {
    double recip = 0.0;
    for (int k = 0; k < count; ++k) recip += theta[k] * candidates[k][j].reciprocal();
    target[j] = Exponent(1.0 / recip);
  }
  return {interpolative_holder_ratio(random_tensor<S>(shape, rng), target, candidates, theta)};
}

}  // namespace detail

/// Random instances of ‖a‖_q ≤ Π ‖a‖_{q(k)}^{θ_k} with 1/q = Σ θ_k/q(k).
inline VerificationReport verify_interpolative_holder(const TrialConfig& cfg) {
  return detail::run_campaign("interpolative_holder", cfg, 1.0, false, [&](std::size_t, CounterRng& rng) {
    return cfg.field == Field::real ? detail::interpolative_trial<double>(cfg, rng)
                                    : detail::interpolative_trial<Complex>(cfg, rng);
  });
}

/// All k-subsets of {0,…,m−1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> axis_subsets(std::size_t m, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t a = start; a < m; ++a) {
      cur.push_back(a);
      self(self, a + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// (Σ|a_i|^ρ)^{1/ρ} / Π_{|S|=k} grouped(a, S, s, q)^{1/C(m,k)}.
template <Scalar S>
double corollary_rho_ratio(const Tensor<S>& a, int k, double s, double q) {
  const int m = static_cast<int>(a.order());
  const double rho = rho_exponent(m, k, s, q);
  const auto subsets = axis_subsets(a.order(), static_cast<std::size_t>(k));
  double log_rhs = 0.0;
  for (const auto& set : subsets) log_rhs += std::log(grouped_mixed_norm(a, set, s, q));
  log_rhs /= static_cast<double>(subsets.size());
  return detail::safe_quotient(entry_norm(a, Exponent(rho)), std::exp(log_rhs));
}

/// Cubical tensors of order cfg.m with side drawn from [1, cfg.n].
inline VerificationReport verify_corollary_rho(const TrialConfig& cfg, int k, double s, double q) {
  rho_exponent(cfg.m, k, s, q);  // domain check up front
  return detail::run_campaign("corollary_rho", cfg, 1.0, false, [&](std::size_t, CounterRng& rng) {
    const Shape shape(cfg.m, static_cast<std::size_t>(rng.uniform_int(1, cfg.n)));
    if (cfg.field == Field::real) return detail::TrialOutcome{corollary_rho_ratio(random_tensor<double>(shape, rng), k, s, q)};
    return detail::TrialOutcome{corollary_rho_ratio(random_tensor<Complex>(shape, rng), k, s, q)};
  });
}

/// ‖a‖_w / ((Σ_i ‖row_i‖_q^{s1})^{f12/s1} (Σ_j ‖col_j‖_q^{s2})^{f21/s2}).
inline double blei_ratio(const RealTensor& a, double q, double s1, double s2) {
  detail::require(a.order() == 2, "blei_ratio expects a matrix");
  const auto e = blei_exponents(q, s1, s2);
  const std::size_t rows[] = {0};
  const std::size_t cols[] = {1};
  const double rhs = std::pow(grouped_mixed_norm(a, rows, s1, q), e.f12) *
                     std::pow(grouped_mixed_norm(a, cols, s2, q), e.f21);
  return detail::safe_quotient(entry_norm(a, Exponent(e.w)), rhs);
}

namespace detail {

inline RealTensor random_nonnegative_matrix(int max_extent, CounterRng& rng) {
  const auto shape = random_shape(2, max_extent, rng);
  return RealTensor::generate(shape, [&](const auto&) { return rng.uniform(); });
}

}  // namespace detail

/// Blei's inequality on random non-negative n₁×n₂ matrices at fixed (q, s1, s2).
inline VerificationReport verify_blei(const TrialConfig& cfg, double q, double s1, double s2) {
  blei_exponents(q, s1, s2);
  return detail::run_campaign("blei", cfg, 1.0, false, [&](std::size_t, CounterRng& rng) {
    return detail::TrialOutcome{blei_ratio(detail::random_nonnegative_matrix(cfg.n, rng), q, s1, s2)};
  });
}

/// Blei's inequality with (s1, s2) drawn from [1,3]² and q from (max, max+4].
inline VerificationReport verify_blei_random(const TrialConfig& cfg) {
  return detail::run_campaign("blei_random", cfg, 1.0, false, [&](std::size_t, CounterRng& rng) {
    const double s1 = rng.uniform(1.0, 3.0);
    const double s2 = rng.uniform(1.0, 3.0);
    const double q = std::max(s1, s2) + 4.0 * rng.uniform_open_closed();
    return detail::TrialOutcome{blei_ratio(detail::random_nonnegative_matrix(cfg.n, rng), q, s1, s2)};
  });
}

/// Random n₁×n₂ matrices and 0.25 ≤ p ≤ q ≤ 4; ratio lhs/rhs of minkowski_pair.
/// p is kept away from 0, where (Σ|c|^p)^{1/p} overflows.
inline VerificationReport verify_minkowski(const TrialConfig& cfg) {
  return detail::run_campaign("minkowski", cfg, 1.0, false, [&](std::size_t, CounterRng& rng) {
    const double p = rng.uniform(0.25, 4.0);
    const double q = rng.uniform(p, 4.0);
    const auto shape = random_shape(2, cfg.n, rng);
    const auto pair = cfg.field == Field::real ? minkowski_pair(random_tensor<double>(shape, rng), p, q)
                                               : minkowski_pair(random_tensor<Complex>(shape, rng), p, q);
    return detail::TrialOutcome{detail::safe_quotient(pair.lhs, pair.rhs)};
  });
}

// ---------------------------------------------------------------------------
// Littlewood, Bohnenblust–Hille and Hardy–Littlewood

/// (Σ|a_i|^{2m/(m+1)})^{(m+1)/2m} / ‖T‖_∞ for a real form.
inline double bh_ratio(const MultilinearForm<double>& t, std::uint64_t budget = kDefaultExactBudget) {
  const double m = static_cast<double>(t.order());
  return detail::safe_quotient(power_sum_lhs(t, 2.0 * m / (m + 1.0)), sup_norm_linf_exact(t, budget));
}

inline double littlewood_ratio(const MultilinearForm<double>& t, std::uint64_t budget = kDefaultExactBudget) {
  detail::require(t.order() == 2, "littlewood_ratio expects a bilinear form");
  return detail::safe_quotient(power_sum_lhs(t, 4.0 / 3.0), sup_norm_linf_exact(t, budget));
}

/// Random real n×n bilinear forms, n ≤ cfg.n, against L = √2.
inline VerificationReport littlewood_campaign(const TrialConfig& cfg) {
  return detail::run_campaign("littlewood", cfg, std::numbers::sqrt2, false, [&](std::size_t, CounterRng& rng) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, cfg.n));
    return detail::TrialOutcome{
        littlewood_ratio(MultilinearForm<double>(random_tensor<double>({n, n}, rng)), cfg.budget)};
  });
}

/// Random real m-linear forms on (ℓ_∞ⁿ)^m, m = cfg.m, n ≤ cfg.n, against
/// bh_mult_upper(real, m).
inline VerificationReport bh_campaign(const TrialConfig& cfg) {
  const double constant = bh_mult_upper(Field::real, cfg.m);
  return detail::run_campaign("bohnenblust_hille", cfg, constant, false, [&](std::size_t, CounterRng& rng) {
    const Shape shape(cfg.m, static_cast<std::size_t>(rng.uniform_int(1, cfg.n)));
    return detail::TrialOutcome{bh_ratio(MultilinearForm<double>(random_tensor<double>(shape, rng)), cfg.budget)};
  });
}

/// (Σ|a_i|^{hl})^{1/hl} / estimate(‖T‖ on ℓ_pⁿ balls). The denominator is a
/// lower bound for the norm, so this over-states the true quotient.
template <Scalar S>
double hl_ratio(const MultilinearForm<S>& t, double p, const EstimatorOptions& opts = {}) {
  const int m = static_cast<int>(t.order());
  const double exponent = hl_exponent(m, Exponent(p));
  const auto est = sup_norm_ball_estimate(t, ExponentTuple(m, Exponent(p)), opts);
  return detail::safe_quotient(power_sum_lhs(t, exponent), est.value);
}

/// Hardy–Littlewood campaign on (ℓ_pⁿ)^m, m = cfg.m, n ≤ cfg.n. Exceeding
/// the constant only flags a trial: the estimated norm may be too small.
inline VerificationReport hl_campaign(const TrialConfig& cfg, double p, std::size_t restarts = 50) {
  const double constant = hl_constant_upper(cfg.field, cfg.m, p);
  return detail::run_campaign("hardy_littlewood", cfg, constant, true, [&](std::size_t t, CounterRng& rng) {
    const Shape shape(cfg.m, static_cast<std::size_t>(rng.uniform_int(1, cfg.n)));
    EstimatorOptions opts;
    opts.restarts = restarts;
    opts.seed = mix64(cfg.seed) ^ mix64(~t);
    if (cfg.field == Field::real) {
      return detail::TrialOutcome{hl_ratio(MultilinearForm<double>(random_tensor<double>(shape, rng)), p, opts)};
    }
    return detail::TrialOutcome{hl_ratio(MultilinearForm<Complex>(random_tensor<Complex>(shape, rng)), p, opts)};
  });
}

// ---------------------------------------------------------------------------
// Kahane–Salem–Zygmund

/// √(32 log 6m) · n^{(m+1)/2} · √(m!).
inline double ksz_bound(int m, int n) {
  detail::require(m >= 1 && n >= 1, "ksz_bound: need m, n >= 1");
  return std::sqrt(32.0 * std::log(6.0 * m)) * std::pow(static_cast<double>(n), 0.5 * (m + 1)) *
         std::exp(0.5 * std::lgamma(m + 1.0));
}

struct KszWitness {
  RealTensor signs;
  double norm = 0.0;
  double bound = 0.0;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  [[nodiscard]] bool accepted() const { return norm <= bound; }
};

struct KszSearchResult {
  std::optional<KszWitness> first;  ///< first accepted draw
  std::optional<KszWitness> best;   ///< smallest norm seen
  std::size_t trials = 0;
  std::size_t accepted = 0;
  double max_norm = 0.0;
  [[nodiscard]] double acceptance_rate() const { return static_cast<double>(accepted) / trials; }
};

/// Draws `trials` uniform ±1 coefficient tensors of order m, side n, and
/// checks each exact ℓ_∞ norm against ksz_bound(m, n).
inline KszSearchResult ksz_search(int m, int n, std::size_t trials, std::uint64_t seed,
                                  std::uint64_t budget = kDefaultExactBudget) {
  detail::require(trials >= 1, "ksz_search: need at least one trial");
  const double bound = ksz_bound(m, n);
  KszSearchResult result;
  result.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = CounterRng::stream(seed, t);
    auto signs = random_signs(Shape(m, static_cast<std::size_t>(n)), rng);
    const double norm = sup_norm_linf_exact(MultilinearForm<double>(signs), budget);
    result.max_norm = std::max(result.max_norm, norm);
    KszWitness w{std::move(signs), norm, bound, m, n, seed, t};
    if (w.accepted()) {
      ++result.accepted;
      if (!result.first) result.first = w;
    }
    if (!result.best || norm < result.best->norm) result.best = std::move(w);
  }
  return result;
}

struct ScanRow {
  int n = 0;
  double lhs = 0.0;           ///< (Σ|a_i|^q)^{1/q} of the witness, = n^{m/q}
  double bound = 0.0;         ///< ksz_bound(m, n)
  double witness_norm = 0.0;  ///< exact ‖T‖ of the witness
  double lhs_over_bound = 0.0;
  double lhs_over_norm = 0.0;
};

/// For each n, takes a KSZ witness and reports n^{m/q}/bound. The column
/// grows with n exactly when q < 2m/(m+1), which is why no smaller exponent
/// can work in the Bohnenblust–Hille inequality.
inline std::vector<ScanRow> exponent_optimality_scan(int m, double q, std::span<const int> n_list,
                                                     std::uint64_t seed = kDefaultSeed,
                                                     std::size_t trials_per_n = 1) {
  detail::require(std::isfinite(q) && q >= 1.0, "exponent_optimality_scan: need q >= 1");
  std::vector<ScanRow> rows;
  for (int n : n_list) {
    const auto search = ksz_search(m, n, trials_per_n, seed + static_cast<std::uint64_t>(n));
    const auto& w = search.first ? *search.first : *search.best;
    ScanRow row;
    row.n = n;
    row.lhs = power_sum_lhs(MultilinearForm<double>(w.signs), q);
    row.bound = w.bound;
    row.witness_norm = w.norm;
    row.lhs_over_bound = row.lhs / row.bound;
    row.lhs_over_norm = row.lhs / row.witness_norm;
    rows.push_back(row);
  }
  return rows;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size() && x.size() >= 2, "loglog_slope: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

inline double scan_slope(std::span<const ScanRow> rows) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(r.n);
    y.push_back(r.lhs_over_bound);
  }
  return loglog_slope(x, y);
}

// ---------------------------------------------------------------------------
// XOR games

/// m-player XOR game: question distribution π and predicate signs A on
/// {1..n}^m.
class XorGame {
 public:
  XorGame(RealTensor pi, RealTensor signs) : pi_(std::move(pi)), signs_(std::move(signs)) {
    detail::require(pi_.shape() == signs_.shape(), "XorGame: pi and signs must have the same shape");
    for (std::size_t k = 1; k < pi_.order(); ++k)
      detail::require(pi_.extent(k) == pi_.extent(0), "XorGame: every player needs the same question set");
    double total = 0.0;
    for (double v : pi_.data()) {
      detail::require(v >= 0.0, "XorGame: probabilities must be non-negative");
      total += v;
    }
    detail::require(std::abs(total - 1.0) <= 1e-12, "XorGame: probabilities must sum to 1");
    for (double s : signs_.data()) detail::require(s == 1.0 || s == -1.0, "XorGame: signs must be +1 or -1");
  }

  [[nodiscard]] int players() const { return static_cast<int>(pi_.order()); }
  [[nodiscard]] int questions() const { return static_cast<int>(pi_.extent(0)); }
  [[nodiscard]] const RealTensor& pi() const { return pi_; }
  [[nodiscard]] const RealTensor& signs() const { return signs_; }

  /// T(e_{i1},…,e_{im}) = a_i π(i).
  [[nodiscard]] MultilinearForm<double> form() const { return MultilinearForm<double>(hadamard_product(pi_, signs_)); }

 private:
  RealTensor pi_;
  RealTensor signs_;
};

/// Classical bias β(G) = max over sign strategies of |Σ π(i) a_i y₁(i₁)⋯y_m(i_m)|,
/// i.e. the exact ℓ_∞ norm of the game form.
inline double xor_bias_exact(const XorGame& g, std::uint64_t budget = kDefaultExactBudget) {
  return sup_norm_linf_exact(g.form(), budget);
}

struct MontanaroCheck {
  double beta = 0.0;
  double chain_lhs = 0.0;  ///< Σ|T(e_i)| = Σ π(i) = 1
  double chain_rhs = 0.0;  ///< B_{R,m} n^{(m−1)/2} β(G)
  bool ok = false;
};

/// Checks 1 = Σ π(i) ≤ B^mult_{R,m} n^{(m−1)/2} β(G) to relative 1e-10.
inline MontanaroCheck montanaro_check(const XorGame& g, std::uint64_t budget = kDefaultExactBudget) {
  MontanaroCheck c;
  c.beta = xor_bias_exact(g, budget);
  const auto form = g.form();
  c.chain_lhs = 0.0;
  for (double v : form.coefficients().data()) c.chain_lhs += std::abs(v);
  const int m = g.players();
  c.chain_rhs = bh_mult_upper(Field::real, m) * std::pow(static_cast<double>(g.questions()), 0.5 * (m - 1)) * c.beta;
  c.ok = c.chain_lhs <= c.chain_rhs * (1.0 + 1e-10);
  return c;
}

/// π with independent uniform weights renormalised to 1; uniform ±1 signs.
inline XorGame random_xor_game(int m, int n, CounterRng& rng) {
  const Shape shape(m, static_cast<std::size_t>(n));
  std::vector<double> w(detail::shape_size(shape));
  for (auto& x : w) x = rng.uniform_open_closed();
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return XorGame(RealTensor(shape, std::move(w)), random_signs(shape, rng));
}

inline XorGame chsh_game() {
  return XorGame(RealTensor::filled({2, 2}, 0.25), RealTensor({2, 2}, {1.0, 1.0, 1.0, -1.0}));
}

// ---------------------------------------------------------------------------
// Polarization

/// Random real polynomial: every monomial of degree m in n variables is kept
/// with probability 1/2, coefficient uniform on [−1,1]; never empty.
inline HomogeneousPolynomial<double> random_polynomial(int m, int n, CounterRng& rng) {
  HomogeneousPolynomial<double> p(m, n);
  const auto monomials = monomial_exponents(n, m);
  for (const auto& alpha : monomials)
    if (rng.uniform() < 0.5) p.add_term(alpha, rng.uniform(-1.0, 1.0));
  if (p.terms().empty()) p.add_term(monomials[rng.uniform_int(0, monomials.size() - 1)], rng.uniform(-1.0, 1.0));
  return p;
}

struct PolarizationReport {
  VerificationReport norm_check;    ///< ‖P‖_est / ((m^m/m!) ‖L‖_exact)
  double max_diagonal_error = 0.0;  ///< |L(x,…,x) − P(x)| / Σ_α|a_α x^α|
  double max_symmetry_defect = 0.0;
  double max_coefficient_error = 0.0;  ///< |L(e^α) − a_α/binom(m,α)|
  std::size_t points_per_polynomial = 100;
};

/// Random real polynomials (degree ≤ cfg.m, n ≤ cfg.n): polar identities and
/// ‖P‖ ≤ (m^m/m!)‖L‖ with ‖L‖ exact and ‖P‖ estimated from below. A trial
/// whose diagonal error exceeds 1e-10, or whose polar coefficients are off by
/// more than 1e-12 or not exactly symmetric, counts as a violation.
inline PolarizationReport verify_polarization(const TrialConfig& cfg, std::size_t points = 100) {
  std::vector<double> diag(cfg.trials), sym(cfg.trials), coef(cfg.trials);
  PolarizationReport out;
  out.points_per_polynomial = points;
  out.norm_check = detail::run_campaign("polarization", cfg, 1.0, false, [&](std::size_t t, CounterRng& rng) {
    const int m = static_cast<int>(rng.uniform_int(1, cfg.m));
    const int n = static_cast<int>(rng.uniform_int(1, cfg.n));
    const auto poly = random_polynomial(m, n, rng);
    const auto polar = polarize(poly);

    double worst = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
      std::vector<double> x(n);
      for (auto& xi : x) xi = rng.uniform(-1.0, 1.0);
      const std::vector<std::vector<double>> args(m, x);
      double scale = 0.0;
      for (const auto& [alpha, a] : poly.terms()) {
        double mono = std::abs(a);
        for (int i = 0; i < n; ++i) mono *= std::pow(std::abs(x[i]), alpha[i]);
        scale += mono;
      }
      const double err = std::abs(evaluate_form(polar, std::span<const std::vector<double>>(args)) - poly(x));
      worst = std::max(worst, detail::safe_quotient(err, scale));
    }
    diag[t] = worst;
    sym[t] = symmetry_defect(polar.coefficients());
    double cerr = 0.0;
    for (const auto& [alpha, a] : poly.terms())
      cerr = std::max(cerr, std::abs(polar.coefficients()(index_tuple(alpha)) - polar_coefficient(poly, alpha)));
    coef[t] = cerr;

    // A broken identity is reported as an unbounded ratio so that it shows
    // up as a violation of the trial.
    if (diag[t] > 1e-10 || sym[t] > 0.0 || coef[t] > 1e-12) {
      return detail::TrialOutcome{std::numeric_limits<double>::infinity()};
    }
    double polarization_constant = 1.0;
    for (int k = 1; k <= m; ++k) polarization_constant *= static_cast<double>(m) / k;
    const double poly_norm = polynomial_sup_estimate(poly, 32, mix64(cfg.seed + t));
    return detail::TrialOutcome{
        detail::safe_quotient(poly_norm, polarization_constant * sup_norm_linf_exact(polar, cfg.budget))};
  });
  out.max_diagonal_error = *std::max_element(diag.begin(), diag.end());
  out.max_symmetry_defect = *std::max_element(sym.begin(), sym.end());
  out.max_coefficient_error = *std::max_element(coef.begin(), coef.end());
  return out;
}

}  // namespace mixnorm
