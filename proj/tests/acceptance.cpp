// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mixnorm/mixnorm.hpp"

using namespace mixnorm;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

unsigned worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

TrialConfig config(std::size_t trials, int m, int n, Field field = Field::real) {
  TrialConfig cfg;
  cfg.trials = trials;
  cfg.m = m;
  cfg.n = n;
  cfg.field = field;
  cfg.threads = worker_count();
  return cfg;
}

bool clean(const VerificationReport& r) { return r.violations.empty() && r.flagged.empty(); }

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void khinchine_p0_root(Check& c) {
  const double p0 = khinchine_p0();
  const double lhs = std::tgamma((p0 + 1) / 2);
  const double rhs = std::sqrt(std::numbers::pi) / 2;
  c.require(p0 >= 1.8473 && p0 <= 1.8475, "p0 in [1.8473, 1.8475]");
  c.require(std::abs(lhs - rhs) <= 1e-9, "gamma equation within 1e-9");
  c.detail << " p0=" << g(p0) << " residual=" << g(std::abs(lhs - rhs));
}

void bh_cross_path(Check& c) {
  double worst = 0.0;
  for (int m = 1; m <= 50; ++m) {
    const double best = bh_mult_upper(Field::complex, m);
    const double chain = m == 1 ? 1.0 : bh_mult_upper(Field::complex, m, BhStrategy::recursion(m - 1));
    worst = std::max(worst, std::abs(best - chain) / chain);
  }
  c.require(worst <= 1e-10, "relative error <= 1e-10");
  c.detail << " max_rel_err=" << g(worst);
}

void growth_exponents(Check& c) {
  const double cs = bh_growth_fit(Field::complex, 256, 16384);
  const double rs = bh_growth_fit(Field::real, 256, 16384);
  c.require(std::abs(cs - 0.211392) <= 0.01, "complex slope");
  c.require(std::abs(rs - 0.36482) <= 0.01, "real slope");
  c.detail << " complex=" << g(cs) << " real=" << g(rs);
}

void littlewood_suite(Check& c) {
  const auto r = littlewood_campaign(config(10000, 2, 6));
  c.require(r.violations.empty(), "no violations");
  c.require(r.max_statistic <= std::numbers::sqrt2 + 1e-9, "max ratio <= sqrt2 + 1e-9");
  const MultilinearForm<double> witness(RealTensor({2, 2}, {1, 1, 1, -1}));
  const double w = littlewood_ratio(witness);
  c.require(std::abs(w - std::numbers::sqrt2) <= 1e-12, "witness attains sqrt2");
  c.detail << " max_ratio=" << g(r.max_statistic) << " witness=" << g(w);
}

void bh_suite(Check& c) {
  auto cfg = config(1000, 3, 3);
  const auto r = bh_campaign(cfg);
  const double bound = bh_mult_upper(Field::real, 3);
  c.require(r.violations.empty(), "no violations");
  c.require(r.max_statistic <= bound + 1e-9, "max ratio <= B_R,3 + 1e-9");
  c.detail << " max_ratio=" << g(r.max_statistic) << " bound=" << g(bound);
}

void holder_suites(Check& c) {
  for (auto f : {Field::real, Field::complex}) {
    const auto mixed = verify_mixed_holder(config(10000, 4, 5, f));
    const auto interp = verify_interpolative_holder(config(10000, 4, 5, f));
    c.require(clean(mixed), "mixed Hölder");
    c.require(clean(interp), "interpolative Hölder");
    c.detail << " " << to_string(f) << ":mixed=" << g(mixed.max_ratio) << ",interp=" << g(interp.max_ratio);
  }
}

void minkowski_blei_rho(Check& c) {
  const auto mk = verify_minkowski(config(10000, 3, 5));
  const auto bl = verify_blei_random(config(1000, 2, 6));
  const auto rho = verify_corollary_rho(config(1000, 3, 4), 2, 1.2, 3.0);
  c.require(clean(mk), "Minkowski");
  c.require(clean(bl), "Blei");
  c.require(clean(rho), "corollary rho");
  c.detail << " minkowski=" << g(mk.max_ratio) << " blei=" << g(bl.max_ratio) << " rho=" << g(rho.max_ratio);
}

void interpolation_puzzles(Check& c) {
  auto tuple = [](std::initializer_list<double> v) {
    ExponentTuple q;
    for (double x : v) q.emplace_back(x);
    return q;
  };
  const std::vector<ExponentTuple> two{tuple({1, 2}), tuple({2, 1})};
  const auto t2 = interpolation_weights(tuple({4.0 / 3.0, 4.0 / 3.0}), two);
  c.require(t2.has_value(), "two-candidate instance feasible");
  if (t2)
    for (std::size_t k = 0; k < 2; ++k) c.require(std::abs((*t2)[k] - 0.5) <= 1e-12, "theta = 1/2");

  const std::vector<ExponentTuple> three{tuple({1, 2, 2}), tuple({2, 1, 2}), tuple({2, 2, 1})};
  const auto t3 = interpolation_weights(tuple({1.5, 1.5, 1.5}), three);
  c.require(t3.has_value(), "three-candidate instance feasible");
  if (t3)
    for (std::size_t k = 0; k < 3; ++k) c.require(std::abs((*t3)[k] - 1.0 / 3.0) <= 1e-12, "theta = 1/3");

  const std::vector<ExponentTuple> far{tuple({2, 2}), tuple({2, 2})};
  c.require(!interpolation_weights(tuple({1, 1}), far).has_value(), "infeasible case");
}

void xor_games(Check& c) {
  const auto chsh = chsh_game();
  c.require(xor_bias_exact(chsh) == 0.5, "CHSH bias 1/2");
  const auto chain = montanaro_check(chsh);
  c.require(chain.ok, "CHSH chain holds");
  c.require(std::abs(chain.chain_lhs - 1.0) <= 1e-12 && std::abs(chain.chain_rhs - 1.0) <= 1e-12, "CHSH chain tight");
  int mismatches = 0, chain_failures = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    auto rng = CounterRng::stream(kDefaultSeed, t);
    const int m = static_cast<int>(rng.uniform_int(1, 3));
    const int n = static_cast<int>(rng.uniform_int(1, 4));
    const auto game = random_xor_game(m, n, rng);
    const double direct = sup_norm_linf_exact(MultilinearForm<double>(hadamard_product(game.pi(), game.signs())));
    if (xor_bias_exact(game) != direct) ++mismatches;
    if (!montanaro_check(game).ok) ++chain_failures;
  }
  c.require(mismatches == 0, "bias equals exact norm bit-for-bit");
  c.require(chain_failures == 0, "chain on random games");
  c.detail << " mismatches=" << mismatches << " chain_failures=" << chain_failures;
}

void ksz(Check& c) {
  for (int n = 4; n <= 10; ++n) {
    const auto r = ksz_search(2, n, 1000, kDefaultSeed + static_cast<std::uint64_t>(n));
    c.require(r.acceptance_rate() == 1.0, "acceptance rate 1 at n=" + std::to_string(n));
    c.require(r.max_norm <= ksz_bound(2, n), "max norm below bound at n=" + std::to_string(n));
    c.require(r.first && r.first->accepted() && r.first->norm <= r.first->bound, "witness below bound");
  }
  const std::vector<int> ns{4, 5, 6, 7, 8, 9, 10};
  const double flat = scan_slope(exponent_optimality_scan(2, 4.0 / 3.0, ns));
  const double steep = scan_slope(exponent_optimality_scan(2, 1.2, ns));
  c.require(std::abs(flat) <= 0.02, "flat slope at q=4/3");
  c.require(steep >= 0.12, "positive slope at q=1.2");
  c.detail << " slope(4/3)=" << g(flat) << " slope(1.2)=" << g(steep);
}

void polarization(Check& c) {
  const auto r = verify_polarization(config(50, 4, 4));
  c.require(r.max_diagonal_error <= 1e-10, "diagonal restriction");
  c.require(r.norm_check.violations.empty(), "norm inequality");
  bool exact = true;
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n)
      for (const auto& alpha : monomial_exponents(n, m)) {
        HomogeneousPolynomial<double> p(m, n);
        p.add_term(alpha, 1.0);
        exact = exact && polarize(p).coefficients()(index_tuple(alpha)) == polar_coefficient(p, alpha);
      }
  c.require(exact, "monomial coefficient identity");
  c.detail << " diag_err=" << g(r.max_diagonal_error) << " coef_err=" << g(r.max_coefficient_error)
           << " max_ratio=" << g(r.norm_check.max_ratio);
}

void hardy_littlewood(Check& c) {
  const auto r = hl_campaign(config(1000, 2, 6), 4.0, 50);
  c.require(r.violations.empty() && r.flagged.empty(), "flagged rate 0");
  const MultilinearForm<double> id(RealTensor({2, 2}, {1, 0, 0, 1}));
  // Equality case: the exact ratio is 1, the computed one may sit an ulp above.
  const double diag = hl_ratio(id, 4.0);
  c.require(diag <= 1.0 + 1e-12, "diagonal example ratio <= 1");
  c.detail << " max_ratio=" << g(r.max_ratio) << " diagonal=" << g(diag);
}

void bohr(Check& c) {
  for (long long n : {10LL, 1000LL, 1000000LL}) {
    const auto b = bohr_radius_bounds(n);
    c.require(b.lower < b.upper, "lower < upper at n=" + std::to_string(n));
    if (!b.upper_clamped) {
      const double nd = static_cast<double>(n);
      c.require(std::abs(b.upper / std::sqrt(std::log(nd) / nd) - 2.0) <= 1e-12, "upper scale 2");
    }
  }
  c.require(bohr_radius_one() == 1.0 / 3.0, "K1 = 1/3");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"khinchine p0 root", khinchine_p0_root},
      {"BH best vs recursion chain, m <= 50", bh_cross_path},
      {"BH growth exponents", growth_exponents},
      {"Littlewood suite and witness", littlewood_suite},
      {"BH suite, m = 3", bh_suite},
      {"mixed and interpolative Hölder", holder_suites},
      {"Minkowski, Blei, corollary rho", minkowski_blei_rho},
      {"interpolation puzzles", interpolation_puzzles},
      {"XOR games", xor_games},
      {"KSZ search and exponent scan", ksz},
      {"polarization", polarization},
      {"Hardy-Littlewood campaign", hardy_littlewood},
      {"Bohr brackets", bohr},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << " [exception: " << e.what() << "]";
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!c.ok) ++failures;
    std::printf("%s %2zu %s (%.1f ms)%s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), ms,
                c.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
