#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mixnorm/exponents.hpp"
#include "mixnorm/rng.hpp"

using namespace mixnorm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Exponent kInf = Exponent::infinity();

std::optional<WeightVector> solve(const ExponentTuple& target, const std::vector<ExponentTuple>& candidates) {
  return interpolation_weights(target, candidates);
}

}  // namespace

TEST_CASE("exponent tag") {
  CHECK(Exponent(2.0).reciprocal() == 0.5);
  CHECK(kInf.reciprocal() == 0.0);
  CHECK(std::isinf(kInf.value()));
  CHECK(exponent_from_reciprocal(0.0) == kInf);
  CHECK(exponent_from_reciprocal(0.25) == Exponent(4.0));
  CHECK(Exponent(3.0).divided_by(2.0) == Exponent(1.5));
  CHECK(kInf.divided_by(2.0) == kInf);
  CHECK(kInf.to_string() == "inf");
  CHECK(Exponent(0.5).to_string() == "0.5");
}

TEST_CASE("Hölder split check") {
  CHECK(holder_split_check({1, 1}, std::vector<ExponentTuple>{{2, 2}, {2, 2}}));
  CHECK(holder_split_check({4.0 / 3.0}, std::vector<ExponentTuple>{{2}, {4}}));
  CHECK_FALSE(holder_split_check({1, 2}, std::vector<ExponentTuple>{{1, 2}, {2, 1}}));
  CHECK(holder_split_check({2, kInf}, std::vector<ExponentTuple>{{2, kInf}, {kInf, kInf}}));
  CHECK(holder_split_check({3}, std::vector<ExponentTuple>{{3}}));
  CHECK_THROWS_AS(holder_split_check({1, 1}, std::vector<ExponentTuple>{{2, 2}, {2}}), DomainError);
}

TEST_CASE("interpolation weights: the two puzzle instances") {
  const auto two = solve({4.0 / 3.0, 4.0 / 3.0}, {{1, 2}, {2, 1}});
  REQUIRE(two);
  CHECK_THAT((*two)[0], WithinAbs(0.5, 1e-12));
  CHECK_THAT((*two)[1], WithinAbs(0.5, 1e-12));

  const auto three = solve({1.5, 1.5, 1.5}, {{1, 2, 2}, {2, 1, 2}, {2, 2, 1}});
  REQUIRE(three);
  for (std::size_t k = 0; k < 3; ++k) CHECK_THAT((*three)[k], WithinAbs(1.0 / 3.0, 1e-12));
}

TEST_CASE("interpolation weights: infeasible and invalid input") {
  CHECK_FALSE(solve({1, 1}, {{2, 2}, {2, 2}}));
  CHECK_FALSE(solve({1.2}, {{2}, {3}}));
  CHECK_THROWS_AS(solve({2, 2}, {{2, 2}, {2}}), DomainError);
  CHECK_THROWS_AS(solve({2, 2}, {}), DomainError);
  CHECK_THROWS_AS(solve({2, kInf}, {{2, 2}, {2, 2}}), DomainError);
  CHECK_THROWS_AS(solve({2, 2}, {{kInf, 2}, {2, 2}}), DomainError);
  CHECK_THROWS_AS(solve({0.5}, {{1}}), DomainError);
  std::vector<ExponentTuple> many(21, ExponentTuple{2});
  CHECK_THROWS_AS(solve({2}, many), DomainError);
}

TEST_CASE("interpolation weights reproduce the target reciprocals") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CounterRng rng(seed);
    const auto m = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
    std::vector<ExponentTuple> cands(n, ExponentTuple(m));
    for (auto& q : cands)
      for (auto& e : q) e = Exponent(1.0 / rng.uniform_open_closed());
    std::vector<double> theta(n);
    for (auto& t : theta) t = rng.uniform_open_closed();
    const double total = std::accumulate(theta.begin(), theta.end(), 0.0);
    ExponentTuple target(m);
    for (std::size_t j = 0; j < m; ++j) {
      double r = 0.0;
      for (std::size_t k = 0; k < n; ++k) r += theta[k] / total * cands[k][j].reciprocal();
      target[j] = Exponent(1.0 / r);
    }
    const auto w = solve(target, cands);
    REQUIRE(w);
    CHECK(interpolation_residual(target, cands, w->values()) <= 1e-9);
    CHECK_THAT(std::accumulate(w->values().begin(), w->values().end(), 0.0), WithinAbs(1.0, 1e-12));
    for (double t : w->values()) CHECK(t >= 0.0);
    // Candidates in general position with n ≤ m+1 pin θ down uniquely.
    if (n <= m + 1) {
      for (std::size_t k = 0; k < n; ++k) CHECK_THAT((*w)[k], WithinAbs(theta[k] / total, 1e-7));
    }
  }
}

TEST_CASE("interpolation weights minimise the sum of squares (1-D oracle)") {
  // m = 1, three candidates: the feasible set is a segment parametrised by θ₁.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CounterRng rng(seed + 500);
    double r[3];
    for (auto& x : r) x = rng.uniform_open_closed();
    const double lo = *std::min_element(r, r + 3), hi = *std::max_element(r, r + 3);
    const double t = rng.uniform(lo, hi);
    const auto w = solve({1.0 / t}, {{1.0 / r[0]}, {1.0 / r[1]}, {1.0 / r[2]}});
    REQUIRE(w);
    double best = INFINITY;
    constexpr int kGrid = 200000;
    for (int g = 0; g <= kGrid; ++g) {
      const double a = static_cast<double>(g) / kGrid;
      // θ₂ r₁ + θ₃ r₂ = t − a r₀, θ₂ + θ₃ = 1 − a
      const double det = r[1] - r[2];
      if (std::abs(det) < 1e-14) continue;
      const double b = ((t - a * r[0]) - (1 - a) * r[2]) / det;
      const double c = 1 - a - b;
      if (b < -1e-12 || c < -1e-12) continue;
      best = std::min(best, a * a + b * b + c * c);
    }
    const double got = std::inner_product(w->values().begin(), w->values().end(), w->values().begin(), 0.0);
    CHECK(got <= best + 1e-9);
    CHECK(got >= best - 1e-4);
  }
}

TEST_CASE("permuting candidates permutes the weights") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CounterRng rng(seed + 77);
    std::vector<ExponentTuple> cands(4, ExponentTuple(2));
    for (auto& q : cands)
      for (auto& e : q) e = Exponent(1.0 / rng.uniform_open_closed());
    ExponentTuple target(2);
    for (std::size_t j = 0; j < 2; ++j) {
      double r = 0.0;
      for (const auto& q : cands) r += 0.25 * q[j].reciprocal();
      target[j] = Exponent(1.0 / r);
    }
    const auto w = solve(target, cands);
    std::vector<std::size_t> perm{2, 0, 3, 1};
    std::vector<ExponentTuple> permuted;
    for (auto p : perm) permuted.push_back(cands[p]);
    const auto wp = solve(target, permuted);
    REQUIRE(w);
    REQUIRE(wp);
    for (std::size_t k = 0; k < 4; ++k) CHECK_THAT((*wp)[k], WithinAbs((*w)[perm[k]], 1e-9));
  }
}

TEST_CASE("weight vector invariants") {
  CHECK_NOTHROW(WeightVector({0.25, 0.75}));
  CHECK_THROWS_AS(WeightVector({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(WeightVector({-0.1, 1.1}), DomainError);
  CHECK_THROWS_AS(WeightVector({}), DomainError);
}

TEST_CASE("Blei exponents") {
  SECTION("q=2, s1=s2=1") {
    const auto e = blei_exponents(2, 1, 1);
    CHECK_THAT(e.w, WithinRel(4.0 / 3.0, 1e-15));
    CHECK_THAT(e.f12, WithinRel(0.5, 1e-15));
    CHECK_THAT(e.f21, WithinRel(0.5, 1e-15));
  }
  SECTION("s1 = s2 = s gives w = 2qs/(q+s) and equal f") {
    for (double s : {1.0, 1.5, 2.5})
      for (double q : {3.0, 4.0, 10.0}) {
        const auto e = blei_exponents(q, s, s);
        CHECK_THAT(e.w, WithinRel(2 * q * s / (q + s), 1e-14));
        CHECK_THAT(e.f12, WithinRel(e.f21, 1e-14));
      }
  }
  SECTION("q=2, s1=1, s2=4/3 against the rational expressions") {
    // q² = 4; q²(s1+s2) − 2q s1 s2 = 28/3 − 16/3 = 4; q² − s1 s2 = 8/3.
    const auto e = blei_exponents(2, 1, 4.0 / 3.0);
    CHECK_THAT(e.w, WithinRel(4.0 / (8.0 / 3.0), 1e-14));
    CHECK_THAT(e.f12, WithinRel((4.0 - 8.0 / 3.0) / 4.0, 1e-14));
    CHECK_THAT(e.f21, WithinRel((16.0 / 3.0 - 8.0 / 3.0) / 4.0, 1e-14));
  }
  SECTION("w lies in [min(s1,s2), q) on random draws") {
    CounterRng rng(42);
    for (int i = 0; i < 500; ++i) {
      const double s1 = rng.uniform(1, 5), s2 = rng.uniform(1, 5);
      const double q = std::max(s1, s2) + rng.uniform_open_closed() * 10;
      const auto e = blei_exponents(q, s1, s2);
      CHECK(e.w >= std::min(s1, s2) - 1e-12);
      CHECK(e.w < q);
      CHECK_THAT(e.f12 + e.f21, WithinAbs(1.0, 1e-12));
    }
  }
  SECTION("domain") {
    CHECK_THROWS_AS(blei_exponents(2, 2, 1), DomainError);
    CHECK_THROWS_AS(blei_exponents(3, 0.5, 1), DomainError);
  }
}

TEST_CASE("rho exponent") {
  CHECK_THAT(rho_exponent(2, 1, 1, 2), WithinRel(4.0 / 3.0, 1e-15));
  CHECK_THAT(rho_exponent(3, 1, 4.0 / 3.0, 2), WithinRel(12.0 / 7.0, 1e-15));
  CHECK_THAT(rho_exponent(4, 2, 1.7, 1.7), WithinRel(1.7, 1e-15));
  CHECK_THAT(rho_exponent(5, 5, 1.3, 2.9), WithinRel(1.3, 1e-15));
  CounterRng rng(3);
  for (int i = 0; i < 200; ++i) {
    const int m = static_cast<int>(rng.uniform_int(1, 8));
    const int k = static_cast<int>(rng.uniform_int(1, m));
    const double s = rng.uniform(1, 4), q = s + rng.uniform(0, 4);
    const double rho = rho_exponent(m, k, s, q);
    CHECK(rho >= s * (1 - 1e-14));
    CHECK(rho <= q * (1 + 1e-14));
  }
  CHECK_THROWS_AS(rho_exponent(2, 0, 1, 2), DomainError);
  CHECK_THROWS_AS(rho_exponent(2, 3, 1, 2), DomainError);
  CHECK_THROWS_AS(rho_exponent(2, 1, 3, 2), DomainError);
}

TEST_CASE("Hardy-Littlewood exponent") {
  CHECK_THAT(hl_exponent(2, 4), WithinRel(2.0, 1e-15));
  CHECK_THAT(hl_exponent(2, kInf), WithinRel(4.0 / 3.0, 1e-15));
  CHECK_THAT(hl_exponent(3, kInf), WithinRel(1.5, 1e-15));
  CHECK_THAT(hl_exponent(3, 1e12), WithinRel(1.5, 1e-9));
  CHECK_THROWS_AS(hl_exponent(2, 3.9), DomainError);
  CHECK_THROWS_AS(hl_exponent(1, 4), DomainError);
  for (int m = 2; m <= 6; ++m) {
    double prev = INFINITY;
    for (double p = 2.0 * m; p < 200; p *= 1.1) {
      const double e = hl_exponent(m, p);
      CHECK(e < prev);
      prev = e;
    }
  }
}
