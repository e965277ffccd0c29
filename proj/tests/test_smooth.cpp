#include <doctest.h>

#include <cmath>
#include <random>

#include "logforms/smooth.hpp"
#include "oracles.hpp"

using namespace logforms;

namespace {
const FactorTable& table() {
  static const FactorTable t(20000);
  return t;
}
}  // namespace

TEST_CASE("psi examples") {
  CHECK(psi_count(10, 2, table()) == 4);
  CHECK(psi_count(100, 5, table()) == 34);
  CHECK(psi_count(1000, 1000, table()) == 1000);
  CHECK(psi_count(1, 1, table()) == 1);
  CHECK(psi_count(500, 1, table()) == 1);
  CHECK_THROWS_AS(psi_count(20001, 3, table()), RangeError);
}

TEST_CASE("property: psi matches trial division and is monotone") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const auto x = std::uniform_int_distribution<std::int64_t>(1, 3000)(rng);
    const auto y = std::uniform_real_distribution<double>(1.0, 60.0)(rng);
    const auto psi = psi_count(static_cast<std::uint64_t>(x), y, table());
    REQUIRE(psi == oracle::psi(x, y));
    REQUIRE(psi <= static_cast<std::uint64_t>(x));
    REQUIRE(psi_count(static_cast<std::uint64_t>(x) + 7, y, table()) >= psi);
    REQUIRE(psi_count(static_cast<std::uint64_t>(x), y + 5, table()) >= psi);
  }
}

TEST_CASE("count 1_C examples") {
  CHECK(count_condition_1C(Bounds::make({3}, {1}), FilterParameter::from_C(5), table()) == 0);
  CHECK(count_condition_1C(Bounds::make({4}, {1}), FilterParameter::from_C(4), table()) == 1);
  CHECK(count_condition_1C(Bounds::make({4, 4}, {1, 1}), FilterParameter::from_C(4), table()) == 9);
}

TEST_CASE("count 1_C matches trial-division enumeration") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    std::vector<std::int64_t> A(n);
    for (auto& x : A) x = std::uniform_int_distribution<std::int64_t>(1, n == 3 ? 15 : 60)(rng);
    const double C = std::uniform_real_distribution<double>(2.0, 30.0)(rng);
    std::uint64_t brute = 0;
    oracle::product(std::vector<std::int64_t>(n, 1), A, [&](const auto& a) { brute += oracle::cond1(a, C) ? 1 : 0; });
    CHECK(count_condition_1C(Bounds::make(A, std::vector<std::int64_t>(n, 1)), FilterParameter::from_C(C), table()) ==
          brute);
  }
}

TEST_CASE("count 2_C examples") {
  CHECK(count_condition_2C(Bounds::make({10}, {1}), FilterParameter::from_C(2), table()) == 4);
  CHECK(count_condition_2C(Bounds::make({10}, {1}), FilterParameter::from_C(10), table()) == 10);
  CHECK(count_condition_2C(Bounds::make({10, 10}, {1, 1}), FilterParameter::from_C(2), table()) == 64);
}

TEST_CASE("count 2_C: direct enumeration equals inclusion-exclusion") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    std::vector<std::int64_t> A(n);
    for (auto& x : A) x = std::uniform_int_distribution<std::int64_t>(1, n == 3 ? 40 : 400)(rng);
    const auto box = Bounds::make(A, std::vector<std::int64_t>(n, 1));
    const auto p = FilterParameter::from_C(std::uniform_real_distribution<double>(2.0, 50.0)(rng));
    CHECK(count_condition_2C(box, p, table()) == count_condition_2C_inclusion_exclusion(box, p, table()));
  }
}

TEST_CASE("count 3_C examples") {
  CHECK(count_condition_3C(Bounds::make({1}, {5}), FilterParameter{2.0, 1}) == 1);
  CHECK(count_condition_3C(Bounds::make({1, 1}, {2, 2}), FilterParameter{2.0, 1}) == 17);
  CHECK(count_condition_3C(Bounds::make({1, 1}, {1, 9}), FilterParameter{3.0, 7}) == 49);
}

TEST_CASE("lemma bounds") {
  CHECK(lemma_bound(Lemma::one, Bounds::make({100}, {1}), FilterParameter::from_C(16)) ==
        doctest::Approx(25.0 * std::log(16.0)));
  CHECK(lemma_bound(Lemma::three, Bounds::make({1}, {10}), FilterParameter::from_C(std::exp(1.0))) ==
        doctest::Approx(9.0));
  // u = ln 10^4 / ln 100 = 2
  CHECK(lemma_bound(Lemma::two, Bounds::make({10000}, {1}), FilterParameter::from_C(100)) ==
        doctest::Approx(10000.0 * std::exp(-1.0)));
  CHECK(lemma_bound(Lemma::three, Bounds::make({1, 1}, {10, 20}), FilterParameter::from_C(4)) ==
        doctest::Approx(200.0 * std::pow(9.0 * std::log(4.0), 2) * (0.1 + 0.05)));
}

TEST_CASE("lemma checks") {
  const auto box = Bounds::make({300, 400}, {20, 30});
  const auto p = FilterParameter::from_C(5);
  for (auto lemma : {Lemma::one, Lemma::two, Lemma::three}) {
    const auto r = lemma_check(lemma, box, p, table());
    CHECK(r.bound_value > 0);
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio > 0);
    CHECK(r.ratio == doctest::Approx(static_cast<double>(r.exact_count) / r.bound_value));
  }
  for (double C : {2.0, 3.0, 10.0, 50.0}) {
    const auto r = lemma_check(Lemma::three, Bounds::make({1}, {40}), FilterParameter::from_C(C), table());
    CHECK(r.exact_count == 1);
    CHECK(r.ratio <= 1.0);
  }
  CHECK_THROWS_AS(lemma_check(Lemma::two, Bounds::make({4}, {1}), p, table()), ConfigError);
  CHECK_THROWS_AS(count_condition_1C(box, p, table(), {1000, 1}), ResourceError);
}

TEST_CASE("de Bruijn ratio stays bounded on a small grid") {
  double worst = 0;
  for (std::uint64_t A : {1000u, 5000u, 20000u}) {
    for (double C : {2.0, 4.0, 8.0, 16.0}) {
      const double r = de_bruijn_ratio(A, FilterParameter::from_C(C), table());
      CHECK(std::isfinite(r));
      CHECK(r > 0.0);
      worst = std::max(worst, r);
    }
  }
  MESSAGE("largest Psi(A,C) / (A e^{-u/2}) on the grid: " << worst);
}
