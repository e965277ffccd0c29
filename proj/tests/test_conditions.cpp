#include <doctest.h>

#include <cmath>
#include <random>

#include "logforms/conditions.hpp"
#include "oracles.hpp"

using namespace logforms;

namespace {
const FactorTable& table() {
  static const FactorTable t(5000);
  return t;
}
std::vector<std::int64_t> v(std::initializer_list<std::int64_t> x) { return x; }
}  // namespace

TEST_CASE("default C") {
  auto p = default_C(Bounds::make({50, 60}, {4, 5}));
  CHECK(p.C == doctest::Approx(std::log(50.0)));
  CHECK(p.coeff_bound == 2);  // floor(2 ln ln 50) = floor(2.728)

  p = default_C(Bounds::make({8, 8}, {3, 3}));
  CHECK(p.C == doctest::Approx(2.0794415).epsilon(1e-6));
  CHECK(p.coeff_bound == 1);  // floor(2 ln 2.079) = floor(1.464)

  CHECK_THROWS_AS(default_C(Bounds::make({7, 100}, {9, 9})), ConfigError);
  CHECK_THROWS_AS(default_C(Bounds::make({100, 100}, {1, 9})), ConfigError);
  CHECK(default_C(Bounds::make({1'000'000, 1'000'000}, {3, 9})).C == 3.0);
}

TEST_CASE("filter parameter") {
  CHECK_THROWS_AS(FilterParameter::from_C(1.99), ConfigError);
  CHECK_THROWS_AS(FilterParameter::from_C(NAN), ConfigError);
  CHECK(FilterParameter::from_C(2.0).coeff_bound == 1);
  CHECK(FilterParameter::from_C(16.0).coeff_bound == 5);
  CHECK(FilterParameter::from_C(std::exp(3.5)).coeff_bound == 7);
}

TEST_CASE("condition 1_C examples") {
  CHECK(condition_1C(v({4}), FilterParameter::from_C(3), table()));
  CHECK_FALSE(condition_1C(v({2, 3}), FilterParameter::from_C(3), table()));
  CHECK_FALSE(condition_1C(v({2, 2}), FilterParameter::from_C(5), table()));
  CHECK(condition_1C(v({2, 2}), FilterParameter::from_C(4), table()));
  CHECK(condition_1C(v({6, 10, 15}), FilterParameter::from_C(9), table()));  // 3^2 = 9
  CHECK_FALSE(condition_1C(v({1, 1}), FilterParameter::from_C(2), table()));
}

TEST_CASE("condition 2_C examples") {
  CHECK(condition_2C(v({8, 7}), FilterParameter::from_C(3), table()));
  CHECK(condition_2C(v({1, 97}), FilterParameter::from_C(2), table()));
  CHECK_FALSE(condition_2C(v({7, 11}), FilterParameter::from_C(3), table()));
  CHECK(condition_2C(v({7, 11}), FilterParameter::from_C(7), table()));
}

TEST_CASE("condition 3_C examples") {
  const FilterParameter k7{3.0, 7};
  CHECK(condition_3C(v({1, 1}), FilterParameter{2.0, 1}));
  CHECK(condition_3C(v({0, 5}), FilterParameter{2.0, 1}));
  CHECK_FALSE(condition_3C(v({1, 9}), k7));
  CHECK(condition_3C(v({1, 7}), k7));
  CHECK(condition_3C(v({0}), k7));
  CHECK_FALSE(condition_3C(v({3}), k7));
}

TEST_CASE("relation witnesses are valid") {
  for (auto strategy : {RelationSearch::exhaustive, RelationSearch::meet_in_middle}) {
    const auto c = find_linear_relation(v({6, 10, 15}), 3, strategy);
    REQUIRE(c.has_value());
    std::int64_t s = 0;
    bool nonzero = false;
    for (std::size_t i = 0; i < 3; ++i) {
      s += (*c)[i] * std::vector<std::int64_t>{6, 10, 15}[i];
      nonzero = nonzero || (*c)[i] != 0;
      CHECK(std::abs((*c)[i]) <= 3);
    }
    CHECK(s == 0);
    CHECK(nonzero);
  }
}

TEST_CASE("property: relation search strategies agree with a naive scan") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const std::int64_t k = 1 + static_cast<std::int64_t>(rng() % 4);
    std::vector<std::int64_t> b(n);
    for (auto& x : b) x = std::uniform_int_distribution<std::int64_t>(-30, 30)(rng);
    const bool expected = oracle::has_relation(b, k);
    REQUIRE(find_linear_relation(b, k, RelationSearch::exhaustive).has_value() == expected);
    REQUIRE(find_linear_relation(b, k, RelationSearch::meet_in_middle).has_value() == expected);
  }
}

TEST_CASE("meet-in-the-middle handles large coefficient spaces") {
  // (2*9+1)^6 = 4.7e7 vectors, above the exhaustive threshold.
  const auto b = v({1009, 1013, 1019, 1021, 1031, 1033});
  const auto c = find_linear_relation(b, 9);
  REQUIRE(c.has_value());
  std::int64_t s = 0;
  for (std::size_t i = 0; i < b.size(); ++i) s += (*c)[i] * b[i];
  CHECK(s == 0);
  CHECK(find_linear_relation(v({1, 100, 10000, 1000000}), 9, RelationSearch::meet_in_middle) == std::nullopt);
}

TEST_CASE("in_E examples") {
  const auto box = Bounds::make({100, 100}, {9, 9});
  const auto p = FilterParameter::from_C(std::log(50.0));
  CHECK_FALSE(in_E(FormTuple::make({1, 77}, {2, 3}, box), p, table()));
  CHECK_FALSE(in_E(FormTuple::make({7, 11}, {0, 3}, box), p, table()));
  CHECK(in_E(FormTuple::make({7, 11}, {1, 9}, box), p, table()));
  CHECK_FALSE(in_E(FormTuple::make({7, 49}, {1, 9}, box), p, table()));  // 7^3 >= C
}

TEST_CASE("count_E examples") {
  const auto p = FilterParameter::from_C(2.5);
  CHECK(count_E(Bounds::make({1, 50}, {3, 3}), p, table()).count == 0);

  const auto box = Bounds::make({8}, {3});
  const auto e = count_E(box, default_C(box), table());
  CHECK(e.count == 24);  // bases {3,5,6,7} x exponents {+-1,+-2,+-3}
  CHECK(e.density == doctest::Approx(0.5));
}

TEST_CASE("count_E equals per-tuple enumeration of in_E") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    std::vector<std::int64_t> A(n), B(n);
    for (auto& x : A) x = std::uniform_int_distribution<std::int64_t>(1, n == 3 ? 9 : 25)(rng);
    for (auto& x : B) x = std::uniform_int_distribution<std::int64_t>(1, 5)(rng);
    const auto box = Bounds::make(A, B);
    const auto p = FilterParameter::from_C(std::uniform_real_distribution<double>(2.0, 6.0)(rng));
    std::uint64_t brute = 0;
    std::vector<std::int64_t> lo_b(n);
    for (std::size_t i = 0; i < n; ++i) lo_b[i] = -B[i];
    oracle::product(std::vector<std::int64_t>(n, 1), A, [&](const auto& a) {
      oracle::product(lo_b, B, [&](const auto& b) {
        const bool good = !oracle::cond1(a, p.C) &&
                          std::none_of(a.begin(), a.end(), [&](auto x) { return oracle::smooth(x, p.C); }) &&
                          !oracle::has_relation(b, p.coeff_bound);
        REQUIRE(good == in_E(FormTuple{a, b}, p, table()));
        brute += good ? 1 : 0;
      });
    });
    CHECK(count_E(box, p, table(), {1'000'000, 2}).count == brute);
    CHECK(count_E(box, p, table()).count <= box.tuple_space());
  }
}

TEST_CASE("property: monotonicity of the conditions in C") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 400; ++trial) {
    const std::vector<std::int64_t> a{std::uniform_int_distribution<std::int64_t>(1, 400)(rng),
                                      std::uniform_int_distribution<std::int64_t>(1, 400)(rng)};
    const double c1 = std::uniform_real_distribution<double>(2.0, 40.0)(rng);
    const double c2 = std::uniform_real_distribution<double>(2.0, 40.0)(rng);
    const auto lo = FilterParameter::from_C(std::min(c1, c2));
    const auto hi = FilterParameter::from_C(std::max(c1, c2));
    if (condition_1C(a, hi, table())) REQUIRE(condition_1C(a, lo, table()));
    if (condition_2C(a, lo, table())) REQUIRE(condition_2C(a, hi, table()));

    const std::vector<std::int64_t> b{std::uniform_int_distribution<std::int64_t>(-20, 20)(rng),
                                      std::uniform_int_distribution<std::int64_t>(-20, 20)(rng),
                                      std::uniform_int_distribution<std::int64_t>(-20, 20)(rng)};
    if (condition_3C(b, lo)) REQUIRE(condition_3C(b, hi));
    auto flipped = b;
    flipped[trial % 3] = -flipped[trial % 3];
    std::swap(flipped[0], flipped[2]);
    REQUIRE(condition_3C(b, lo) == condition_3C(flipped, lo));
  }
}

TEST_CASE("property: in_E invariant under joint permutation and sign flips") {
  std::mt19937_64 rng(29);
  const auto box = Bounds::uniform(3, 60, 12);
  const auto p = FilterParameter::from_C(3.5);
  const auto perms = all_permutations(3);
  for (int trial = 0; trial < 400; ++trial) {
    FormTuple t{{}, {}};
    for (int i = 0; i < 3; ++i) {
      t.a.push_back(std::uniform_int_distribution<std::int64_t>(1, 60)(rng));
      t.b.push_back(std::uniform_int_distribution<std::int64_t>(-12, 12)(rng));
    }
    auto u = permute(t, perms[trial % 6]);
    for (auto& b : u.b) {
      if (rng() % 2) b = -b;
    }
    REQUIRE(in_E(t, p, table()) == in_E(u, p, table()));
  }
}
