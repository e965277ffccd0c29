#pragma once

// The three filter conditions on base and exponent tuples, the default
// cutoff rule and the filtered tuple set E built from them.
//
// "log" means the natural logarithm everywhere in this module. The
// coefficient bound for exponent relations is floor(2 ln C).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "logforms/core.hpp"

namespace logforms {

/// The cutoff C together with its derived coefficient bound.
struct FilterParameter {
  double C = 2.0;
  std::int64_t coeff_bound = 1;

  /// Throws ConfigError unless C is finite and C >= 2.
  static FilterParameter from_C(double C);
};

/// C = min(B_1..B_n, ln A_1..ln A_n). Throws ConfigError when C < 2.
FilterParameter default_C(const Bounds& bounds);

/// Some prime p has total exponent e >= 2 in a_1...a_n with p^e >= C.
bool condition_1C(std::span<const std::int64_t> a, const FilterParameter& param,
                  const FactorTable& table);

/// Some a_i has every prime factor <= C (a_i = 1 qualifies).
bool condition_2C(std::span<const std::int64_t> a, const FilterParameter& param,
                  const FactorTable& table);

enum class RelationSearch {
  automatic,       ///< exhaustive up to kExhaustiveRelationLimit vectors, else meet-in-the-middle
  exhaustive,
  meet_in_middle,
};

inline constexpr std::uint64_t kExhaustiveRelationLimit = 10'000'000;
inline constexpr std::uint64_t kRelationTableBudget = 50'000'000;

/// A nonzero integer vector c with |c_i| <= coeff_bound and sum c_i b_i = 0,
/// or nullopt when none exists.
std::optional<std::vector<std::int64_t>> find_linear_relation(
    std::span<const std::int64_t> b, std::int64_t coeff_bound,
    RelationSearch strategy = RelationSearch::automatic);

/// The exponent tuple admits a nontrivial bounded integer relation.
bool condition_3C(std::span<const std::int64_t> b, const FilterParameter& param,
                  RelationSearch strategy = RelationSearch::automatic);

/// None of the three conditions holds.
bool in_E(const FormTuple& t, const FilterParameter& param, const FactorTable& table);

struct ECount {
  std::uint64_t count = 0;
  /// count / (2^n prod A_i B_i).
  double density = 0.0;
  std::uint64_t base_tuples = 0;      ///< base tuples avoiding 1_C and 2_C
  std::uint64_t exponent_tuples = 0;  ///< exponent tuples avoiding 3_C
};

/// |{t in box : in_E(t)}|. Membership splits into a condition on the
/// bases and one on the exponents, so the count is the product of the two
/// filtered factor counts.
ECount count_E(const Bounds& bounds, const FilterParameter& param, const FactorTable& table,
               const EnumerationOptions& options = {});

}  // namespace logforms
