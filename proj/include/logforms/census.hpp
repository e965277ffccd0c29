#pragma once

// Brute-force ground truth: exact |R|, exhaustive checking of unique
// representation on E, permissibility measurement and convergence runs.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logforms/asymptotics.hpp"
#include "logforms/conditions.hpp"
#include "logforms/core.hpp"

namespace logforms {

enum class Dedup {
  hash_set,     ///< unordered set of canonical encodings
  sort_unique,  ///< collect every encoding, sort, count runs
};

struct CensusOptions : EnumerationOptions {
  Dedup dedup = Dedup::hash_set;
  /// Store only values > 1 and use |R| = 2 |{r in R : r > 1}| + 1.
  bool exploit_inversion = false;
};

/// Number of distinct rationals a_1^b_1 ... a_n^b_n over the box.
/// Throws ResourceError when the tuple space exceeds options.budget.
std::uint64_t enumerate_R(const Bounds& bounds, const FactorTable& table, const CensusOptions& options = {});

/// Two members of E with the same value that no possible permutation relates.
struct OrbitViolation {
  CanonicalRational value;
  FormTuple first;
  FormTuple second;
};

struct TheoremCheck {
  FilterParameter param;
  std::uint64_t e_count = 0;
  std::uint64_t distinct_values = 0;
  /// Values with more than one representation in E (all permutation-related
  /// unless listed in violations).
  std::uint64_t shared_values = 0;
  std::vector<OrbitViolation> violations;
};

/// Builds E, groups its members by value and checks that every pair in a
/// group is related by a possible permutation. Uses default_C unless an
/// override is given.
TheoremCheck verify_theorem(const Bounds& bounds, const FactorTable& table,
                            std::optional<FilterParameter> param = std::nullopt,
                            const EnumerationOptions& options = {});

struct PermissibilityOptions {
  std::uint64_t budget = 10'000'000;  ///< exhaustive up to this many tuples
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0x5eed;
};

struct PermissibilityResult {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  double fraction = 0.0;
  bool exhaustive = true;

  Rational exact() const { return Rational(BigInt(hits), BigInt(total)); }
};

/// Fraction of box tuples t with is_possible(sigma, t, bounds).
PermissibilityResult permissibility_fraction(const Permutation& sigma, const Bounds& bounds,
                                             const PermissibilityOptions& options = {});

/// prod_i min(A_sigma(i), A_i) (2 min(B_sigma(i), B_i) + 1) / prod_i A_i (2 B_i + 1).
Rational permissibility_closed_form(const Permutation& sigma, const Bounds& bounds);

enum class Formula { proposition, corollary1, corollary2 };
std::string_view to_string(Formula f);

struct CensusReport {
  Bounds bounds;
  std::uint64_t tuple_space = 0;
  std::uint64_t exact_R = 0;
  Formula formula = Formula::proposition;
  double formula_value = 0.0;
  double ratio = 0.0;  ///< exact_R / formula_value; NaN when the formula is 0
  std::optional<FilterParameter> param;  ///< default C, when it is >= 2
  std::optional<std::uint64_t> e_count;
  std::chrono::nanoseconds elapsed{0};
};

CensusReport census(const Bounds& bounds, const FactorTable& table, Formula formula = Formula::proposition,
                    const CensusOptions& options = {});

enum class Shape { equal, separated, custom };
std::string_view to_string(Shape s);

/// equal: A_i = B_i = s. separated: A_i = B_i = s^i (i = 1..n).
/// custom: base bounds scaled by s.
Bounds bounds_for_scale(Shape shape, std::size_t n, std::int64_t scale, const Bounds* base = nullptr);

struct ConvergenceRun {
  std::vector<std::int64_t> scales;
  std::vector<CensusReport> reports;
  bool truncated = false;
  std::string truncation_reason;
};

/// One census per scale: corollary1_value for equal, corollary2_value for separated,
/// the block sum for custom. Stops at the first scale that exceeds the
/// budget and marks the run truncated.
ConvergenceRun convergence_run(std::span<const std::int64_t> scales, Shape shape, std::size_t n,
                               const FactorTable& table, const CensusOptions& options = {},
                               const Bounds* base = nullptr);

}  // namespace logforms
