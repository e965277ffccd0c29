#pragma once

// Exact smooth-number counts and the exact counts behind the three
// filter-condition lemmas, compared against their bounds with implied
// constant 1.

#include <cstdint>
#include <string_view>

#include "logforms/conditions.hpp"
#include "logforms/core.hpp"

namespace logforms {

/// Psi(x, y): integers m in [1, x] whose prime factors are all <= y.
std::uint64_t psi_count(std::uint64_t x, double y, const FactorTable& table);

/// Exact number of base tuples in the box satisfying 1_C.
std::uint64_t count_condition_1C(const Bounds& bounds, const FilterParameter& param,
                                 const FactorTable& table, const EnumerationOptions& options = {});

/// Exact number of base tuples satisfying 2_C, by enumeration.
std::uint64_t count_condition_2C(const Bounds& bounds, const FilterParameter& param,
                                 const FactorTable& table, const EnumerationOptions& options = {});

/// prod A_i - prod (A_i - Psi(A_i, C)).
std::uint64_t count_condition_2C_inclusion_exclusion(const Bounds& bounds, const FilterParameter& param,
                                                     const FactorTable& table);

/// Exact number of exponent tuples satisfying 3_C.
std::uint64_t count_condition_3C(const Bounds& bounds, const FilterParameter& param,
                                 const EnumerationOptions& options = {});

enum class Lemma { one = 1, two = 2, three = 3 };

std::string_view to_string(Lemma lemma);

/// Right-hand side of the lemma's bound with implied constant 1:
///   one:   prod A_i (ln C)^n / sqrt(C)
///   two:   prod A_i sum_i exp(-u_i / 2),  u_i = ln A_i / ln C
///   three: prod B_i sum_i (9 ln C)^n / B_i
double lemma_bound(Lemma lemma, const Bounds& bounds, const FilterParameter& param);

struct LemmaCheckReport {
  Lemma lemma = Lemma::one;
  std::uint64_t exact_count = 0;
  double bound_value = 0.0;
  double ratio = 0.0;  ///< exact_count / bound_value
  Bounds bounds;
  FilterParameter param;
};

/// Exact count and bound for one lemma. Lemma two requires min A_i >= C.
LemmaCheckReport lemma_check(Lemma lemma, const Bounds& bounds, const FilterParameter& param,
                             const FactorTable& table, const EnumerationOptions& options = {});

/// Psi(A, C) / (A exp(-u/2)) with u = ln A / ln C.
double de_bruijn_ratio(std::uint64_t A, const FilterParameter& param, const FactorTable& table);

}  // namespace logforms
