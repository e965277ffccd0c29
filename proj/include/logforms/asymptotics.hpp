#pragma once

// Closed-form and block-sum estimates for |R|, with the constrained
// permutation counts (permanents of 0/1 matrices) in their denominators.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "logforms/core.hpp"

namespace logforms {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Bounds reindexed so A is nondecreasing (stable), together with the
/// permutation pi that sorts B (stable): B[pi(0)] <= B[pi(1)] <= ...
struct OrderedBounds {
  std::vector<std::int64_t> A_sorted;
  std::vector<std::int64_t> B;  ///< reindexed alongside A_sorted
  std::vector<std::size_t> original_index;
  Permutation pi;
  Permutation pi_inv;

  std::size_t n() const { return A_sorted.size(); }
  /// A_i for 1 <= i <= n; the sentinel for i = 0.
  std::int64_t A_at(std::size_t i, std::int64_t sentinel = 1) const;
  /// B_{pi(j)} for 1 <= j <= n; the sentinel for j = 0.
  std::int64_t B_ranked(std::size_t j, std::int64_t sentinel = 1) const;
  /// pi^{-1}(k) in 1-based terms: the rank of B_k among the B's.
  std::size_t rank_of(std::size_t k) const { return pi_inv(k - 1) + 1; }
};

OrderedBounds order_bounds(const Bounds& bounds);

/// Block coordinates (i_k, j_k), 1-based, with 1 <= i_k <= k and
/// 1 <= j_k <= pi^{-1}(k).
struct BlockIndex {
  std::vector<std::size_t> i;
  std::vector<std::size_t> j;

  bool valid_for(const OrderedBounds& ob) const;
};

/// Square 0/1 matrix, row-major.
class ZeroOneMatrix {
 public:
  explicit ZeroOneMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}
  static ZeroOneMatrix ones(std::size_t n);
  static ZeroOneMatrix identity(std::size_t n);
  static ZeroOneMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t size() const { return n_; }
  bool operator()(std::size_t r, std::size_t c) const { return cells_[r * n_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool v) { cells_[r * n_ + c] = v ? 1 : 0; }

 private:
  std::size_t n_;
  std::vector<std::uint8_t> cells_;
};

inline constexpr std::size_t kMaxRyserSize = 20;
inline constexpr std::size_t kMaxBruteForcePermanent = 10;

/// Ryser's inclusion-exclusion over column subsets in Gray-code order,
/// O(2^n n). Throws ConfigError for n > 20.
std::uint64_t permanent_ryser(const ZeroOneMatrix& m);

/// Sum over S_n of prod_l M[l][sigma(l)]. Throws ConfigError for n > 10.
std::uint64_t permanent_brute_force(const ZeroOneMatrix& m);

/// M[l][m] = 1 iff i_m <= l and j_m <= pi^{-1}(l) (1-based l, m).
ZeroOneMatrix constraint_matrix(const BlockIndex& bi, const OrderedBounds& ob);

/// |{sigma : i_{sigma(l)} <= l, j_{sigma(l)} <= pi^{-1}(l) for all l}|.
/// Brute force for n <= 7, Ryser above.
std::uint64_t constrained_perm_count(const BlockIndex& bi, const OrderedBounds& ob);

/// Lower endpoint of the first block in each direction: A_0 = B_{pi(0)}.
enum class Sentinel {
  one,   ///< A_0 = B_{pi(0)} = 1, first widths A_1 - 1
  zero,  ///< A_0 = B_{pi(0)} = 0, first widths A_1; same leading order
};

inline constexpr std::size_t kMaxPropositionSize = 10;
inline constexpr std::uint64_t kDefaultTermBudget = 200'000'000;

/// 2^n sum over block indices of
///   prod_k (A_{i_k} - A_{i_k - 1})(B_{pi(j_k)} - B_{pi(j_k - 1)})
/// divided by constrained_perm_count, skipping zero-width blocks.
Rational proposition_exact(const OrderedBounds& ob, Sentinel sentinel = Sentinel::one,
                           std::uint64_t term_budget = kDefaultTermBudget);
double proposition_value(const OrderedBounds& ob, Sentinel sentinel = Sentinel::one);
double proposition_value(const Bounds& bounds, Sentinel sentinel = Sentinel::one);

/// 2^n A^n B^n / n!.
Rational corollary1_exact(std::size_t n, std::int64_t A, std::int64_t B);
double corollary1_value(std::size_t n, std::int64_t A, std::int64_t B);

/// 2^n prod A_i B_i.
double corollary2_value(const Bounds& bounds);

struct Corollary3Bounds {
  double lower = 0.0;  ///< 2^n prod A_i B_i / n!
  double upper = 0.0;  ///< 2^n prod A_i B_i
};
Corollary3Bounds corollary3_bounds(const Bounds& bounds);

/// n = 2 only: 4 A_1 A_2 B_1 B_2 - 2 min(A)^2 min(B)^2.
double two_factor_value(const Bounds& bounds);

double to_double(const Rational& r);

}  // namespace logforms
