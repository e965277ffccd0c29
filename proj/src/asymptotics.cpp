#include "logforms/asymptotics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

namespace logforms {

std::int64_t OrderedBounds::A_at(std::size_t i, std::int64_t sentinel) const {
  return i == 0 ? sentinel : A_sorted[i - 1];
}

std::int64_t OrderedBounds::B_ranked(std::size_t j, std::int64_t sentinel) const {
  return j == 0 ? sentinel : B[pi(j - 1)];
}

OrderedBounds order_bounds(const Bounds& bounds) {
  const std::size_t n = bounds.n();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return bounds.A[x] < bounds.A[y]; });

  OrderedBounds ob;
  ob.original_index = order;
  for (auto k : order) {
    ob.A_sorted.push_back(bounds.A[k]);
    ob.B.push_back(bounds.B[k]);
  }
  std::vector<std::size_t> by_b(n);
  std::iota(by_b.begin(), by_b.end(), std::size_t{0});
  std::stable_sort(by_b.begin(), by_b.end(), [&](std::size_t x, std::size_t y) { return ob.B[x] < ob.B[y]; });
  ob.pi = Permutation(std::move(by_b));
  ob.pi_inv = ob.pi.inverse();
  return ob;
}

bool BlockIndex::valid_for(const OrderedBounds& ob) const {
  if (i.size() != ob.n() || j.size() != ob.n()) return false;
  for (std::size_t k = 1; k <= ob.n(); ++k) {
    if (i[k - 1] < 1 || i[k - 1] > k) return false;
    if (j[k - 1] < 1 || j[k - 1] > ob.rank_of(k)) return false;
  }
  return true;
}

// ----------------------------------------------------------- permanents

ZeroOneMatrix ZeroOneMatrix::ones(std::size_t n) {
  ZeroOneMatrix m(n);
  std::fill(m.cells_.begin(), m.cells_.end(), std::uint8_t{1});
  return m;
}

ZeroOneMatrix ZeroOneMatrix::identity(std::size_t n) {
  ZeroOneMatrix m(n);
  for (std::size_t k = 0; k < n; ++k) m.set(k, k, true);
  return m;
}

ZeroOneMatrix ZeroOneMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  ZeroOneMatrix m(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.size()) throw ConfigError("matrix rows must be square");
    for (std::size_t c = 0; c < rows.size(); ++c) m.set(r, c, rows[r][c] != 0);
  }
  return m;
}

std::uint64_t permanent_ryser(const ZeroOneMatrix& m) {
  const std::size_t n = m.size();
  if (n > kMaxRyserSize) throw ConfigError("permanent_ryser supports n <= 20");
  if (n == 0) return 1;
  // perm = (-1)^n sum_S (-1)^{|S|} prod_rows sum_{c in S} M[r][c]
  std::vector<std::int64_t> row_sums(n, 0);
  __int128 total = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const auto col = static_cast<std::size_t>(std::countr_zero(k));
    const std::uint64_t bit = std::uint64_t{1} << col;
    gray ^= bit;
    const std::int64_t delta = (gray & bit) ? 1 : -1;
    __int128 prod = 1;
    for (std::size_t r = 0; r < n; ++r) {
      if (m(r, col)) row_sums[r] += delta;
      prod *= row_sums[r];
    }
    if (std::popcount(gray) % 2 == 1) {
      total -= prod;
    } else {
      total += prod;
    }
  }
  if (n % 2 == 1) total = -total;
  return static_cast<std::uint64_t>(total);
}

std::uint64_t permanent_brute_force(const ZeroOneMatrix& m) {
  const std::size_t n = m.size();
  if (n > kMaxBruteForcePermanent) throw ConfigError("brute-force permanent supports n <= 10");
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (std::size_t l = 0; l < n && ok; ++l) ok = m(l, sigma[l]);
    if (ok) ++count;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return count;
}

ZeroOneMatrix constraint_matrix(const BlockIndex& bi, const OrderedBounds& ob) {
  if (!bi.valid_for(ob)) throw ConfigError("block index out of range");
  const std::size_t n = ob.n();
  ZeroOneMatrix m(n);
  for (std::size_t l = 1; l <= n; ++l) {
    for (std::size_t c = 1; c <= n; ++c) {
      m.set(l - 1, c - 1, bi.i[c - 1] <= l && bi.j[c - 1] <= ob.rank_of(l));
    }
  }
  return m;
}

std::uint64_t constrained_perm_count(const BlockIndex& bi, const OrderedBounds& ob) {
  const auto m = constraint_matrix(bi, ob);
  return ob.n() <= 7 ? permanent_brute_force(m) : permanent_ryser(m);
}

// ---------------------------------------------------------- proposition

namespace {

struct PropositionWalk {
  const OrderedBounds& ob;
  std::int64_t sentinel;
  std::uint64_t term_budget;
  BlockIndex bi;
  std::vector<BigInt> partial;  // partial[k] = product of widths of blocks 1..k
  std::map<std::uint64_t, BigInt> by_count;
  std::uint64_t terms = 0;

  void descend(std::size_t k) {
    const std::size_t n = ob.n();
    if (k > n) {
      if (++terms > term_budget) throw ResourceError("proposition sum exceeds its term budget");
      by_count[constrained_perm_count(bi, ob)] += partial[n];
      return;
    }
    for (std::size_t i = 1; i <= k; ++i) {
      const std::int64_t wa = ob.A_at(i, sentinel) - ob.A_at(i - 1, sentinel);
      if (wa == 0) continue;
      for (std::size_t j = 1; j <= ob.rank_of(k); ++j) {
        const std::int64_t wb = ob.B_ranked(j, sentinel) - ob.B_ranked(j - 1, sentinel);
        if (wb == 0) continue;
        bi.i[k - 1] = i;
        bi.j[k - 1] = j;
        partial[k] = partial[k - 1] * wa * wb;
        descend(k + 1);
      }
    }
  }
};

}  // namespace

Rational proposition_exact(const OrderedBounds& ob, Sentinel sentinel, std::uint64_t term_budget) {
  const std::size_t n = ob.n();
  if (n < 1 || n > kMaxPropositionSize) throw ConfigError("proposition sum supports 1 <= n <= 10");
  PropositionWalk walk{ob, sentinel == Sentinel::one ? 1 : 0, term_budget,
                       BlockIndex{std::vector<std::size_t>(n, 1), std::vector<std::size_t>(n, 1)},
                       std::vector<BigInt>(n + 1, BigInt(1)), {}, 0};
  walk.descend(1);
  Rational sum = 0;
  for (const auto& [count, numer] : walk.by_count) sum += Rational(numer, BigInt(count));
  return sum * Rational(BigInt(1) << n);
}

double proposition_value(const OrderedBounds& ob, Sentinel sentinel) {
  return to_double(proposition_exact(ob, sentinel));
}

double proposition_value(const Bounds& bounds, Sentinel sentinel) {
  return proposition_value(order_bounds(bounds), sentinel);
}

// ----------------------------------------------------------- corollaries

namespace {

BigInt factorial(std::size_t n) {
  BigInt f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

Rational corollary1_exact(std::size_t n, std::int64_t A, std::int64_t B) {
  BigInt num = BigInt(1) << n;
  for (std::size_t k = 0; k < n; ++k) num *= BigInt(A) * B;
  return Rational(num, factorial(n));
}

double corollary1_value(std::size_t n, std::int64_t A, std::int64_t B) {
  return to_double(corollary1_exact(n, A, B));
}

double corollary2_value(const Bounds& bounds) {
  double v = std::ldexp(1.0, static_cast<int>(bounds.n()));
  for (std::size_t i = 0; i < bounds.n(); ++i) {
    v *= static_cast<double>(bounds.A[i]) * static_cast<double>(bounds.B[i]);
  }
  return v;
}

Corollary3Bounds corollary3_bounds(const Bounds& bounds) {
  const double upper = corollary2_value(bounds);
  return {upper / static_cast<double>(factorial(bounds.n())), upper};
}

double two_factor_value(const Bounds& bounds) {
  if (bounds.n() != 2) throw ConfigError("two-factor closed form needs n = 2");
  const double ma = static_cast<double>(bounds.min_A());
  const double mb = static_cast<double>(bounds.min_B());
  return 4.0 * static_cast<double>(bounds.A[0]) * static_cast<double>(bounds.A[1]) *
             static_cast<double>(bounds.B[0]) * static_cast<double>(bounds.B[1]) -
         2.0 * ma * ma * mb * mb;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace logforms
