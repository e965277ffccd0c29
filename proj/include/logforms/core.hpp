#pragma once

// Factorization infrastructure, canonical rationals and the
// permutation-possibility predicate shared by every other module.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace logforms {

/// Invalid bounds, parameters or command-line input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation would exceed its enumeration or memory budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the range a table was built for.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// Knobs shared by every exhaustive enumeration.
struct EnumerationOptions {
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
};

/// Box constraints 1 <= a_i <= A[i], |b_i| <= B[i].
struct Bounds {
  std::vector<std::int64_t> A;
  std::vector<std::int64_t> B;

  /// Validates n >= 1, A_i >= 1, B_i >= 1, matching lengths and that
  /// canonical exponents cannot overflow a 64-bit integer.
  static Bounds make(std::vector<std::int64_t> A, std::vector<std::int64_t> B);
  static Bounds uniform(std::size_t n, std::int64_t A, std::int64_t B);

  std::size_t n() const { return A.size(); }
  std::int64_t max_A() const;
  std::int64_t min_A() const;
  std::int64_t min_B() const;

  /// prod A_i. Throws ResourceError on 64-bit overflow.
  std::uint64_t base_space() const;
  /// prod (2 B_i + 1). Throws ResourceError on 64-bit overflow.
  std::uint64_t exponent_space() const;
  /// prod A_i (2 B_i + 1). Throws ResourceError on 64-bit overflow.
  std::uint64_t tuple_space() const;
  void require_within(std::uint64_t budget) const;

  /// True when every A_i and every B_i coincide.
  bool symmetric() const;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// One representation (a, b) of the rational a_1^b_1 ... a_n^b_n.
struct FormTuple {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;

  /// Checks 1 <= a_i <= A_i and |b_i| <= B_i.
  static FormTuple make(std::vector<std::int64_t> a, std::vector<std::int64_t> b,
                        const Bounds& bounds);

  std::size_t n() const { return a.size(); }
  bool fits(const Bounds& bounds) const;

  friend bool operator==(const FormTuple&, const FormTuple&) = default;
};

struct PrimePower {
  std::uint32_t prime = 0;
  std::int64_t exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
  friend auto operator<=>(const PrimePower&, const PrimePower&) = default;
};

/// A positive rational as its prime-exponent vector, primes strictly
/// increasing and exponents nonzero. Empty means 1.
class CanonicalRational {
 public:
  CanonicalRational() = default;
  explicit CanonicalRational(std::vector<PrimePower> factors);

  std::span<const PrimePower> factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  CanonicalRational reciprocal() const;

  /// u32 pair count followed by (u32 prime, i64 exponent) pairs, all
  /// little-endian. Equal values have equal encodings and vice versa.
  std::string encode() const;
  static CanonicalRational decode(std::string_view bytes);

  /// Approximate log of the value, for display only.
  double log_value() const;
  std::string to_string() const;

  friend bool operator==(const CanonicalRational&, const CanonicalRational&) = default;

 private:
  std::vector<PrimePower> factors_;
};

/// Appends the canonical encoding of the nonzero entries of
/// (primes[k], exponents[k]) to out. primes must be strictly increasing.
void append_encoding(std::string& out, std::span<const std::uint32_t> primes,
                     std::span<const std::int64_t> exponents);

/// Smallest-prime-factor sieve over 2..limit.
class FactorTable {
 public:
  static constexpr std::uint64_t kDefaultMaxLimit = 100'000'000;

  explicit FactorTable(std::uint64_t limit, std::uint64_t max_limit = kDefaultMaxLimit);

  std::uint32_t limit() const { return limit_; }
  std::uint32_t smallest_prime_factor(std::uint64_t m) const;
  std::uint32_t largest_prime_factor(std::uint64_t m) const;

  /// Prime factorization with strictly increasing primes; [] for m = 1.
  std::vector<PrimePower> factorize(std::uint64_t m) const;

  /// Calls f(prime, exponent) for each prime power exactly dividing m,
  /// in increasing prime order, without allocating.
  template <class F>
  void for_each_prime_power(std::uint64_t m, F&& f) const {
    check(m);
    auto rest = static_cast<std::uint32_t>(m);
    while (rest > 1) {
      const std::uint32_t p = spf_[rest];
      std::int64_t e = 0;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      f(p, e);
    }
  }

 private:
  void check(std::uint64_t m) const;

  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;
};

FactorTable build_factor_table(std::uint64_t limit);

std::vector<PrimePower> factorize(std::uint64_t m, const FactorTable& table);

/// The value a_1^b_1 ... a_n^b_n in canonical form.
CanonicalRational canonical_form(const FormTuple& t, const FactorTable& table);

/// A bijection on {0..n-1}; images()[i] is sigma(i).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> images);
  static Permutation identity(std::size_t n);
  static Permutation transposition(std::size_t n, std::size_t i, std::size_t j);

  std::size_t size() const { return images_.size(); }
  std::size_t operator()(std::size_t i) const { return images_[i]; }
  std::span<const std::size_t> images() const { return images_; }

  bool is_identity() const;
  Permutation inverse() const;
  /// (this o other)(i) = this(other(i)).
  Permutation compose(const Permutation& other) const;

  /// out[i] = values[sigma(i)].
  template <class T>
  std::vector<T> apply(std::span<const T> values) const {
    std::vector<T> out(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) out[i] = values[images_[i]];
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> images_;
};

/// Every permutation of {0..n-1} in lexicographic order.
std::vector<Permutation> all_permutations(std::size_t n);

/// (a o sigma, b o sigma).
FormTuple permute(const FormTuple& t, const Permutation& sigma);

/// True iff a_{sigma(i)} <= A_i and |b_{sigma(i)}| <= B_i for every i.
bool is_possible(const Permutation& sigma, const FormTuple& t, const Bounds& bounds);

}  // namespace logforms
