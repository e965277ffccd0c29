#include "logforms/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

namespace logforms {

namespace {

std::uint64_t checked_mul(std::uint64_t x, std::uint64_t y, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(x, y, &out)) {
    throw ResourceError(std::string(what) + " overflows 64 bits");
  }
  return out;
}

std::uint64_t checked_add(std::uint64_t x, std::uint64_t y, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(x, y, &out)) {
    throw ResourceError(std::string(what) + " overflows 64 bits");
  }
  return out;
}

template <class T>
void put_le(std::string& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t k = 0; k < sizeof(T); ++k) {
    out.push_back(static_cast<char>(u & 0xFFu));
    u = static_cast<U>(u >> 8);
  }
}

template <class T>
char* write_le(char* p, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t k = 0; k < sizeof(T); ++k) {
    *p++ = static_cast<char>(u & 0xFFu);
    u = static_cast<U>(u >> 8);
  }
  return p;
}

template <class T>
T get_le(std::string_view bytes, std::size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) throw ConfigError("truncated rational encoding");
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) {
    u |= static_cast<U>(static_cast<U>(static_cast<unsigned char>(bytes[pos + k])) << (8 * k));
  }
  pos += sizeof(T);
  return static_cast<T>(u);
}

}  // namespace

// ---------------------------------------------------------------- Bounds

Bounds Bounds::make(std::vector<std::int64_t> A, std::vector<std::int64_t> B) {
  if (A.empty()) throw ConfigError("bounds need n >= 1");
  if (A.size() != B.size()) {
    throw ConfigError("A has " + std::to_string(A.size()) + " entries but B has " +
                      std::to_string(B.size()));
  }
  for (auto x : A) {
    if (x < 1) throw ConfigError("every A_i must be >= 1");
  }
  for (auto x : B) {
    if (x < 1) throw ConfigError("every B_i must be >= 1");
  }
  // Largest possible |exponent| of a prime in the value is
  // sum_i B_i * floor(log2 A_i); keep it well inside int64.
  std::uint64_t worst = 0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    const auto log2a = static_cast<std::uint64_t>(std::bit_width(static_cast<std::uint64_t>(A[i])) - 1);
    worst = checked_add(worst, checked_mul(static_cast<std::uint64_t>(B[i]), log2a, "exponent bound"),
                        "exponent bound");
  }
  if (worst > (std::uint64_t{1} << 62)) throw ConfigError("bounds could overflow canonical exponents");
  return Bounds{std::move(A), std::move(B)};
}

Bounds Bounds::uniform(std::size_t n, std::int64_t A, std::int64_t B) {
  return make(std::vector<std::int64_t>(n, A), std::vector<std::int64_t>(n, B));
}

std::int64_t Bounds::max_A() const { return *std::max_element(A.begin(), A.end()); }
std::int64_t Bounds::min_A() const { return *std::min_element(A.begin(), A.end()); }
std::int64_t Bounds::min_B() const { return *std::min_element(B.begin(), B.end()); }

std::uint64_t Bounds::base_space() const {
  std::uint64_t out = 1;
  for (auto x : A) out = checked_mul(out, static_cast<std::uint64_t>(x), "base space");
  return out;
}

std::uint64_t Bounds::exponent_space() const {
  std::uint64_t out = 1;
  for (auto x : B) out = checked_mul(out, 2 * static_cast<std::uint64_t>(x) + 1, "exponent space");
  return out;
}

std::uint64_t Bounds::tuple_space() const {
  return checked_mul(base_space(), exponent_space(), "tuple space");
}

void Bounds::require_within(std::uint64_t budget) const {
  const auto space = tuple_space();
  if (space > budget) {
    throw ResourceError("tuple space " + std::to_string(space) + " exceeds budget " +
                        std::to_string(budget));
  }
}

bool Bounds::symmetric() const {
  return std::all_of(A.begin(), A.end(), [&](auto x) { return x == A.front(); }) &&
         std::all_of(B.begin(), B.end(), [&](auto x) { return x == B.front(); });
}

// ------------------------------------------------------------- FormTuple

FormTuple FormTuple::make(std::vector<std::int64_t> a, std::vector<std::int64_t> b,
                          const Bounds& bounds) {
  FormTuple t{std::move(a), std::move(b)};
  if (!t.fits(bounds)) throw ConfigError("tuple lies outside its bounds");
  return t;
}

bool FormTuple::fits(const Bounds& bounds) const {
  if (a.size() != bounds.n() || b.size() != bounds.n()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 1 || a[i] > bounds.A[i]) return false;
    if (b[i] < -bounds.B[i] || b[i] > bounds.B[i]) return false;
  }
  return true;
}

// ----------------------------------------------------- CanonicalRational

CanonicalRational::CanonicalRational(std::vector<PrimePower> factors) : factors_(std::move(factors)) {
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (factors_[k].exponent == 0) throw ConfigError("canonical rational with zero exponent");
    if (factors_[k].prime < 2) throw ConfigError("canonical rational with prime < 2");
    if (k > 0 && factors_[k - 1].prime >= factors_[k].prime) {
      throw ConfigError("canonical rational primes must be strictly increasing");
    }
  }
}

CanonicalRational CanonicalRational::reciprocal() const {
  auto out = factors_;
  for (auto& f : out) f.exponent = -f.exponent;
  return CanonicalRational(std::move(out));
}

std::string CanonicalRational::encode() const {
  std::string out;
  out.reserve(4 + 12 * factors_.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(factors_.size()));
  for (const auto& f : factors_) {
    put_le<std::uint32_t>(out, f.prime);
    put_le<std::int64_t>(out, f.exponent);
  }
  return out;
}

CanonicalRational CanonicalRational::decode(std::string_view bytes) {
  std::size_t pos = 0;
  const auto count = get_le<std::uint32_t>(bytes, pos);
  std::vector<PrimePower> factors;
  factors.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    const auto p = get_le<std::uint32_t>(bytes, pos);
    const auto e = get_le<std::int64_t>(bytes, pos);
    factors.push_back({p, e});
  }
  if (pos != bytes.size()) throw ConfigError("trailing bytes in rational encoding");
  return CanonicalRational(std::move(factors));
}

double CanonicalRational::log_value() const {
  double s = 0.0;
  for (const auto& f : factors_) s += static_cast<double>(f.exponent) * std::log(static_cast<double>(f.prime));
  return s;
}

std::string CanonicalRational::to_string() const {
  if (factors_.empty()) return "1";
  std::ostringstream os;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (k) os << '*';
    os << factors_[k].prime << '^' << factors_[k].exponent;
  }
  return os.str();
}

void append_encoding(std::string& out, std::span<const std::uint32_t> primes,
                     std::span<const std::int64_t> exponents) {
  const auto start = out.size();
  out.resize(start + 4 + 12 * primes.size());
  char* p = out.data() + start + 4;
  std::uint32_t count = 0;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    if (exponents[k] == 0) continue;
    p = write_le<std::uint32_t>(p, primes[k]);
    p = write_le<std::int64_t>(p, exponents[k]);
    ++count;
  }
  write_le<std::uint32_t>(out.data() + start, count);
  out.resize(static_cast<std::size_t>(p - out.data()));
}

// ----------------------------------------------------------- FactorTable

FactorTable::FactorTable(std::uint64_t limit, std::uint64_t max_limit) {
  if (limit < 1) throw ConfigError("factor table limit must be >= 1");
  if (limit > max_limit || limit > 0xFFFFFFFEull) {
    throw ResourceError("factor table limit " + std::to_string(limit) + " exceeds memory budget " +
                        std::to_string(max_limit));
  }
  limit_ = static_cast<std::uint32_t>(limit);
  spf_.assign(limit_ + 1, 0);
  for (std::uint64_t p = 2; p <= limit_; ++p) {
    if (spf_[p] != 0) continue;
    for (std::uint64_t m = p; m <= limit_; m += p) {
      if (spf_[m] == 0) spf_[m] = static_cast<std::uint32_t>(p);
    }
  }
}

void FactorTable::check(std::uint64_t m) const {
  if (m < 1 || m > limit_) {
    throw RangeError(std::to_string(m) + " outside factor table range [1, " + std::to_string(limit_) + "]");
  }
}

std::uint32_t FactorTable::smallest_prime_factor(std::uint64_t m) const {
  check(m);
  if (m < 2) throw RangeError("1 has no prime factor");
  return spf_[m];
}

std::uint32_t FactorTable::largest_prime_factor(std::uint64_t m) const {
  std::uint32_t out = 1;
  for_each_prime_power(m, [&](std::uint32_t p, std::int64_t) { out = p; });
  return out;
}

std::vector<PrimePower> FactorTable::factorize(std::uint64_t m) const {
  std::vector<PrimePower> out;
  for_each_prime_power(m, [&](std::uint32_t p, std::int64_t e) { out.push_back({p, e}); });
  return out;
}

FactorTable build_factor_table(std::uint64_t limit) { return FactorTable(limit); }

std::vector<PrimePower> factorize(std::uint64_t m, const FactorTable& table) { return table.factorize(m); }

CanonicalRational canonical_form(const FormTuple& t, const FactorTable& table) {
  std::vector<PrimePower> acc;
  for (std::size_t i = 0; i < t.n(); ++i) {
    if (t.b[i] == 0) continue;
    table.for_each_prime_power(static_cast<std::uint64_t>(t.a[i]), [&](std::uint32_t p, std::int64_t e) {
      acc.push_back({p, e * t.b[i]});
    });
  }
  std::sort(acc.begin(), acc.end(), [](const auto& x, const auto& y) { return x.prime < y.prime; });
  std::vector<PrimePower> merged;
  for (const auto& f : acc) {
    if (!merged.empty() && merged.back().prime == f.prime) {
      merged.back().exponent += f.exponent;
    } else {
      merged.push_back(f);
    }
  }
  std::erase_if(merged, [](const PrimePower& f) { return f.exponent == 0; });
  return CanonicalRational(std::move(merged));
}

// ----------------------------------------------------------- Permutation

Permutation::Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (auto x : images_) {
    if (x >= images_.size() || seen[x]) throw ConfigError("not a permutation");
    seen[x] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return Permutation(std::move(v));
}

Permutation Permutation::transposition(std::size_t n, std::size_t i, std::size_t j) {
  auto p = identity(n);
  std::swap(p.images_.at(i), p.images_.at(j));
  return p;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = i;
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) throw ConfigError("composing permutations of different sizes");
  std::vector<std::size_t> out(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) out[i] = images_[other.images_[i]];
  return Permutation(std::move(out));
}

std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  std::vector<Permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

FormTuple permute(const FormTuple& t, const Permutation& sigma) {
  return FormTuple{sigma.apply(std::span<const std::int64_t>(t.a)),
                   sigma.apply(std::span<const std::int64_t>(t.b))};
}

bool is_possible(const Permutation& sigma, const FormTuple& t, const Bounds& bounds) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const auto a = t.a[sigma(i)];
    const auto b = t.b[sigma(i)];
    if (a < 1 || a > bounds.A[i]) return false;
    if (b < -bounds.B[i] || b > bounds.B[i]) return false;
  }
  return true;
}

}  // namespace logforms
