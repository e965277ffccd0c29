#include "logforms/census.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "base_cache.hpp"
#include "logforms/detail/parallel.hpp"

namespace logforms {

namespace {

void require_table(const Bounds& bounds, const FactorTable& table) {
  if (static_cast<std::uint64_t>(bounds.max_A()) > table.limit()) {
    throw RangeError("factor table limit " + std::to_string(table.limit()) + " below max A_i " +
                     std::to_string(bounds.max_A()));
  }
}

// Exponent vectors of the bases over the union of their primes. The value
// of (a, b) is sum_i b_i * row_i.
struct BaseVectors {
  std::vector<std::uint32_t> primes;
  std::vector<std::int64_t> rows;  // n x primes.size()

  void load(std::span<const std::int64_t> a, const detail::BaseFactorCache& cache) {
    primes.clear();
    for (auto ai : a) {
      for (const auto& f : cache.of(ai)) primes.push_back(f.prime);
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    rows.assign(a.size() * primes.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (const auto& f : cache.of(a[i])) {
        const auto k = static_cast<std::size_t>(std::lower_bound(primes.begin(), primes.end(), f.prime) - primes.begin());
        rows[i * primes.size() + k] = f.exponent;
      }
    }
  }
};

// Calls sink(encoding) for every exponent tuple of the fixed bases, updating
// the value vector by one row per odometer step instead of refactoring.
template <class Sink>
void for_each_value(const BaseVectors& v, const Bounds& bounds, std::vector<std::int64_t>& b,
                    std::vector<std::int64_t>& acc, std::string& buf, Sink&& sink) {
  const std::size_t n = bounds.n();
  const std::size_t P = v.primes.size();
  acc.assign(P, 0);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = -bounds.B[i];
    for (std::size_t k = 0; k < P; ++k) acc[k] += b[i] * v.rows[i * P + k];
  }
  while (true) {
    buf.clear();
    append_encoding(buf, v.primes, acc);
    sink(buf, acc);
    std::size_t i = 0;
    for (; i < n; ++i) {
      const std::int64_t* row = v.rows.data() + i * P;
      if (b[i] < bounds.B[i]) {
        ++b[i];
        for (std::size_t k = 0; k < P; ++k) acc[k] += row[k];
        break;
      }
      b[i] = -bounds.B[i];
      for (std::size_t k = 0; k < P; ++k) acc[k] -= 2 * bounds.B[i] * row[k];
    }
    if (i == n) return;
  }
}

// Exactness of the inversion fast path: negating every b_i maps the box
// onto itself and the value r to 1/r, so R \ {1} splits into pairs
// {r, 1/r} with exactly one member whose smallest-prime exponent is
// positive. 1 is always in R (take b = 0). Hence |R| = 2 |R_+| + 1.
bool leading_exponent_positive(std::span<const std::int64_t> acc) {
  for (auto e : acc) {
    if (e != 0) return e > 0;
  }
  return false;
}

// Append-only byte storage; views into it stay valid until destruction.
class KeyArena {
 public:
  std::string_view store(std::string_view key) {
    if (blocks_.empty() || used_ + key.size() > size_) {
      size_ = std::max(std::min(2 * size_, kMaxBlock), key.size());
      blocks_.emplace_back(new char[size_]);
      used_ = 0;
    }
    char* dst = blocks_.back().get() + used_;
    std::copy(key.begin(), key.end(), dst);
    used_ += key.size();
    return {dst, key.size()};
  }

 private:
  static constexpr std::size_t kMaxBlock = 1 << 20;
  std::vector<std::unique_ptr<char[]>> blocks_;
  std::size_t size_ = 2048;
  std::size_t used_ = 0;
};

template <class Visit>
void for_each_base(const Bounds& bounds, std::int64_t first_lo, std::int64_t first_hi, Visit&& visit) {
  const std::size_t n = bounds.n();
  std::vector<std::int64_t> lo(n, 1), hi(bounds.A);
  lo[0] = first_lo;
  hi[0] = first_hi;
  // Leading coordinate varies slowest so each worker owns a range of a_1.
  std::vector<std::int64_t> a(lo);
  while (true) {
    visit(std::span<const std::int64_t>(a));
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (a[i] < hi[i]) {
        ++a[i];
        break;
      }
      a[i] = lo[i];
      if (i == 0) return;
    }
  }
}

}  // namespace

std::uint64_t enumerate_R(const Bounds& bounds, const FactorTable& table, const CensusOptions& options) {
  bounds.require_within(options.budget);
  require_table(bounds, table);
  const detail::BaseFactorCache cache(bounds.max_A(), table);
  const auto leading = static_cast<std::uint64_t>(bounds.A[0]);

  auto scan = [&](std::uint64_t lo, std::uint64_t hi, auto&& sink) {
    if (lo >= hi) return;
    BaseVectors v;
    std::vector<std::int64_t> b(bounds.n()), acc;
    std::string buf;
    for_each_base(bounds, static_cast<std::int64_t>(lo) + 1, static_cast<std::int64_t>(hi),
                  [&](std::span<const std::int64_t> a) {
                    v.load(a, cache);
                    for_each_value(v, bounds, b, acc, buf, [&](const std::string& key, std::span<const std::int64_t> e) {
                      if (options.exploit_inversion && !leading_exponent_positive(e)) return;
                      sink(key);
                    });
                  });
  };

  std::uint64_t stored = 0;
  if (options.dedup == Dedup::hash_set) {
    struct Part {
      KeyArena arena;
      std::unordered_set<std::string_view> seen;
    };
    auto parts = detail::map_ranges<Part>(leading, options.threads, [&](std::uint64_t lo, std::uint64_t hi) {
      Part part;
      scan(lo, hi, [&](const std::string& key) {
        if (!part.seen.contains(key)) part.seen.insert(part.arena.store(key));
      });
      return part;
    });
    auto biggest = std::max_element(parts.begin(), parts.end(),
                                    [](const auto& x, const auto& y) { return x.seen.size() < y.seen.size(); });
    auto merged = std::move(biggest->seen);
    for (auto& part : parts) {
      if (&part == &*biggest) continue;
      merged.merge(part.seen);
    }
    stored = merged.size();
  } else {
    struct Part {
      KeyArena arena;
      std::vector<std::string_view> keys;
    };
    auto parts = detail::map_ranges<Part>(leading, options.threads, [&](std::uint64_t lo, std::uint64_t hi) {
      Part part;
      scan(lo, hi, [&](const std::string& key) { part.keys.push_back(part.arena.store(key)); });
      return part;
    });
    std::vector<std::string_view> all;
    for (auto& part : parts) all.insert(all.end(), part.keys.begin(), part.keys.end());
    std::sort(all.begin(), all.end());
    stored = static_cast<std::uint64_t>(std::unique(all.begin(), all.end()) - all.begin());
  }
  return options.exploit_inversion ? 2 * stored + 1 : stored;
}

TheoremCheck verify_theorem(const Bounds& bounds, const FactorTable& table, std::optional<FilterParameter> param,
                            const EnumerationOptions& options) {
  TheoremCheck out;
  out.param = param ? *param : default_C(bounds);
  bounds.require_within(options.budget);
  require_table(bounds, table);
  const std::size_t n = bounds.n();
  const detail::BaseFactorCache cache(bounds.max_A(), table);

  std::vector<std::vector<std::int64_t>> good_a;
  std::vector<PrimePower> scratch;
  for_each_base(bounds, 1, bounds.A[0], [&](std::span<const std::int64_t> a) {
    const bool smooth = std::any_of(a.begin(), a.end(), [&](auto x) { return detail::is_smooth(x, cache, out.param.C); });
    if (!smooth && !detail::satisfies_1C(a, cache, out.param.C, scratch)) good_a.emplace_back(a.begin(), a.end());
  });

  std::vector<std::vector<std::int64_t>> good_b;
  {
    std::vector<std::int64_t> lo(n);
    for (std::size_t i = 0; i < n; ++i) lo[i] = -bounds.B[i];
    detail::Odometer odo(lo, bounds.B);
    const auto space = bounds.exponent_space();
    for (std::uint64_t idx = 0; idx < space; ++idx, odo.next()) {
      if (!condition_3C(odo.value(), out.param)) good_b.push_back(odo.value());
    }
  }
  out.e_count = static_cast<std::uint64_t>(good_a.size()) * good_b.size();

  // Group members of E by value.
  std::unordered_map<std::string, std::vector<std::pair<std::uint32_t, std::uint32_t>>> groups;
  BaseVectors v;
  std::string buf;
  std::vector<std::int64_t> acc;
  for (std::uint32_t ia = 0; ia < good_a.size(); ++ia) {
    v.load(good_a[ia], cache);
    const std::size_t P = v.primes.size();
    for (std::uint32_t ib = 0; ib < good_b.size(); ++ib) {
      acc.assign(P, 0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < P; ++k) acc[k] += good_b[ib][i] * v.rows[i * P + k];
      }
      buf.clear();
      append_encoding(buf, v.primes, acc);
      groups[buf].emplace_back(ia, ib);
    }
  }
  out.distinct_values = groups.size();

  const auto perms = all_permutations(n);
  for (const auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    ++out.shared_values;
    for (std::size_t x = 0; x < members.size(); ++x) {
      const FormTuple tx{good_a[members[x].first], good_b[members[x].second]};
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const FormTuple ty{good_a[members[y].first], good_b[members[y].second]};
        const bool related = std::any_of(perms.begin(), perms.end(), [&](const Permutation& sigma) {
          return permute(tx, sigma) == ty && is_possible(sigma, tx, bounds);
        });
        if (!related) out.violations.push_back({CanonicalRational::decode(key), tx, ty});
      }
    }
  }
  return out;
}

PermissibilityResult permissibility_fraction(const Permutation& sigma, const Bounds& bounds,
                                             const PermissibilityOptions& options) {
  const std::size_t n = bounds.n();
  if (sigma.size() != n) throw ConfigError("permutation size does not match bounds");
  PermissibilityResult out;
  std::vector<std::int64_t> lo(2 * n), hi(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = 1;
    hi[i] = bounds.A[i];
    lo[n + i] = -bounds.B[i];
    hi[n + i] = bounds.B[i];
  }
  const auto space = bounds.tuple_space();
  FormTuple t{std::vector<std::int64_t>(n), std::vector<std::int64_t>(n)};
  if (space <= options.budget) {
    detail::Odometer odo(lo, hi);
    for (std::uint64_t idx = 0; idx < space; ++idx, odo.next()) {
      std::copy_n(odo.value().begin(), n, t.a.begin());
      std::copy_n(odo.value().begin() + static_cast<std::ptrdiff_t>(n), n, t.b.begin());
      if (is_possible(sigma, t, bounds)) ++out.hits;
    }
    out.total = space;
    out.exhaustive = true;
  } else {
    std::mt19937_64 rng(options.seed);
    for (std::uint64_t s = 0; s < options.samples; ++s) {
      for (std::size_t i = 0; i < 2 * n; ++i) {
        const auto x = std::uniform_int_distribution<std::int64_t>(lo[i], hi[i])(rng);
        (i < n ? t.a[i] : t.b[i - n]) = x;
      }
      if (is_possible(sigma, t, bounds)) ++out.hits;
    }
    out.total = options.samples;
    out.exhaustive = false;
  }
  out.fraction = static_cast<double>(out.hits) / static_cast<double>(out.total);
  return out;
}

Rational permissibility_closed_form(const Permutation& sigma, const Bounds& bounds) {
  if (sigma.size() != bounds.n()) throw ConfigError("permutation size does not match bounds");
  BigInt num = 1;
  BigInt den = 1;
  for (std::size_t i = 0; i < bounds.n(); ++i) {
    const auto s = sigma(i);
    num *= BigInt(std::min(bounds.A[s], bounds.A[i])) * (2 * std::min(bounds.B[s], bounds.B[i]) + 1);
    den *= BigInt(bounds.A[i]) * (2 * bounds.B[i] + 1);
  }
  return Rational(num, den);
}

std::string_view to_string(Formula f) {
  switch (f) {
    case Formula::proposition: return "proposition";
    case Formula::corollary1: return "corollary1";
    case Formula::corollary2: return "corollary2";
  }
  return "?";
}

std::string_view to_string(Shape s) {
  switch (s) {
    case Shape::equal: return "equal";
    case Shape::separated: return "separated";
    case Shape::custom: return "custom";
  }
  return "?";
}

CensusReport census(const Bounds& bounds, const FactorTable& table, Formula formula, const CensusOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CensusReport r;
  r.bounds = bounds;
  r.tuple_space = bounds.tuple_space();
  r.exact_R = enumerate_R(bounds, table, options);
  r.formula = formula;
  switch (formula) {
    case Formula::proposition:
      r.formula_value = proposition_value(bounds);
      break;
    case Formula::corollary1:
      if (!bounds.symmetric()) throw ConfigError("corollary1 formula needs equal bounds");
      r.formula_value = corollary1_value(bounds.n(), bounds.A[0], bounds.B[0]);
      break;
    case Formula::corollary2:
      r.formula_value = corollary2_value(bounds);
      break;
  }
  r.ratio = r.formula_value > 0.0 ? static_cast<double>(r.exact_R) / r.formula_value
                                  : std::numeric_limits<double>::quiet_NaN();
  try {
    r.param = default_C(bounds);
  } catch (const ConfigError&) {
    r.param.reset();
  }
  if (r.param) r.e_count = count_E(bounds, *r.param, table, options).count;
  r.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return r;
}

Bounds bounds_for_scale(Shape shape, std::size_t n, std::int64_t scale, const Bounds* base) {
  if (scale < 1) throw ConfigError("scales must be >= 1");
  switch (shape) {
    case Shape::equal:
      return Bounds::uniform(n, scale, scale);
    case Shape::separated: {
      std::vector<std::int64_t> v;
      std::int64_t p = 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (__builtin_mul_overflow(p, scale, &p)) throw ResourceError("separated scale overflows");
        v.push_back(p);
      }
      return Bounds::make(v, v);
    }
    case Shape::custom: {
      if (base == nullptr) throw ConfigError("custom shape needs base bounds");
      auto A = base->A;
      auto B = base->B;
      for (auto& x : A) x *= scale;
      for (auto& x : B) x *= scale;
      return Bounds::make(std::move(A), std::move(B));
    }
  }
  throw ConfigError("unknown shape");
}

ConvergenceRun convergence_run(std::span<const std::int64_t> scales, Shape shape, std::size_t n,
                               const FactorTable& table, const CensusOptions& options, const Bounds* base) {
  ConvergenceRun run;
  const Formula formula = shape == Shape::equal       ? Formula::corollary1
                          : shape == Shape::separated ? Formula::corollary2
                                                      : Formula::proposition;
  for (auto s : scales) {
    try {
      const auto bounds = bounds_for_scale(shape, n, s, base);
      run.reports.push_back(census(bounds, table, formula, options));
      run.scales.push_back(s);
    } catch (const ResourceError& e) {
      run.truncated = true;
      run.truncation_reason = "scale " + std::to_string(s) + ": " + e.what();
      break;
    }
  }
  return run;
}

}  // namespace logforms
