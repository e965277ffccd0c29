#include "logforms/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "base_cache.hpp"
#include "logforms/detail/parallel.hpp"

namespace logforms {

namespace {

std::uint64_t ipow_saturating(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    if (__builtin_mul_overflow(out, base, &out)) return UINT64_MAX;
  }
  return out;
}

std::optional<std::vector<std::int64_t>> zero_exponent_relation(std::span<const std::int64_t> b) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] == 0) {
      std::vector<std::int64_t> c(b.size(), 0);
      c[i] = 1;
      return c;
    }
  }
  return std::nullopt;
}

// Enumerates c_0..c_{n-2} over [-k, k] and solves for c_{n-1}; equivalent
// to scanning all (2k+1)^n vectors. Assumes every b_i != 0.
std::optional<std::vector<std::int64_t>> relation_exhaustive(std::span<const std::int64_t> b,
                                                             std::int64_t k) {
  const std::size_t n = b.size();
  if (n == 1) return std::nullopt;
  const std::size_t m = n - 1;
  const std::int64_t last = b[m];
  std::vector<std::int64_t> c(m, -k);
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < m; ++i) sum -= k * b[i];
  std::size_t nonzero = m;  // every coordinate starts at -k != 0
  while (true) {
    if (sum % last == 0) {
      const std::int64_t cl = -sum / last;
      if (cl >= -k && cl <= k && (nonzero > 0 || cl != 0)) {
        std::vector<std::int64_t> out(c);
        out.push_back(cl);
        return out;
      }
    }
    std::size_t i = 0;
    for (; i < m; ++i) {
      if (c[i] < k) {
        if (c[i] == 0) ++nonzero;
        ++c[i];
        if (c[i] == 0) --nonzero;
        sum += b[i];
        break;
      }
      c[i] = -k;
      sum -= 2 * k * b[i];
    }
    if (i == m) return std::nullopt;
  }
}

std::optional<std::vector<std::int64_t>> relation_meet_in_middle(std::span<const std::int64_t> b,
                                                                 std::int64_t k) {
  const std::size_t n = b.size();
  const std::size_t left = (n + 1) / 2;
  const std::size_t right = n - left;
  const auto radix = static_cast<std::uint64_t>(2 * k + 1);
  const std::uint64_t left_count = ipow_saturating(radix, left);
  const std::uint64_t right_count = ipow_saturating(radix, right);
  if (left_count > kRelationTableBudget || right_count == UINT64_MAX) {
    throw ResourceError("relation search over (2*" + std::to_string(k) + "+1)^" + std::to_string(n) +
                        " coefficient vectors exceeds budget");
  }

  struct Entry {
    std::uint64_t any;
    std::uint64_t nonzero;
    bool has_nonzero;
  };
  std::unordered_map<std::int64_t, Entry> sums;
  sums.reserve(static_cast<std::size_t>(left_count));

  const std::uint64_t zero_left = [&] {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < left; ++i) idx = idx * radix + static_cast<std::uint64_t>(k);
    return idx;
  }();

  detail::Odometer odo(std::vector<std::int64_t>(left, -k), std::vector<std::int64_t>(left, k));
  for (std::uint64_t idx = 0; idx < left_count; ++idx, odo.next()) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < left; ++i) s += odo.value()[i] * b[i];
    const bool is_zero = idx == zero_left;
    auto [it, fresh] = sums.try_emplace(s, Entry{idx, idx, !is_zero});
    if (!fresh && !it->second.has_nonzero && !is_zero) {
      it->second.nonzero = idx;
      it->second.has_nonzero = true;
    }
  }

  auto decode = [&](std::uint64_t idx, std::size_t count) {
    detail::Odometer d(std::vector<std::int64_t>(count, -k), std::vector<std::int64_t>(count, k));
    d.seek(idx);
    return d.value();
  };

  detail::Odometer rodo(std::vector<std::int64_t>(right, -k), std::vector<std::int64_t>(right, k));
  for (std::uint64_t idx = 0; idx < right_count; ++idx, rodo.next()) {
    std::int64_t s = 0;
    bool right_zero = true;
    for (std::size_t i = 0; i < right; ++i) {
      s += rodo.value()[i] * b[left + i];
      right_zero = right_zero && rodo.value()[i] == 0;
    }
    const auto it = sums.find(-s);
    if (it == sums.end()) continue;
    if (right_zero && !it->second.has_nonzero) continue;
    auto c = decode(right_zero ? it->second.nonzero : it->second.any, left);
    c.insert(c.end(), rodo.value().begin(), rodo.value().end());
    return c;
  }
  return std::nullopt;
}

}  // namespace

FilterParameter FilterParameter::from_C(double C) {
  if (!std::isfinite(C) || C < 2.0) {
    std::ostringstream os;
    os << "cutoff C = " << C << " is below 2";
    throw ConfigError(os.str());
  }
  return FilterParameter{C, static_cast<std::int64_t>(std::floor(2.0 * std::log(C)))};
}

FilterParameter default_C(const Bounds& bounds) {
  double C = static_cast<double>(bounds.B.front());
  for (auto b : bounds.B) C = std::min(C, static_cast<double>(b));
  for (auto a : bounds.A) C = std::min(C, std::log(static_cast<double>(a)));
  if (!(C >= 2.0)) {
    std::ostringstream os;
    os << "default C = min(B_i, ln A_i) = " << C
       << " is below 2; enlarge the bounds so every A_i >= 8 and every B_i >= 2";
    throw ConfigError(os.str());
  }
  return FilterParameter::from_C(C);
}

bool condition_1C(std::span<const std::int64_t> a, const FilterParameter& param,
                  const FactorTable& table) {
  std::vector<PrimePower> total;
  for (auto ai : a) {
    table.for_each_prime_power(static_cast<std::uint64_t>(ai), [&](std::uint32_t p, std::int64_t e) {
      auto it = std::find_if(total.begin(), total.end(), [&](const PrimePower& f) { return f.prime == p; });
      if (it == total.end()) {
        total.push_back({p, e});
      } else {
        it->exponent += e;
      }
    });
  }
  return std::any_of(total.begin(), total.end(), [&](const PrimePower& f) {
    return f.exponent >= 2 && detail::power_at_least(f.prime, f.exponent, param.C);
  });
}

bool condition_2C(std::span<const std::int64_t> a, const FilterParameter& param,
                  const FactorTable& table) {
  return std::any_of(a.begin(), a.end(), [&](std::int64_t ai) {
    return static_cast<double>(table.largest_prime_factor(static_cast<std::uint64_t>(ai))) <= param.C;
  });
}

std::optional<std::vector<std::int64_t>> find_linear_relation(std::span<const std::int64_t> b,
                                                              std::int64_t coeff_bound,
                                                              RelationSearch strategy) {
  if (b.empty() || coeff_bound < 1) return std::nullopt;
  if (auto c = zero_exponent_relation(b)) return c;
  if (strategy == RelationSearch::automatic) {
    const auto space = ipow_saturating(static_cast<std::uint64_t>(2 * coeff_bound + 1), b.size());
    strategy = space > kExhaustiveRelationLimit ? RelationSearch::meet_in_middle : RelationSearch::exhaustive;
  }
  if (strategy == RelationSearch::exhaustive) return relation_exhaustive(b, coeff_bound);
  return relation_meet_in_middle(b, coeff_bound);
}

bool condition_3C(std::span<const std::int64_t> b, const FilterParameter& param, RelationSearch strategy) {
  return find_linear_relation(b, param.coeff_bound, strategy).has_value();
}

bool in_E(const FormTuple& t, const FilterParameter& param, const FactorTable& table) {
  return !condition_1C(t.a, param, table) && !condition_2C(t.a, param, table) && !condition_3C(t.b, param);
}

ECount count_E(const Bounds& bounds, const FilterParameter& param, const FactorTable& table,
               const EnumerationOptions& options) {
  const std::size_t n = bounds.n();
  const auto base_space = bounds.base_space();
  const auto exp_space = bounds.exponent_space();
  if (base_space > options.budget || exp_space > options.budget) {
    throw ResourceError("count_E: base space " + std::to_string(base_space) + " or exponent space " +
                        std::to_string(exp_space) + " exceeds budget " + std::to_string(options.budget));
  }
  if (static_cast<std::uint64_t>(bounds.max_A()) > table.limit()) {
    throw RangeError("factor table too small for the bounds");
  }
  const detail::BaseFactorCache cache(bounds.max_A(), table);

  const auto bases = detail::parallel_count(base_space, options.threads, [&](std::uint64_t lo, std::uint64_t hi) {
    detail::Odometer odo(std::vector<std::int64_t>(n, 1), bounds.A);
    odo.seek(lo);
    std::vector<PrimePower> scratch;
    std::uint64_t count = 0;
    for (std::uint64_t idx = lo; idx < hi; ++idx, odo.next()) {
      const auto& a = odo.value();
      const bool smooth = std::any_of(a.begin(), a.end(), [&](auto x) { return detail::is_smooth(x, cache, param.C); });
      if (!smooth && !detail::satisfies_1C(a, cache, param.C, scratch)) ++count;
    }
    return count;
  });

  std::vector<std::int64_t> lo_b(n), hi_b(bounds.B);
  for (std::size_t i = 0; i < n; ++i) lo_b[i] = -bounds.B[i];
  const auto exps = detail::parallel_count(exp_space, options.threads, [&](std::uint64_t lo, std::uint64_t hi) {
    detail::Odometer odo(lo_b, hi_b);
    odo.seek(lo);
    std::uint64_t count = 0;
    for (std::uint64_t idx = lo; idx < hi; ++idx, odo.next()) {
      if (!condition_3C(odo.value(), param)) ++count;
    }
    return count;
  });

  ECount out;
  out.base_tuples = bases;
  out.exponent_tuples = exps;
  out.count = bases * exps;
  double scale = std::ldexp(1.0, static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i) scale *= static_cast<double>(bounds.A[i]) * static_cast<double>(bounds.B[i]);
  out.density = static_cast<double>(out.count) / scale;
  return out;
}

}  // namespace logforms
