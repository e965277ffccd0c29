#pragma once

// Flattened factorizations of 1..max_a for the base-tuple hot loops.

#include <cstdint>
#include <span>
#include <vector>

#include "logforms/core.hpp"

namespace logforms::detail {

class BaseFactorCache {
 public:
  BaseFactorCache(std::int64_t max_a, const FactorTable& table) {
    offsets_.reserve(static_cast<std::size_t>(max_a) + 2);
    offsets_.push_back(0);
    offsets_.push_back(0);  // a = 0 unused
    for (std::int64_t a = 1; a <= max_a; ++a) {
      table.for_each_prime_power(static_cast<std::uint64_t>(a),
                                 [&](std::uint32_t p, std::int64_t e) { powers_.push_back({p, e}); });
      offsets_.push_back(static_cast<std::uint32_t>(powers_.size()));
    }
  }

  std::span<const PrimePower> of(std::int64_t a) const {
    const auto i = static_cast<std::size_t>(a);
    return {powers_.data() + offsets_[i], powers_.data() + offsets_[i + 1]};
  }

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<PrimePower> powers_;
};

/// p^e >= C, evaluated exactly for p^e < 2^53.
inline bool power_at_least(std::uint32_t p, std::int64_t e, double C) {
  constexpr std::uint64_t cap = std::uint64_t{1} << 53;
  std::uint64_t v = 1;
  for (std::int64_t k = 0; k < e; ++k) {
    if (v > cap / p) return true;
    v *= p;
  }
  return static_cast<double>(v) >= C;
}

/// condition 1_C over cached factorizations. Merges the per-base prime
/// powers into a small scratch buffer sorted by prime.
inline bool satisfies_1C(std::span<const std::int64_t> a, const BaseFactorCache& cache, double C,
                         std::vector<PrimePower>& scratch) {
  scratch.clear();
  for (auto ai : a) {
    for (const auto& f : cache.of(ai)) {
      bool merged = false;
      for (auto& s : scratch) {
        if (s.prime == f.prime) {
          s.exponent += f.exponent;
          merged = true;
          break;
        }
      }
      if (!merged) scratch.push_back(f);
    }
  }
  for (const auto& s : scratch) {
    if (s.exponent >= 2 && power_at_least(s.prime, s.exponent, C)) return true;
  }
  return false;
}

inline bool is_smooth(std::int64_t a, const BaseFactorCache& cache, double C) {
  const auto f = cache.of(a);
  return f.empty() || static_cast<double>(f.back().prime) <= C;
}

}  // namespace logforms::detail
