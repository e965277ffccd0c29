#include "logforms/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

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

void require_budget(std::uint64_t space, std::uint64_t budget, const char* what) {
  if (space > budget) {
    throw ResourceError(std::string(what) + " " + std::to_string(space) + " exceeds budget " +
                        std::to_string(budget));
  }
}

}  // namespace

std::uint64_t psi_count(std::uint64_t x, double y, const FactorTable& table) {
  if (x > table.limit()) {
    throw RangeError("psi_count: x = " + std::to_string(x) + " above factor table limit");
  }
  if (x == 0) return 0;
  // smooth[m] = spf(m) <= y and smooth[m / spf(m)]
  std::vector<char> smooth(x + 1, 0);
  smooth[1] = 1;
  std::uint64_t count = 1;
  for (std::uint64_t m = 2; m <= x; ++m) {
    const auto p = table.smallest_prime_factor(m);
    if (static_cast<double>(p) <= y && smooth[m / p]) {
      smooth[m] = 1;
      ++count;
    }
  }
  return count;
}

std::uint64_t count_condition_1C(const Bounds& bounds, const FilterParameter& param,
                                 const FactorTable& table, const EnumerationOptions& options) {
  require_table(bounds, table);
  const auto space = bounds.base_space();
  require_budget(space, options.budget, "base space");
  const detail::BaseFactorCache cache(bounds.max_A(), table);
  const std::size_t n = bounds.n();

  // Bases that satisfy 1_C on their own settle the tuple immediately.
  std::vector<char> alone(static_cast<std::size_t>(bounds.max_A()) + 1, 0);
  for (std::int64_t a = 1; a <= bounds.max_A(); ++a) {
    for (const auto& f : cache.of(a)) {
      if (f.exponent >= 2 && detail::power_at_least(f.prime, f.exponent, param.C)) alone[a] = 1;
    }
  }

  return detail::parallel_count(space, options.threads, [&](std::uint64_t lo, std::uint64_t hi) {
    detail::Odometer odo(std::vector<std::int64_t>(n, 1), bounds.A);
    odo.seek(lo);
    std::vector<PrimePower> scratch;
    std::uint64_t count = 0;
    for (std::uint64_t idx = lo; idx < hi; ++idx, odo.next()) {
      const auto& a = odo.value();
      if (std::any_of(a.begin(), a.end(), [&](auto x) { return alone[x] != 0; }) ||
          (n > 1 && detail::satisfies_1C(a, cache, param.C, scratch))) {
        ++count;
      }
    }
    return count;
  });
}

std::uint64_t count_condition_2C(const Bounds& bounds, const FilterParameter& param,
                                 const FactorTable& table, const EnumerationOptions& options) {
  require_table(bounds, table);
  const auto space = bounds.base_space();
  require_budget(space, options.budget, "base space");
  const detail::BaseFactorCache cache(bounds.max_A(), table);
  const std::size_t n = bounds.n();
  return detail::parallel_count(space, options.threads, [&](std::uint64_t lo, std::uint64_t hi) {
    detail::Odometer odo(std::vector<std::int64_t>(n, 1), bounds.A);
    odo.seek(lo);
    std::uint64_t count = 0;
    for (std::uint64_t idx = lo; idx < hi; ++idx, odo.next()) {
      const auto& a = odo.value();
      if (std::any_of(a.begin(), a.end(), [&](auto x) { return detail::is_smooth(x, cache, param.C); })) ++count;
    }
    return count;
  });
}

std::uint64_t count_condition_2C_inclusion_exclusion(const Bounds& bounds, const FilterParameter& param,
                                                     const FactorTable& table) {
  require_table(bounds, table);
  const auto total = bounds.base_space();
  std::uint64_t neither = 1;
  for (auto A : bounds.A) {
    const auto rough = static_cast<std::uint64_t>(A) - psi_count(static_cast<std::uint64_t>(A), param.C, table);
    neither *= rough;
  }
  return total - neither;
}

std::uint64_t count_condition_3C(const Bounds& bounds, const FilterParameter& param,
                                 const EnumerationOptions& options) {
  const auto space = bounds.exponent_space();
  require_budget(space, options.budget, "exponent space");
  const std::size_t n = bounds.n();
  std::vector<std::int64_t> lo_b(n);
  for (std::size_t i = 0; i < n; ++i) lo_b[i] = -bounds.B[i];
  return detail::parallel_count(space, options.threads, [&](std::uint64_t lo, std::uint64_t hi) {
    detail::Odometer odo(lo_b, bounds.B);
    odo.seek(lo);
    std::uint64_t count = 0;
    for (std::uint64_t idx = lo; idx < hi; ++idx, odo.next()) {
      if (condition_3C(odo.value(), param)) ++count;
    }
    return count;
  });
}

std::string_view to_string(Lemma lemma) {
  switch (lemma) {
    case Lemma::one: return "1";
    case Lemma::two: return "2";
    case Lemma::three: return "3";
  }
  return "?";
}

double lemma_bound(Lemma lemma, const Bounds& bounds, const FilterParameter& param) {
  const double n = static_cast<double>(bounds.n());
  const double logC = std::log(param.C);
  double prodA = 1.0;
  double prodB = 1.0;
  for (auto a : bounds.A) prodA *= static_cast<double>(a);
  for (auto b : bounds.B) prodB *= static_cast<double>(b);
  switch (lemma) {
    case Lemma::one:
      return prodA * std::pow(logC, n) / std::sqrt(param.C);
    case Lemma::two: {
      double sum = 0.0;
      for (auto a : bounds.A) sum += std::exp(-0.5 * std::log(static_cast<double>(a)) / logC);
      return prodA * sum;
    }
    case Lemma::three: {
      double sum = 0.0;
      for (auto b : bounds.B) sum += std::pow(9.0 * logC, n) / static_cast<double>(b);
      return prodB * sum;
    }
  }
  return 0.0;
}

LemmaCheckReport lemma_check(Lemma lemma, const Bounds& bounds, const FilterParameter& param,
                             const FactorTable& table, const EnumerationOptions& options) {
  LemmaCheckReport report;
  report.lemma = lemma;
  report.bounds = bounds;
  report.param = param;
  switch (lemma) {
    case Lemma::one:
      report.exact_count = count_condition_1C(bounds, param, table, options);
      break;
    case Lemma::two:
      if (static_cast<double>(bounds.min_A()) < param.C) {
        throw ConfigError("the smooth-count bound needs min A_i >= C");
      }
      report.exact_count = count_condition_2C(bounds, param, table, options);
      break;
    case Lemma::three:
      report.exact_count = count_condition_3C(bounds, param, options);
      break;
  }
  report.bound_value = lemma_bound(lemma, bounds, param);
  report.ratio = static_cast<double>(report.exact_count) / report.bound_value;
  return report;
}

double de_bruijn_ratio(std::uint64_t A, const FilterParameter& param, const FactorTable& table) {
  const double u = std::log(static_cast<double>(A)) / std::log(param.C);
  return static_cast<double>(psi_count(A, param.C, table)) / (static_cast<double>(A) * std::exp(-u / 2.0));
}

}  // namespace logforms
