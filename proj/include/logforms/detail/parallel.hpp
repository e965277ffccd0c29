#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace logforms::detail {

/// Splits [0, count) into contiguous ranges, runs body(begin, end) -> T on
/// up to `threads` workers and returns the per-worker results in range
/// order. Exceptions from workers are rethrown on the calling thread.
template <class T, class Body>
std::vector<T> map_ranges(std::uint64_t count, unsigned threads, Body body) {
  const std::uint64_t workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, count));
  std::vector<T> results(workers);
  if (workers == 1) {
    results[0] = body(std::uint64_t{0}, count);
    return results;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::uint64_t begin = count * w / workers;
        const std::uint64_t end = count * (w + 1) / workers;
        try {
          results[w] = body(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

/// Sum of body(begin, end) over a parallel split of [0, count).
template <class Body>
std::uint64_t parallel_count(std::uint64_t count, unsigned threads, Body body) {
  std::uint64_t total = 0;
  for (auto part : map_ranges<std::uint64_t>(count, threads, body)) total += part;
  return total;
}

/// Mixed-radix counter over [lo_i, hi_i]; next() returns the index of the
/// lowest coordinate that changed without wrapping, or size() when done.
class Odometer {
 public:
  Odometer(std::vector<std::int64_t> lo, std::vector<std::int64_t> hi)
      : lo_(std::move(lo)), hi_(std::move(hi)), value_(lo_) {}

  const std::vector<std::int64_t>& value() const { return value_; }
  std::size_t size() const { return value_.size(); }

  /// Sets the value from a linear index (coordinate 0 least significant).
  void seek(std::uint64_t index) {
    for (std::size_t i = 0; i < value_.size(); ++i) {
      const auto radix = static_cast<std::uint64_t>(hi_[i] - lo_[i] + 1);
      value_[i] = lo_[i] + static_cast<std::int64_t>(index % radix);
      index /= radix;
    }
  }

  std::size_t next() {
    for (std::size_t i = 0; i < value_.size(); ++i) {
      if (value_[i] < hi_[i]) {
        ++value_[i];
        return i;
      }
      value_[i] = lo_[i];
    }
    return value_.size();
  }

 private:
  std::vector<std::int64_t> lo_;
  std::vector<std::int64_t> hi_;
  std::vector<std::int64_t> value_;
};

}  // namespace logforms::detail
