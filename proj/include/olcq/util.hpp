#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace olcq {

// Deterministic RNG wrapper. All stochastic code in the project draws from
// this type; the raw engine output is converted to doubles by hand so that
// streams are identical across standard libraries (std::*_distribution makes
// no such guarantee).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // +1 or -1 with equal probability.
  int rademacher() { return (engine_() & 1u) ? 1 : -1; }

private:
  std::mt19937_64 engine_;
};

// Runs fn(i) for i in [0, n) across up to `threads` workers. Results must be
// written to per-index slots so the outcome is independent of scheduling.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(threads), n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < n;
           i += static_cast<std::size_t>(workers))
        fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Shortest decimal form that round-trips a double; used for every file we
// emit so that repeated runs are byte-identical.
std::string format_double(double v);

std::vector<std::string> split_ws(std::string_view s);
std::string_view trim(std::string_view s);

// Parse errors that carry a 1-based line number of the offending input.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

}  // namespace olcq
