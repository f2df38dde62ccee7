#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <thread>
#include <vector>

namespace homolevel {

/// Worker count: hardware concurrency, capped by HOMOLEVEL_THREADS when set.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HOMOLEVEL_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

/// Sums `width` accumulators over items [0, count). Items are grouped in fixed
/// chunks of `chunk` indices; chunk partials are added in chunk order, so the
/// result does not depend on how many workers ran.
///
/// `body(i, acc)` adds item i's contributions into acc[0..width).
template <class Body>
std::vector<double> chunked_sum(std::size_t count, std::size_t width, Body&& body, std::size_t chunk = 2048) {
  const std::size_t n_chunks = (count + chunk - 1) / chunk;
  std::vector<double> partial(n_chunks * width, 0.0);
  auto run_chunk = [&](std::size_t c) {
    double* acc = partial.data() + c * width;
    const std::size_t hi = std::min(count, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < hi; ++i) body(i, acc);
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n_chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < n_chunks; c = next++) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<double> total(width, 0.0);
  for (std::size_t c = 0; c < n_chunks; ++c)
    for (std::size_t k = 0; k < width; ++k) total[k] += partial[c * width + k];
  return total;
}

/// Runs body(i) for i in [0, count) on the worker pool. Bodies must write
/// disjoint outputs.
template <class Body>
void parallel_for(std::size_t count, Body&& body, std::size_t chunk = 2048) {
  chunked_sum(count, 0, [&](std::size_t i, double*) { body(i); }, chunk);
}

/// Counter-based generator: the i-th draw of a stream is a pure function of
/// (seed, i), so parallel chunks reproduce the serial sequence exactly.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter) const {
    // splitmix64 finalizer over seed-offset counter
    std::uint64_t z = seed_ * 0x9E3779B97F4A7C15ULL + (counter + 1) * 0xD1B54A32D192ED03ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on (0, 1).
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on counters (2c, 2c+1).
  double normal(std::uint64_t counter) const {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::uint64_t seed_;
};

} // namespace homolevel
