#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "fickit/error.hpp"

namespace fickit {

using RngStream = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the independent stream `index` under master `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Named sub-streams, e.g. derive_seed(seed, "data") vs derive_seed(seed, "fic").
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return derive_seed(seed, h);
}

inline RngStream make_stream(std::uint64_t seed, std::uint64_t index) {
  return RngStream(derive_seed(seed, index));
}

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// length, so the result is independent of how the terms were produced.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

namespace detail {
inline thread_local bool in_parallel_region = false;
}

/// Runs body(i) for i in [0, count) over the available hardware threads.
/// Each index writes only its own output slot, so results do not depend on
/// scheduling. Exceptions are rethrown for the lowest failing index. Nested
/// calls run serially on the calling worker.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  if (count == 0) return;
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = detail::in_parallel_region ? 1 : std::min<std::size_t>(hw, count);
  std::vector<std::exception_ptr> errors(count);
  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    const bool outer = detail::in_parallel_region;
    detail::in_parallel_region = true;
    for (std::size_t i = begin; i < end; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    detail::in_parallel_region = outer;
  };
  if (workers == 1) {
    run_chunk(0, count);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_chunk, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// A stochastic quantity in nats. `std_error` is the sample standard
/// deviation of the per-replicate values divided by sqrt(replicates).
struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;

  static MonteCarloEstimate from_samples(std::span<const double> samples, std::uint64_t seed) {
    const std::size_t n = samples.size();
    if (n < 2) throw InvalidArgument("MonteCarloEstimate needs at least 2 replicates");
    const double mean = pairwise_sum(samples) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (samples[i] - mean) * (samples[i] - mean);
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n, seed};
  }

  friend bool operator==(const MonteCarloEstimate&, const MonteCarloEstimate&) = default;
};

/// sqrt(a.se^2 + b.se^2), the error scale of a difference of independent estimates.
inline double combined_std_error(const MonteCarloEstimate& a, const MonteCarloEstimate& b) {
  return std::hypot(a.std_error, b.std_error);
}

/// Evaluates `replicate(rng)` on `replicates` independent streams derived
/// from `seed` and summarizes the values. A throwing replicate is reported
/// as a ReplicateError naming its index and stream seed.
template <class Replicate>
MonteCarloEstimate monte_carlo(std::size_t replicates, std::uint64_t seed, Replicate&& replicate) {
  if (replicates < 2) throw InvalidArgument("Monte Carlo estimate needs replicates >= 2");
  std::vector<double> values(replicates);
  parallel_for(replicates, [&](std::size_t i) {
    const std::uint64_t stream_seed = derive_seed(seed, i);
    try {
      RngStream rng(stream_seed);
      const double v = replicate(rng);
      if (!std::isfinite(v)) throw NumericalError("non-finite replicate value");
      values[i] = v;
    } catch (const ReplicateError&) {
      throw;
    } catch (const std::exception& e) {
      throw ReplicateError(i, stream_seed, e.what());
    }
  });
  return MonteCarloEstimate::from_samples(values, seed);
}

}  // namespace fickit
