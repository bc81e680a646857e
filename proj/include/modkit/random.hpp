#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "modkit/item_set.hpp"

namespace modkit {

/// Seeded generator with platform-independent derived draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std distributions are not, so every derived draw below is
/// spelled out by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound) by rejection (bound > 0).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (no caching, one value per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Uniform random subset of {1..n}.
  WideSet subset(int n) {
    WideSet s(n);
    for (int i = 1; i <= n; ++i) {
      if ((i - 1) % 64 == 0) word_ = engine_();
      if ((word_ >> ((i - 1) % 64)) & 1U) s.insert(i);
    }
    return s;
  }

  /// Uniform random mask over the low n bits (n <= 64).
  std::uint64_t mask(int n) { return engine_() & low_bits(n); }

  /// Uniform random subset of {1..n} with exactly k items (partial Fisher-Yates).
  WideSet subset_of_size(int n, int k) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
    WideSet s(n);
    for (int i = 0; i < k; ++i) {
      const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
      s.insert(idx[static_cast<std::size_t>(i)]);
    }
    return s;
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t word_ = 0;
};

/// Stream seed for worker w, so parallel sampling stays reproducible.
constexpr std::uint64_t worker_seed(std::uint64_t seed, unsigned w) { return seed ^ w; }

}  // namespace modkit
