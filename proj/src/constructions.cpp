#include "modkit/constructions.hpp"

#include <cmath>

#include "modkit/random.hpp"

namespace modkit {

SetFunction pawlik(int k) {
  if (k < 2 || k > 10) throw std::domain_error("pawlik needs 2 <= k <= 10, got " + std::to_string(k));
  const int n = 2 * k;
  // Rows: S n X is empty / partial / all of X. Columns: same for Y.
  constexpr int kValue[3][3] = {{0, -1, -3}, {1, 0, -1}, {3, 1, 0}};
  const std::uint64_t x_mask = low_bits(k);
  const auto part = [k](std::uint64_t m) {
    const int c = std::popcount(m);
    return c == 0 ? 0 : (c == k ? 2 : 1);
  };
  std::vector<double> t(std::size_t{1} << n);
  for (std::uint64_t m = 0; m < t.size(); ++m) {
    t[m] = kValue[part(m & x_mask)][part(m >> k)];
  }
  return SetFunction::table(n, std::move(t));
}

SetFunction symmetric_example(int n, double eps) {
  if (n < 2) throw std::domain_error("symmetric_example needs n >= 2");
  std::vector<double> by_size(static_cast<std::size_t>(n) + 1, 0.0);
  by_size.back() = -eps;
  return SetFunction::symmetric(std::move(by_size));
}

SetFunction four_item_worstcase() {
  std::vector<double> t(16, 0.0);
  t[0b0011] = 1;   // {1,2}
  t[0b1100] = 1;   // {3,4}
  t[0b0101] = -1;  // {1,3}
  t[0b1010] = -1;  // {2,4}
  return SetFunction::table(4, std::move(t));
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SetFunction noisy_linear(const LinearFunction& g, double delta, std::uint64_t seed) {
  return SetFunction::oracle(g.n(), [g, delta, seed](const WideSet& s) {
    std::uint64_t h = seed;
    for (int w = 0; w < s.word_count(); ++w) h = splitmix(h ^ s.word(w));
    return linear_eval(g, s) + ((h >> 63) ? delta : -delta);
  });
}

LinearFunction random_linear(int n, std::uint64_t seed) {
  Rng rng(seed);
  LinearFunction g = LinearFunction::zero(n);
  g.c0 = 2 * rng.uniform() - 1;
  for (double& c : g.coeffs) c = 2 * rng.uniform() - 1;
  return g;
}

AdversarialInstance adversarial(int n, double delta, std::uint64_t seed) {
  if (n < 16 || n % 2 != 0) throw std::domain_error("adversarial needs an even n >= 16");
  if (n > kMaxWideItems) throw CapacityError("adversarial universe limited to 1024 items");
  const double log_n = std::log(static_cast<double>(n));
  if (delta <= 0 || delta > std::sqrt(log_n / n) + 1e-12) {
    throw std::domain_error("adversarial needs 0 < delta <= sqrt(ln n / n)");
  }
  AdversarialInstance inst;
  inst.delta = delta;
  inst.threshold = std::sqrt(n * log_n);
  inst.q = delta / inst.threshold;
  Rng rng(seed);
  inst.hidden = rng.subset_of_size(n, n / 2);
  inst.g = LinearFunction::zero(n);
  for (int i : inst.hidden.items()) inst.g.coeffs[static_cast<std::size_t>(i - 1)] = inst.q;
  const WideSet hidden = inst.hidden;
  const double q = inst.q;
  const double thr = inst.threshold;
  inst.f = SetFunction::oracle(n, [hidden, q, thr, delta](const WideSet& s) {
    const int size = s.size();
    const int inside = (s & hidden).size();
    const double tilt = inside - size / 2.0;
    if (std::abs(tilt) <= thr) return q * size / 2.0;
    const double g = q * inside;
    return tilt > 0 ? g - delta : g + delta;
  });
  return inst;
}

}  // namespace modkit
