#include <algorithm>
#include <cmath>
#include <type_traits>

#include "modkit/metrics.hpp"
#include "modkit/parallel.hpp"
#include "modkit/random.hpp"

namespace modkit {

std::string to_string(Variant v) { return v == Variant::weak ? "weak" : "strong"; }

double violation(const SetFunction& f, const WideSet& s, const WideSet& t) {
  return f.evaluate(s) + f.evaluate(t) - f.evaluate(s | t) - f.evaluate(s & t);
}

namespace {

template <typename V>
using acc_t = std::conditional_t<std::is_integral_v<V>, int, double>;

template <typename V>
acc_t<V> abs_acc(acc_t<V> v) {
  return v < 0 ? -v : v;
}

template <typename V>
acc_t<V> weak_max(const std::vector<V>& t, int n) {
  const std::uint64_t full = low_bits(n);
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<acc_t<V>> best(thread_count(), acc_t<V>{0});
  parallel_ranges(size, [&](unsigned w, std::uint64_t b, std::uint64_t e) {
    acc_t<V> bv = 0;
    const acc_t<V> f0 = t[0];
    for (std::uint64_t s = std::max<std::uint64_t>(b, 1); s < e; ++s) {
      const std::uint64_t comp = full & ~s;
      const acc_t<V> fs = static_cast<acc_t<V>>(t[s]) - f0;
      // Submasks of comp in descending order; stop once T <= S.
      for (std::uint64_t tm = comp; tm > s; tm = (tm - 1) & comp) {
        const acc_t<V> v = abs_acc<V>(fs + static_cast<acc_t<V>>(t[tm]) - static_cast<acc_t<V>>(t[s | tm]));
        bv = v > bv ? v : bv;
      }
    }
    best[w] = bv;
  });
  return *std::max_element(best.begin(), best.end());
}

template <typename V>
acc_t<V> strong_max(const std::vector<V>& t, int n) {
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<acc_t<V>> best(thread_count(), acc_t<V>{0});
  parallel_ranges(size, [&](unsigned w, std::uint64_t b, std::uint64_t e) {
    acc_t<V> bv = 0;
    for (std::uint64_t s = b; s < e; ++s) {
      const acc_t<V> fs = t[s];
      for (std::uint64_t tm = s + 1; tm < size; ++tm) {
        const acc_t<V> v = abs_acc<V>(fs + static_cast<acc_t<V>>(t[tm]) - static_cast<acc_t<V>>(t[s | tm]) -
                                      static_cast<acc_t<V>>(t[s & tm]));
        bv = v > bv ? v : bv;
      }
    }
    best[w] = bv;
  });
  return *std::max_element(best.begin(), best.end());
}

double table_violation(std::span<const double> t, std::uint64_t s, std::uint64_t tm) {
  return t[s] + t[tm] - t[s | tm] - t[s & tm];
}

/// First canonical pair (ascending S, then T) whose |violation| reaches thr.
std::optional<PairWitness> find_witness(std::span<const double> t, int n, Variant variant, double thr) {
  const std::uint64_t full = low_bits(n);
  const std::uint64_t size = std::uint64_t{1} << n;
  const auto make = [&](std::uint64_t s, std::uint64_t tm) {
    return PairWitness{WideSet(ItemSet(s, n)), WideSet(ItemSet(tm, n)), table_violation(t, s, tm)};
  };
  if (variant == Variant::weak) {
    for (std::uint64_t s = 1; s < size; ++s) {
      const std::uint64_t comp = full & ~s;
      if (comp <= s) continue;
      for (std::uint64_t tm = (0 - comp) & comp; tm != 0; tm = (tm - comp) & comp) {
        if (tm <= s) continue;
        if (std::abs(table_violation(t, s, tm)) >= thr) return make(s, tm);
      }
    }
  } else {
    for (std::uint64_t s = 0; s < size; ++s) {
      for (std::uint64_t tm = s + 1; tm < size; ++tm) {
        const std::uint64_t both = s & tm;
        if (both == s || both == tm) continue;
        if (std::abs(table_violation(t, s, tm)) >= thr) return make(s, tm);
      }
    }
  }
  return std::nullopt;
}

enum class Storage { int8, int32, real };

Storage classify(std::span<const double> t) {
  double worst = 0.0;
  for (double v : t) {
    if (v != std::floor(v) || !std::isfinite(v)) return Storage::real;
    worst = std::max(worst, std::abs(v));
  }
  if (worst <= 31) return Storage::int8;
  if (worst <= double{1 << 28}) return Storage::int32;
  return Storage::real;
}

template <typename V>
std::vector<V> narrow(std::span<const double> t) {
  std::vector<V> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = static_cast<V>(t[i]);
  return out;
}

double exact_max(std::span<const double> t, int n, Variant variant) {
  const auto run = [&](const auto& vec) -> double {
    return variant == Variant::weak ? static_cast<double>(weak_max(vec, n)) : static_cast<double>(strong_max(vec, n));
  };
  switch (classify(t)) {
    case Storage::int8: return run(narrow<std::int8_t>(t));
    case Storage::int32: return run(narrow<std::int32_t>(t));
    case Storage::real: break;
  }
  return run(std::vector<double>(t.begin(), t.end()));
}

EpsResult exact_eps(const SetFunction& f, Variant variant) {
  const int n = f.n();
  if (n > kMaxExactPairItems) {
    throw CapacityError("exact pair scans are limited to " + std::to_string(kMaxExactPairItems) + " items, got " +
                        std::to_string(n));
  }
  const SetFunction table = to_table(f);
  const auto t = table.table_values();
  EpsResult out;
  out.exact = true;
  out.eps = exact_max(t, n, variant);
  if (out.eps > 0) {
    // Recomputation in double can differ from the integer pass in the last ulp.
    out.witness = find_witness(t, n, variant, out.eps * (1 - 1e-12));
    if (out.witness) out.eps = std::max(out.eps, std::abs(out.witness->value));
  }
  return out;
}

EpsResult sampled_eps(const SetFunction& f, Variant variant, ScanMode mode) {
  const int n = f.n();
  struct Best {
    double v = -1.0;
    std::optional<PairWitness> w;
  };
  std::vector<Best> blocks(kSampleBlocks);
  for_blocks(kSampleBlocks, [&](unsigned b) {
    Rng rng(worker_seed(mode.seed, b));
    const std::uint64_t begin = mode.count * b / kSampleBlocks;
    const std::uint64_t end = mode.count * (b + 1) / kSampleBlocks;
    Best best;
    for (std::uint64_t i = begin; i < end; ++i) {
      const WideSet s = rng.subset(n);
      WideSet t = rng.subset(n);
      if (variant == Variant::weak) t = t - s;
      const double v = violation(f, s, t);
      if (std::abs(v) > best.v) {
        best.v = std::abs(v);
        best.w = PairWitness{s, t, v};
      }
    }
    blocks[b] = std::move(best);
  });
  EpsResult out;
  out.exact = false;
  out.samples = mode.count;
  out.seed = mode.seed;
  double top = -1.0;
  for (auto& b : blocks) {
    if (b.v > top) {
      top = b.v;
      out.witness = b.w;
    }
  }
  out.eps = std::max(top, 0.0);
  return out;
}

}  // namespace

EpsResult modularity_eps(const SetFunction& f, Variant variant, ScanMode mode) {
  if (mode.sampled) return sampled_eps(f, variant, mode);
  if (f.kind() == FunctionKind::symmetric && f.n() > kMaxExactPairItems) return symmetric_modularity_eps(f, variant);
  return exact_eps(f, variant);
}

ModularityReport modularity_report(const SetFunction& f, ScanMode mode) {
  return {modularity_eps(f, Variant::weak, mode), modularity_eps(f, Variant::strong, mode)};
}

EpsResult symmetric_modularity_eps(const SetFunction& f, Variant variant) {
  const auto* pv = f.symmetric_values();
  if (pv == nullptr) throw std::invalid_argument("symmetric_modularity_eps needs a symmetric function");
  const auto& p = *pv;
  const int n = f.n();
  EpsResult out;
  out.exact = true;
  int ba = 0;
  int bb = 0;
  int bc = 0;
  double best = 0.0;
  double signed_best = 0.0;
  const auto consider = [&](int a, int b, int c) {
    const double v = p[static_cast<std::size_t>(a)] + p[static_cast<std::size_t>(b)] -
                     p[static_cast<std::size_t>(a + b - c)] - p[static_cast<std::size_t>(c)];
    if (std::abs(v) > best) {
      best = std::abs(v);
      signed_best = v;
      ba = a;
      bb = b;
      bc = c;
    }
  };
  if (variant == Variant::weak) {
    for (int a = 1; a <= n; ++a) {
      for (int b = 1; a + b <= n; ++b) consider(a, b, 0);
    }
  } else {
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        for (int c = std::max(0, a + b - n); c <= std::min(a, b); ++c) {
          if (c == a || c == b) continue;
          consider(a, b, c);
        }
      }
    }
  }
  out.eps = best;
  if (best > 0) {
    WideSet s(n);
    WideSet t(n);
    for (int i = 1; i <= ba; ++i) s.insert(i);
    for (int i = ba - bc + 1; i <= ba - bc + bb; ++i) t.insert(i);
    out.witness = PairWitness{s, t, signed_best};
  }
  return out;
}

}  // namespace modkit
