#include "modkit/expander.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <sstream>

#include "modkit/parallel.hpp"
#include "modkit/random.hpp"

namespace modkit {

std::vector<int> BipartiteGraph::left_degrees() const {
  std::vector<int> d(static_cast<std::size_t>(left()), 0);
  for (const auto& [v, w] : edges) ++d[static_cast<std::size_t>(v)];
  return d;
}

std::vector<int> BipartiteGraph::right_degrees() const {
  std::vector<int> d(static_cast<std::size_t>(right), 0);
  for (const auto& [v, w] : edges) ++d[static_cast<std::size_t>(w)];
  return d;
}

std::uint64_t BipartiteGraph::neighbour_mask(int v) const {
  std::uint64_t m = 0;
  for (const auto& [a, w] : edges) {
    if (a == v) m |= std::uint64_t{1} << w;
  }
  return m;
}

namespace {

bool integral(double x) { return std::abs(x - std::round(x)) < 1e-9; }

}  // namespace

BipartiteGraph sample_biregular(int k, int r, double theta, std::uint64_t seed) {
  if (k < 1 || r < 1 || theta <= 0 || theta > 1) throw std::domain_error("sample_biregular needs k, r >= 1 and 0 < theta <= 1");
  const double right = 2 * theta * k;
  if (!integral(right)) throw std::domain_error("2 theta k must be an integer");
  if (!integral(r / theta)) throw std::domain_error("r / theta must be an integer");
  if (2 * k > 64 || std::lround(right) > 64) throw CapacityError("expander sides limited to 64 vertices");
  BipartiteGraph g;
  g.k = k;
  g.r = r;
  g.theta = theta;
  g.right = static_cast<int>(std::lround(right));
  std::vector<int> copies;
  copies.reserve(static_cast<std::size_t>(2 * k * r));
  for (int v = 0; v < 2 * k; ++v) {
    for (int c = 0; c < r; ++c) copies.push_back(v);
  }
  Rng rng(seed);
  rng.shuffle(copies);
  for (std::size_t p = 0; p < copies.size(); ++p) {
    g.edges.emplace_back(copies[p], static_cast<int>(p % static_cast<std::size_t>(g.right)));
  }
  return g;
}

namespace {

using BinomTable = std::array<std::array<std::uint64_t, 65>, 65>;

const BinomTable& binomials() {
  static const BinomTable table = [] {
    BinomTable t{};
    for (int n = 0; n <= 64; ++n) {
      t[n][0] = 1;
      for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
    }
    return t;
  }();
  return table;
}

/// Colex unranking: the rank-th size-s subset of {0..63}, in Gosper order.
std::uint64_t unrank(std::uint64_t rank, int s) {
  const auto& C = binomials();
  std::uint64_t mask = 0;
  int c = 63;
  for (int i = s; i >= 1; --i) {
    while (C[c][i] > rank) --c;
    mask |= std::uint64_t{1} << c;
    rank -= C[c][i];
    --c;
  }
  return mask;
}

std::uint64_t next_combination(std::uint64_t x) {
  const std::uint64_t c = x & (~x + 1);
  const std::uint64_t r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

}  // namespace

ExpansionResult verify_expansion(const BipartiteGraph& g, double alpha) {
  const int L = g.left();
  if (L > 64 || g.right > 64) throw CapacityError("expander sides limited to 64 vertices");
  if (alpha <= 0 || alpha > 1) throw std::domain_error("alpha must lie in (0, 1]");
  ExpansionResult out;
  out.max_size = static_cast<int>(std::floor(L * alpha + 1e-9));
  const auto& C = binomials();
  std::uint64_t total = 0;
  for (int s = 1; s <= out.max_size; ++s) total += C[L][s];
  if (total > 10'000'000ULL) throw CapacityError("expansion check needs more than 1e7 subsets");
  std::vector<std::uint64_t> nb(static_cast<std::size_t>(L));
  for (int v = 0; v < L; ++v) nb[static_cast<std::size_t>(v)] = g.neighbour_mask(v);

  struct Best {
    int slack = 1 << 30;
    std::uint64_t mask = 0;
    int neighbours = 0;
  };
  out.worst_deficiency = -(1 << 30);
  int best_slack = 1 << 30;
  for (int s = 1; s <= out.max_size; ++s) {
    const std::uint64_t count = C[L][s];
    std::vector<Best> parts(thread_count());
    parallel_ranges(count, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
      if (begin >= end) return;
      Best b;
      std::uint64_t m = unrank(begin, s);
      for (std::uint64_t i = begin; i < end; ++i) {
        std::uint64_t n = 0;
        for (std::uint64_t rest = m; rest; rest &= rest - 1) n |= nb[static_cast<std::size_t>(std::countr_zero(rest))];
        const int cnt = std::popcount(n);
        if (cnt - s < b.slack) b = {cnt - s, m, cnt};
        if (i + 1 < end) m = next_combination(m);
      }
      parts[w] = b;
    });
    for (const auto& b : parts) {
      if (b.slack < best_slack) {
        best_slack = b.slack;
        out.worst = b.mask;
        out.worst_neighbours = b.neighbours;
      }
    }
    out.subsets_checked += count;
  }
  out.worst_deficiency = out.max_size > 0 ? -best_slack : 0;
  out.ok = out.worst_deficiency <= 0;
  return out;
}

bool ValueAccounting::lower_holds(double eps, double tol) const {
  return sources + split_pieces * (empty_value - eps) <= intermediates + tol;
}

bool ValueAccounting::upper_holds(double eps, double tol) const {
  return intermediates <= targets + merge_pieces * (empty_value + eps) + tol;
}

Collection frequent_collection(int sets, int n, int freq, std::uint64_t seed) {
  if (sets < 1 || freq < 0 || freq > sets || n < 1) throw std::domain_error("frequent_collection needs 0 <= freq <= sets");
  std::vector<int> order(static_cast<std::size_t>(sets));
  for (int i = 0; i < sets; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<WideSet> out(static_cast<std::size_t>(sets), WideSet(n));
  for (int item = 1; item <= n; ++item) {
    for (int j = 0; j < freq; ++j) {
      const int slot = ((item - 1) * freq + j) % sets;
      out[static_cast<std::size_t>(order[static_cast<std::size_t>(slot)])].insert(item);
    }
  }
  return Collection(n, std::move(out));
}

Recombination recombine(const BipartiteGraph& g, const Collection& sources, const SetFunction& f) {
  const int L = g.left();
  const int n = sources.universe();
  if (static_cast<int>(sources.count()) != L) throw std::domain_error("recombine needs exactly 2k source sets");
  if (f.n() != n) throw std::domain_error("function and sources disagree on the universe");
  const auto freq = sources.uniform_count();
  if (!freq) throw std::domain_error("source items are not uniformly frequent");

  // Edges of each left vertex, ordered by right endpoint then edge index.
  std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(L));
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) out_edges[static_cast<std::size_t>(g.edges[e].first)].push_back(e);
  for (auto& es : out_edges) {
    std::stable_sort(es.begin(), es.end(), [&](int a, int b) { return g.edges[a].second < g.edges[b].second; });
  }

  Recombination rec{std::vector<WideSet>(g.edges.size(), WideSet(n)), Collection(n), *freq, false, false, false, {}};
  std::vector<int> owner(static_cast<std::size_t>(g.right));  // right vertex -> matched edge
  std::vector<char> seen(static_cast<std::size_t>(g.right));
  for (int item = 1; item <= n; ++item) {
    std::fill(owner.begin(), owner.end(), -1);
    const auto augment = [&](auto&& self, int v) -> bool {
      for (int e : out_edges[static_cast<std::size_t>(v)]) {
        const int w = g.edges[static_cast<std::size_t>(e)].second;
        if (seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = 1;
        const int prev = owner[static_cast<std::size_t>(w)];
        if (prev < 0 || self(self, g.edges[static_cast<std::size_t>(prev)].first)) {
          owner[static_cast<std::size_t>(w)] = e;
          return true;
        }
      }
      return false;
    };
    for (int v = 0; v < L; ++v) {
      if (!sources[static_cast<std::size_t>(v)].contains(item)) continue;
      std::fill(seen.begin(), seen.end(), 0);
      if (!augment(augment, v)) {
        throw ExpansionViolation("no matching for item " + std::to_string(item) + "; the graph does not expand enough");
      }
    }
    for (int e : owner) {
      if (e >= 0) rec.labels[static_cast<std::size_t>(e)].insert(item);
    }
  }

  rec.partition_ok = true;
  for (int v = 0; v < L; ++v) {
    WideSet acc(n);
    for (int e : out_edges[static_cast<std::size_t>(v)]) {
      if (!(acc & rec.labels[static_cast<std::size_t>(e)]).none()) rec.partition_ok = false;
      acc = acc | rec.labels[static_cast<std::size_t>(e)];
    }
    if (!(acc == sources[static_cast<std::size_t>(v)])) rec.partition_ok = false;
  }
  rec.disjoint_ok = true;
  std::vector<WideSet> targets(static_cast<std::size_t>(g.right), WideSet(n));
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    WideSet& t = targets[static_cast<std::size_t>(g.edges[e].second)];
    if (!(t & rec.labels[e]).none()) rec.disjoint_ok = false;
    t = t | rec.labels[e];
  }
  for (const auto& t : targets) rec.targets.add(t);
  const auto tf = rec.targets.uniform_count();
  rec.frequency_ok = tf && *tf == *freq;

  ValueAccounting& acc = rec.accounting;
  acc.empty_value = f.evaluate(WideSet(n));
  for (const auto& s : sources.sets()) acc.sources += f.evaluate(s);
  for (const auto& s : rec.labels) acc.intermediates += f.evaluate(s);
  for (const auto& s : targets) acc.targets += f.evaluate(s);
  acc.split_pieces = static_cast<int>(g.edges.size()) - L;
  acc.merge_pieces = static_cast<int>(g.edges.size()) - g.right;
  return rec;
}

namespace {

/// c^c / (d^d (c-d)^(c-d)) with 0^0 = 1.
double phi(double c, double d) {
  const auto pw = [](double x) { return x == 0.0 ? 1.0 : std::pow(x, x); };
  return pw(c) / (pw(d) * pw(c - d));
}

}  // namespace

double stirling_base(double c, double d) {
  if (!(c > d && d > 0)) throw std::domain_error("stirling_base needs c > d > 0");
  return phi(c, d);
}

StirlingBracket stirling_bracket(double c, double d, int m) {
  if (!(c > d && d > 0) || m < 1) throw std::domain_error("stirling_bracket needs c > d > 0 and m >= 1");
  const double cm = c * m;
  const double dm = d * m;
  if (!integral(cm) || !integral(dm)) throw std::domain_error("c m and d m must be integers");
  const double log_base = m * std::log(phi(c, d));
  const double root = std::sqrt(c / (d * (c - d) * m));
  const double pi = std::acos(-1.0);
  StirlingBracket b;
  b.lower = std::exp(log_base) * std::sqrt(2 * pi) * root / std::exp(2.0);
  b.upper = std::exp(log_base) * std::exp(1.0) / (2 * pi) * root;
  b.actual = std::round(std::exp(std::lgamma(cm + 1) - std::lgamma(dm + 1) - std::lgamma(cm - dm + 1)));
  return b;
}

double union_bound_rate(double alpha, double r, double theta) {
  if (!(alpha > 0 && alpha <= 1 && r >= 1 && theta > 0 && theta <= 1)) {
    throw std::domain_error("union_bound_rate needs 0 < alpha <= 1, r >= 1, 0 < theta <= 1");
  }
  if (alpha > theta) throw std::domain_error("union_bound_rate needs alpha <= theta");
  return phi(1, alpha) * phi(theta, alpha) * phi(r * alpha / theta, r * alpha) / phi(r, r * alpha);
}

double m_upper_bound(double d, double s, double d2, double s2, double eps, double r, double theta) {
  if (theta >= 1) throw std::domain_error("m_upper_bound needs theta < 1");
  return (0.5 * (d + s - theta * (d2 + s2)) + 2 * eps * (r - 1)) / (1 - theta) + eps;
}

double kr(double r, double theta) {
  if (theta >= 1) throw std::domain_error("theta must be < 1");
  return (7 + 4 * r - 2 * theta) / (2 * (1 - theta));
}

double kfirst(double r, double theta) {
  if (theta >= 1) throw std::domain_error("theta must be < 1");
  return (2 * r - 0.5 - theta) / (1 - theta);
}

KwMin kw_min(double r, double theta, double r2, double theta2) {
  if (theta >= 1 || theta2 >= 1) throw std::domain_error("theta must be < 1");
  // Branch one falls in u, branch two rises; the max of the min sits at the crossing.
  const double a1 = (2 * r - 0.5 - theta) / (1 - theta);
  const double b1 = -theta / (2 * (1 - theta));
  const double a2 = (2 * r2 - theta2) / (1 - theta2);
  const double b2 = 1 / (2 * (1 - theta2));
  KwMin out;
  out.u = std::max(0.0, (a1 - a2) / (b2 - b1));
  const auto g = [&](double u) { return std::min(a1 + b1 * u, a2 + b2 * u); };
  out.value = g(out.u);
  const double h = 1e-6;
  const double left = (g(out.u) - g(std::max(0.0, out.u - h))) / h;
  const double right = (g(out.u + h) - g(out.u)) / h;
  out.sign_change = out.u > 0 && left > 0 && right < 0;
  return out;
}

double n2_value(double alpha) {
  static const std::array<std::pair<double, double>, 5> table{
      {{0.5, -0.5}, {0.25, 0.5}, {0.125, 2.0}, {0.0625, 3.0}, {0.03125, 4.5}}};
  for (const auto& [a, v] : table) {
    if (std::abs(alpha - a) < 1e-12) return v;
  }
  throw std::domain_error("no N2 value for alpha = " + std::to_string(alpha));
}

double kprime(double alpha, double r, double theta) {
  if (theta >= 1) throw std::domain_error("theta must be < 1");
  return (2 * r + n2_value(alpha) - theta) / (1 - theta);
}

double ks_v1(double delta, ExpanderParams p1, ExpanderParams p2) {
  const double a = (2 * delta + 2 * p1.r - 2.5) / (1 - p1.theta);
  const double b = (-delta + 2 * p2.r + 7) / (1 - p2.theta);
  return std::max(a, b) + 1;
}

double ks_v2(double delta, ExpanderParams p1, ExpanderParams p2, double threshold) {
  const double a = (2 * delta - 0.5 - threshold * p1.theta / 2 + 2 * (p1.r - 1)) / (1 - p1.theta);
  const double b = (9 - delta - threshold * p2.theta / 2 + 2 * (p2.r - 1)) / (1 - p2.theta);
  return std::max(a, b) + 1;
}

Optimum minimize_ks_v2(ExpanderParams p1, ExpanderParams p2, double threshold, double lo, double hi, double tol) {
  const double ratio = (std::sqrt(5.0) - 1) / 2;
  double a = lo;
  double b = hi;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = ks_v2(x1, p1, p2, threshold);
  double f2 = ks_v2(x2, p1, p2, threshold);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = ks_v2(x1, p1, p2, threshold);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = ks_v2(x2, p1, p2, threshold);
    }
  }
  const double mid = (a + b) / 2;
  return {mid, ks_v2(mid, p1, p2, threshold)};
}

BoundProfile paper_profile() {
  BoundProfile p;
  p.name = "paper";
  p.tuples = {
      {"kr_a", {0.5, 6, 2.0 / 3}},        {"kr_b", {0.5, 5.05, 2.0 / 3}},      {"kw_first", {0.5, 5, 5.0 / 7}},
      {"kw_second", {0.3, 4, 4.0 / 7}},   {"kprime", {1.0 / 16, 4, 4.0 / 15}}, {"ks_first", {1.0 / 64, 3, 3.0 / 11}},
      {"ks_second", {1.0 / 256, 3, 3.0 / 19}}, {"ks_case", {1.0 / 16, 4, 4.0 / 15}},
  };
  p.scalars = {{"delta", 43.0 / 16}, {"threshold", 5.08}, {"eps", 1.0}, {"delta_lo", 1.5}, {"delta_hi", 4.0}};
  return p;
}

namespace {

std::string describe(const ExpanderParams& p) {
  std::ostringstream os;
  os.precision(10);
  os << "alpha=" << p.alpha << " r=" << p.r << " theta=" << p.theta;
  return os.str();
}

}  // namespace

std::vector<BoundValue> bound_suite(const BoundProfile& profile) {
  const auto tuple = [&](const std::string& key) -> const ExpanderParams& {
    const auto it = profile.tuples.find(key);
    if (it == profile.tuples.end()) throw std::invalid_argument("bound profile is missing tuple '" + key + "'");
    return it->second;
  };
  const auto scalar = [&](const std::string& key) {
    const auto it = profile.scalars.find(key);
    if (it == profile.scalars.end()) throw std::invalid_argument("bound profile is missing scalar '" + key + "'");
    return it->second;
  };
  std::vector<BoundValue> out;
  const auto& kra = tuple("kr_a");
  const auto& krb = tuple("kr_b");
  out.push_back({"kr_a", kr(kra.r, kra.theta), describe(kra)});
  out.push_back({"kr_b", kr(krb.r, krb.theta), describe(krb)});
  out.push_back({"kfirst_a", kfirst(kra.r, kra.theta), describe(kra)});
  out.push_back({"kfirst_b", kfirst(krb.r, krb.theta), describe(krb)});
  const auto& w1 = tuple("kw_first");
  const auto& w2 = tuple("kw_second");
  const KwMin km = kw_min(w1.r, w1.theta, w2.r, w2.theta);
  out.push_back({"kw_min", km.value, describe(w1) + "; " + describe(w2) + "; crossing u=" + std::to_string(km.u)});
  const auto& kp = tuple("kprime");
  out.push_back({"kprime", kprime(kp.alpha, kp.r, kp.theta), describe(kp)});
  const auto& s1 = tuple("ks_first");
  const auto& s2 = tuple("ks_second");
  const double delta = scalar("delta");
  const double thr = scalar("threshold");
  const std::string pair = describe(s1) + "; " + describe(s2);
  out.push_back({"ks_v1", ks_v1(delta, s1, s2), pair + "; delta=" + std::to_string(delta)});
  out.push_back({"ks_v2_fixed", ks_v2(delta, s1, s2, thr), pair + "; delta=" + std::to_string(delta)});
  const Optimum opt = minimize_ks_v2(s1, s2, thr, scalar("delta_lo"), scalar("delta_hi"));
  out.push_back({"ks_v2_opt", opt.value, pair + "; optimized delta=" + std::to_string(opt.delta)});
  const auto& kc = tuple("ks_case");
  const double eps = scalar("eps");
  const double ks_case = m_upper_bound(thr, 0.0, 0.0, 0.0, eps, kc.r, kc.theta);
  out.push_back({"ks_case", ks_case, describe(kc) + "; d+s=" + std::to_string(thr)});
  out.push_back({"ks_final", std::max(ks_case, opt.value), "max(ks_case, ks_v2_opt)"});
  return out;
}

}  // namespace modkit
