#include <algorithm>
#include <cmath>
#include <sstream>

#include "modkit/constructions.hpp"
#include "modkit/parallel.hpp"
#include "modkit/random.hpp"

namespace modkit {

KMUniverse::KMUniverse(int k) : k_(k), n_(0), ps_(0), ns_(0) {
  if (k < 2) throw std::domain_error("KMUniverse needs k >= 2");
  if (k > 4) throw CapacityError("KMUniverse supports k <= 4 (n <= 70), got k=" + std::to_string(k));
  const int width = 2 * k;
  std::vector<int> cur;
  // Depth-first with +1 tried before -1 gives lexicographic order over {+1 > -1}.
  const auto rec = [&](auto&& self, int plus, int minus) -> void {
    if (static_cast<int>(cur.size()) == width) {
      vectors_.push_back(cur);
      return;
    }
    if (plus < k) {
      cur.push_back(1);
      self(self, plus + 1, minus);
      cur.pop_back();
    }
    if (minus < k) {
      cur.push_back(-1);
      self(self, plus, minus + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0, 0);
  n_ = static_cast<int>(vectors_.size());

  partner_.assign(static_cast<std::size_t>(n_), 0);
  for (int i = 0; i < n_; ++i) {
    std::vector<int> neg = vectors_[static_cast<std::size_t>(i)];
    for (int& c : neg) c = -c;
    const auto it = std::find(vectors_.begin(), vectors_.end(), neg);
    partner_[static_cast<std::size_t>(i)] = static_cast<int>(it - vectors_.begin()) + 1;
  }

  ps_ = Collection(n_);
  ns_ = Collection(n_);
  for (int j = 0; j < width; ++j) {
    WideSet p(n_);
    for (int i = 0; i < n_; ++i) {
      if (vectors_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > 0) p.insert(i + 1);
    }
    ps_.add(p);
    ns_.add(p.complement());
  }
}

WideSet KMUniverse::negate(const WideSet& s) const {
  WideSet out(n_);
  for (int i : s.items()) out.insert(partner(i));
  return out;
}

WideSet KMUniverse::dual(const WideSet& s) const { return negate(s).complement(); }

WideSet KMUniverse::permute(const WideSet& s, const std::vector<int>& perm) const {
  WideSet out(n_);
  const int width = 2 * k_;
  std::vector<int> moved(static_cast<std::size_t>(width));
  for (int i : s.items()) {
    const auto& v = vector_of(i);
    for (int c = 0; c < width; ++c) moved[static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])] = v[static_cast<std::size_t>(c)];
    const auto it = std::find(vectors_.begin(), vectors_.end(), moved);
    out.insert(static_cast<int>(it - vectors_.begin()) + 1);
  }
  return out;
}

KMUniverse km_universe(int k) { return KMUniverse(k); }

WideSet dual_set(const KMUniverse& u, const WideSet& s) { return u.dual(s); }

RuleFunction::RuleFunction(std::string name, std::shared_ptr<const KMUniverse> universe, int M, std::vector<Rule> rules,
                           ModularityClaim claim)
    : name_(std::move(name)), universe_(std::move(universe)), M_(M), rules_(std::move(rules)), claim_(claim) {}

int RuleFunction::value(const WideSet& s) const {
  for (const auto& r : rules_) {
    if (auto v = r.apply(s)) return *v;
  }
  return 0;
}

std::string RuleFunction::fired_rule(const WideSet& s) const {
  for (const auto& r : rules_) {
    if (r.apply(s)) return r.name;
  }
  return "none";
}

RuleFunction RuleFunction::with_override(Rule rule) const {
  RuleFunction copy = *this;
  copy.rules_.insert(copy.rules_.begin(), std::move(rule));
  copy.name_ += "+override";
  return copy;
}

namespace {

class RuleEvaluator final : public Evaluator, public DualStructure {
 public:
  explicit RuleEvaluator(RuleFunction f) : Evaluator(f.universe().n()), f_(std::move(f)) {}
  double value(const WideSet& s) const override { return f_.value(s); }
  WideSet dual(const WideSet& s) const override { return f_.universe().dual(s); }
  int max_abs() const override { return f_.M(); }

 private:
  RuleFunction f_;
};

bool in_ps(const KMUniverse& u, const WideSet& s) {
  for (int j = 0; j < u.generator_count(); ++j) {
    if (u.positive(j) == s) return true;
  }
  return false;
}

/// S1 <= S <= S1 u S2, or S1 n S2 <= S <= S1, over ordered generator pairs.
bool km70_interval(const KMUniverse& u, const WideSet& s) {
  const int g = u.generator_count();
  for (int a = 0; a < g; ++a) {
    const WideSet& pa = u.positive(a);
    if (pa.is_subset_of(s)) {
      const WideSet rest = s - pa;
      for (int b = 0; b < g; ++b) {
        if (rest.is_subset_of(u.positive(b))) return true;
      }
    }
    if (s.is_subset_of(pa)) {
      for (int b = 0; b < g; ++b) {
        if ((pa & u.positive(b)).is_subset_of(s)) return true;
      }
    }
  }
  return false;
}

std::optional<int> km70_positive(const KMUniverse& u, const WideSet& s) {
  if (in_ps(u, s)) return 2;
  if (km70_interval(u, s)) return 1;
  return std::nullopt;
}

/// (S strictly inside some P and inside no N) or (S strictly contains some P and no N).
bool km20_between(const KMUniverse& u, const WideSet& s) {
  const int g = u.generator_count();
  bool below_p = false;
  bool above_p = false;
  for (int j = 0; j < g; ++j) {
    below_p = below_p || s.is_proper_subset_of(u.positive(j));
    above_p = above_p || u.positive(j).is_proper_subset_of(s);
  }
  if (below_p) {
    bool clear = true;
    for (int j = 0; j < g && clear; ++j) clear = !s.is_proper_subset_of(u.negative(j));
    if (clear) return true;
  }
  if (above_p) {
    bool clear = true;
    for (int j = 0; j < g && clear; ++j) clear = !u.negative(j).is_proper_subset_of(s);
    if (clear) return true;
  }
  return false;
}

std::optional<int> km20_positive(const KMUniverse& u, const WideSet& s) {
  if (in_ps(u, s)) return 3;
  if (km20_between(u, s)) return 1;
  return std::nullopt;
}

}  // namespace

SetFunction RuleFunction::as_set_function() const { return SetFunction::generated(std::make_shared<RuleEvaluator>(*this)); }

RuleFunction km70() {
  auto u = std::make_shared<const KMUniverse>(4);
  std::vector<Rule> rules;
  rules.push_back({"support", [u](const WideSet& s) -> std::optional<int> {
                     if (in_ps(*u, s)) return 2;
                     return std::nullopt;
                   }});
  rules.push_back({"interval", [u](const WideSet& s) -> std::optional<int> {
                     if (km70_interval(*u, s)) return 1;
                     return std::nullopt;
                   }});
  rules.push_back({"antisymmetry", [u](const WideSet& s) -> std::optional<int> {
                     if (auto v = km70_positive(*u, s.complement())) return -*v;
                     return std::nullopt;
                   }});
  rules.push_back({"default", [](const WideSet&) -> std::optional<int> { return 0; }});
  return RuleFunction("km70", u, 2, std::move(rules), {Variant::strong, 2});
}

RuleFunction km20() {
  auto u = std::make_shared<const KMUniverse>(3);
  std::vector<Rule> rules;
  rules.push_back({"support", [u](const WideSet& s) -> std::optional<int> {
                     if (in_ps(*u, s)) return 3;
                     return std::nullopt;
                   }});
  rules.push_back({"between", [u](const WideSet& s) -> std::optional<int> {
                     if (km20_between(*u, s)) return 1;
                     return std::nullopt;
                   }});
  rules.push_back({"antisymmetry", [u](const WideSet& s) -> std::optional<int> {
                     if (auto v = km20_positive(*u, s.complement())) return -*v;
                     return std::nullopt;
                   }});
  rules.push_back({"default", [](const WideSet&) -> std::optional<int> { return 0; }});
  return RuleFunction("km20", u, 3, std::move(rules), {Variant::weak, 2});
}

bool CertificateReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* CertificateReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<WideSet> structural_sets(const KMUniverse& u) {
  std::vector<WideSet> out;
  const int g = u.generator_count();
  for (int a = 0; a < g; ++a) {
    out.push_back(u.positive(a));
    out.push_back(u.negative(a));
  }
  for (int a = 0; a < g; ++a) {
    for (int b = a + 1; b < g; ++b) {
      out.push_back(u.positive(a) & u.positive(b));
      out.push_back(u.positive(a) | u.positive(b));
      out.push_back(u.negative(a) & u.negative(b));
      out.push_back(u.negative(a) | u.negative(b));
    }
  }
  return out;
}

namespace {

/// Random union/intersection formula over the generators.
struct Circuit {
  struct Node {
    int op = 0;  // 0 leaf, 1 union, 2 intersection
    int generator = 0;
    bool positive = true;
    int left = -1;
    int right = -1;
  };
  std::vector<Node> nodes;
  int root = -1;

  static Circuit random(Rng& rng, int generators, int depth) {
    Circuit c;
    c.root = c.grow(rng, generators, depth);
    return c;
  }

  int grow(Rng& rng, int generators, int depth) {
    Node node;
    if (depth == 0 || rng.below(3) == 0) {
      node.generator = static_cast<int>(rng.below(static_cast<std::uint64_t>(generators)));
      node.positive = rng.below(2) == 0;
    } else {
      node.op = 1 + static_cast<int>(rng.below(2));
      node.left = grow(rng, generators, depth - 1);
      node.right = grow(rng, generators, depth - 1);
    }
    nodes.push_back(node);
    return static_cast<int>(nodes.size()) - 1;
  }

  WideSet eval(const KMUniverse& u, const std::vector<int>& perm, int at = -2) const {
    const Node& nd = nodes[static_cast<std::size_t>(at == -2 ? root : at)];
    if (nd.op == 0) {
      const int j = perm[static_cast<std::size_t>(nd.generator)];
      return nd.positive ? u.positive(j) : u.negative(j);
    }
    const WideSet a = eval(u, perm, nd.left);
    const WideSet b = eval(u, perm, nd.right);
    return nd.op == 1 ? (a | b) : (a & b);
  }
};

std::vector<int> identity_perm(int g) {
  std::vector<int> p(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) p[static_cast<std::size_t>(i)] = i;
  return p;
}

int pair_violation(const RuleFunction& f, const WideSet& s, const WideSet& t) {
  return f.value(s) + f.value(t) - f.value(s | t) - f.value(s & t);
}

void record_failure(Check& c, const std::string& detail, std::vector<WideSet> witness) {
  if (!c.pass) return;
  c.pass = false;
  c.detail = detail;
  c.witness = std::move(witness);
}

}  // namespace

CertificateReport km_certificates(const RuleFunction& f, std::uint64_t samples, std::uint64_t seed, VerifyLevel level,
                                  std::uint64_t pair_samples) {
  const KMUniverse& u = f.universe();
  const int n = u.n();
  const int g = u.generator_count();
  const int M = f.M();
  CertificateReport rep;
  rep.samples = samples;
  rep.pair_samples = pair_samples == 0 ? 10 * samples : pair_samples;
  rep.seed = seed;
  rep.level = level;
  if (level == VerifyLevel::exact && n > kMaxExactPairItems) {
    throw CapacityError(f.name() + " has " + std::to_string(n) + " items; exact verification needs n <= " +
                        std::to_string(kMaxExactPairItems));
  }

  {
    Check c{"generator_frequencies", true, "", {}};
    const auto counts = u.ps().item_counts();
    for (int i = 0; i < n; ++i) {
      if (counts[static_cast<std::size_t>(i)] != u.k()) {
        record_failure(c, "item " + std::to_string(i + 1) + " lies in " + std::to_string(counts[static_cast<std::size_t>(i)]) +
                              " generators", {});
      }
    }
    if (c.pass) c.detail = "every item in exactly " + std::to_string(u.k()) + " of " + std::to_string(g) + " generators";
    rep.checks.push_back(c);
  }

  const SetFunction sf = f.as_set_function();
  {
    Check c{"support_values", true, "", {}};
    for (int j = 0; j < g; ++j) {
      if (f.value(u.positive(j)) != M) record_failure(c, "PS set has value != M", {u.positive(j)});
      if (f.value(u.negative(j)) != -M) record_failure(c, "NS set has value != -M", {u.negative(j)});
    }
    rep.checks.push_back(c);
  }
  {
    Check c{"support_certificate", true, "", {}};
    try {
      const auto cert = zero_closest_certificate(sf, u.ps(), u.ns());
      const bool halves = std::all_of(cert.marginals.begin(), cert.marginals.end(),
                                      [](double m) { return std::abs(m - 0.5) < 1e-12; });
      c.pass = cert.ok && cert.uniform && halves;
      c.detail = c.pass ? "uniform weights, all marginals 1/2" : "no equal-marginal distributions";
    } catch (const CertificateError& e) {
      record_failure(c, e.what(), {e.offending()});
    }
    rep.checks.push_back(c);
  }

  Check anti{"antisymmetry", true, "", {}};
  Check dual{"dual_symmetry", true, "", {}};
  Check bounded{"bounded", true, "", {}};
  Check integral{"integrality", true, "", {}};
  const auto check_set = [&](const WideSet& s) {
    const double v = sf.evaluator()->value(s);
    if (v != std::floor(v)) record_failure(integral, "non-integer value", {s});
    if (std::abs(v) > M) record_failure(bounded, "|f| exceeds M", {s});
    if (sf.evaluator()->value(s.complement()) != -v) record_failure(anti, "f(S) != -f(complement S)", {s});
    if (sf.evaluator()->value(u.dual(s)) != v) record_failure(dual, "f(S) != f(dual S)", {s});
  };
  for (const auto& s : structural_sets(u)) check_set(s);
  {
    Rng rng(seed);
    for (std::uint64_t i = 0; i < samples; ++i) check_set(rng.subset(n));
  }

  // Pair sampling: all structural pairs, then uniform and circuit-built pairs.
  const Variant variant = f.claim().variant;
  Check modular{"modularity_sampled", true, "", {}};
  {
    const auto st = structural_sets(u);
    int worst = 0;
    for (std::size_t a = 0; a < st.size(); ++a) {
      for (std::size_t b = 0; b < st.size(); ++b) {
        if (variant == Variant::weak && !(st[a] & st[b]).none()) continue;
        const int v = std::abs(pair_violation(f, st[a], st[b]));
        if (v > worst) {
          worst = v;
          if (v > f.claim().eps) record_failure(modular, "structural pair exceeds the claimed eps", {st[a], st[b]});
        }
      }
    }
    rep.max_structural_violation = worst;

    struct Block {
      int worst = 0;
      std::optional<std::pair<WideSet, WideSet>> bad;
    };
    std::vector<Block> blocks(kSampleBlocks);
    const auto perm = identity_perm(g);
    for_blocks(kSampleBlocks, [&](unsigned b) {
      Rng rng(worker_seed(seed + 1, b));
      const std::uint64_t begin = rep.pair_samples * b / kSampleBlocks;
      const std::uint64_t end = rep.pair_samples * (b + 1) / kSampleBlocks;
      Block blk;
      for (std::uint64_t i = begin; i < end; ++i) {
        WideSet s(n);
        WideSet t(n);
        if (i % 2 == 0) {
          s = rng.subset(n);
          t = rng.subset(n);
        } else {
          s = Circuit::random(rng, g, 3).eval(u, perm);
          t = Circuit::random(rng, g, 3).eval(u, perm);
        }
        if (variant == Variant::weak) t = t - s;
        const int v = std::abs(pair_violation(f, s, t));
        if (v > blk.worst) blk.worst = v;
        if (v > f.claim().eps && !blk.bad) blk.bad = std::make_pair(s, t);
      }
      blocks[b] = std::move(blk);
    });
    int sampled_worst = 0;
    for (const auto& blk : blocks) {
      sampled_worst = std::max(sampled_worst, blk.worst);
      if (blk.bad) record_failure(modular, "sampled pair exceeds the claimed eps", {blk.bad->first, blk.bad->second});
    }
    rep.max_sampled_violation = std::max(sampled_worst, worst);
    if (modular.pass) {
      modular.detail = "max violation " + std::to_string(static_cast<int>(rep.max_sampled_violation)) + " <= " +
                       std::to_string(f.claim().eps);
    }
  }

  Check anon{"generator_anonymity", true, "", {}};
  {
    Rng rng(seed + 2);
    const std::uint64_t circuits = std::max<std::uint64_t>(100, samples / 10);
    const auto id = identity_perm(g);
    for (std::uint64_t i = 0; i < circuits && anon.pass; ++i) {
      const Circuit c = Circuit::random(rng, g, 3);
      auto perm = id;
      rng.shuffle(perm);
      const WideSet a = c.eval(u, id);
      const WideSet b = c.eval(u, perm);
      if (f.value(a) != f.value(b)) record_failure(anon, "value changes under a generator permutation", {a, b});
    }
  }

  if (level == VerifyLevel::exact) {
    const SetFunction table = to_table(sf);
    const auto t = table.table_values();
    const std::uint64_t full = low_bits(n);
    double max_abs = 0.0;
    for (std::uint64_t m = 0; m < t.size(); ++m) {
      const WideSet s(ItemSet(m, n));
      max_abs = std::max(max_abs, std::abs(t[m]));
      if (t[m] != std::floor(t[m])) record_failure(integral, "non-integer value", {s});
      if (std::abs(t[m]) > M) record_failure(bounded, "|f| exceeds M", {s});
      if (t[full & ~m] != -t[m]) record_failure(anti, "f(S) != -f(complement S)", {s});
      if (t[u.dual(s).word(0)] != t[m]) record_failure(dual, "f(S) != f(dual S)", {s});
    }
    rep.exact_max_abs = max_abs;
    const EpsResult eps = modularity_eps(table, variant);
    rep.exact_eps = eps.eps;
    Check ex{"modularity_exact", eps.eps <= f.claim().eps, "", {}};
    ex.detail = "exhaustive " + to_string(variant) + " eps = " + std::to_string(eps.eps);
    if (!ex.pass && eps.witness) ex.witness = {eps.witness->s, eps.witness->t};
    rep.checks.push_back(ex);
    Check tight{"max_abs_exact", max_abs == M, "max |f| = " + std::to_string(max_abs), {}};
    rep.checks.push_back(tight);
  }

  for (Check* c : {&anti, &dual, &bounded, &integral, &modular, &anon}) rep.checks.push_back(*c);
  return rep;
}

bool StructuralReport::weak_all() const {
  return std::all_of(weak_items.begin(), weak_items.end(), [](const Check& c) { return c.pass; });
}

StructuralReport structural_claims(const KMUniverse& u) {
  const int g = u.generator_count();
  const auto P = [&](int j) -> const WideSet& { return u.positive(j); };
  const auto N = [&](int j) -> const WideSet& { return u.negative(j); };
  const auto label = [](const char* a, int i, const char* op, const char* b, int j) {
    std::ostringstream os;
    os << a << i + 1 << op << b << j + 1;
    return os.str();
  };
  StructuralReport rep;
  rep.containment = {"containment", true, "", {}};
  for (int a = 0; a < g && rep.containment.pass; ++a) {
    for (int b = a + 1; b < g && rep.containment.pass; ++b) {
      for (int c = 0; c < g && rep.containment.pass; ++c) {
        for (int d = c; d < g && rep.containment.pass; ++d) {
          if ((P(a) & P(b)).is_subset_of(N(c) | N(d))) {
            record_failure(rep.containment, label("P", a, "&P", "", b) + " inside " + label("N", c, "|N", "", d),
                           {P(a) & P(b), N(c) | N(d)});
          } else if ((N(a) & N(b)).is_subset_of(P(c) | P(d))) {
            record_failure(rep.containment, label("N", a, "&N", "", b) + " inside " + label("P", c, "|P", "", d),
                           {N(a) & N(b), P(c) | P(d)});
          }
        }
      }
    }
  }
  Check w1{"weak_1", true, "", {}};
  Check w2{"weak_2", true, "", {}};
  Check w3{"weak_3", true, "", {}};
  Check w4{"weak_4", true, "", {}};
  for (int a = 0; a < g; ++a) {
    for (int b = 0; b < g; ++b) {
      for (int c = 0; c < g; ++c) {
        // Item 1: P_a n P_b not inside N_c. Item 2: N_a n N_b not inside P_c.
        if ((P(a) & P(b)).is_subset_of(N(c))) record_failure(w1, "P&P inside N", {P(a) & P(b), N(c)});
        if ((N(a) & N(b)).is_subset_of(P(c))) record_failure(w2, "N&N inside P", {N(a) & N(b), P(c)});
        // Item 3: P_c not inside N_a u N_b. Item 4: N_c not inside P_a u P_b.
        if (P(c).is_subset_of(N(a) | N(b))) record_failure(w3, "P inside N|N", {P(c), N(a) | N(b)});
        if (N(c).is_subset_of(P(a) | P(b))) record_failure(w4, "N inside P|P", {N(c), P(a) | P(b)});
      }
    }
  }
  rep.weak_items = {w1, w2, w3, w4};
  return rep;
}

double intersection_bound(int ell, double eps) {
  if (ell % 2 == 0) return eps * (2.5 * ell - 2.0);
  return eps * (2.5 * (ell - 1) + 1.0);
}

namespace {

double surjections(int ell, int j) {
  // Inclusion-exclusion count of maps from ell slots onto j labels.
  double total = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= j; ++i) {
    total += ((i % 2) ? -1.0 : 1.0) * binom * std::pow(static_cast<double>(j - i), ell);
    binom = binom * (j - i) / (i + 1);
  }
  return total;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

DeficitProfile intersection_deficit_profile(const RuleFunction& f, int ell, double eps, IntersectionMode mode) {
  const KMUniverse& u = f.universe();
  const int g = u.generator_count();
  if (ell < 1 || ell > g) throw std::domain_error("ell must lie in 1..2k");
  const int n = u.n();
  DeficitProfile out;
  out.ell = ell;
  std::vector<double> freq(static_cast<std::size_t>(n), 0.0);
  double total_weight = 0.0;
  for (std::uint32_t idx = 1; idx < (1U << g); ++idx) {
    const int j = std::popcount(idx);
    double w = 0.0;
    if (mode == IntersectionMode::distinct) {
      if (j != ell) continue;
      w = 1.0 / binomial(g, ell);
    } else {
      if (j > ell) continue;
      w = surjections(ell, j) / std::pow(static_cast<double>(g), ell);
    }
    WideSet p = WideSet::full(n);
    WideSet q = WideSet::full(n);
    for (int a = 0; a < g; ++a) {
      if ((idx >> a) & 1U) {
        p = p & u.positive(a);
        q = q & u.negative(a);
      }
    }
    out.d += w * (f.M() - f.value(p));
    out.s += w * (f.value(q) + f.M());
    for (int i : p.items()) freq[static_cast<std::size_t>(i - 1)] += w;
    total_weight += w;
  }
  out.bound = intersection_bound(ell, eps);
  out.within_bound = out.d + out.s <= out.bound + 1e-9;
  const auto [lo, hi] = std::minmax_element(freq.begin(), freq.end());
  out.item_frequency_min = *lo / total_weight;
  out.item_frequency_max = *hi / total_weight;
  return out;
}

KaltonRatio kalton_ratio(const RuleFunction& f, std::uint64_t samples, std::uint64_t seed) {
  const KMUniverse& u = f.universe();
  const SetFunction sf = f.as_set_function();
  const auto cert = zero_closest_certificate(sf, u.ps(), u.ns());
  if (!cert.ok) throw std::runtime_error(f.name() + ": support certificate failed; delta is not M");
  KaltonRatio out;
  out.delta = f.M();
  if (u.n() <= kMaxExactPairItems) {
    out.eps = modularity_eps(to_table(sf), f.claim().variant).eps;
  } else {
    const auto rep = km_certificates(f, 0, seed, VerifyLevel::sampled, samples);
    out.eps = rep.max_sampled_violation;
  }
  out.ratio = out.eps > 0 ? out.delta / out.eps : 0.0;
  return out;
}

}  // namespace modkit
