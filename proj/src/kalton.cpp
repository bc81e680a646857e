#include <algorithm>
#include <cmath>
#include <map>

#include "modkit/lp.hpp"
#include "modkit/metrics.hpp"
#include "modkit/random.hpp"

namespace modkit {

KaltonRatio kalton_ratio(const SetFunction& f, Variant variant) {
  KaltonRatio out;
  out.eps = modularity_eps(f, variant).eps;
  const LinearFit fit = closest_linear(f);
  out.delta = fit.delta;
  // eps = 0 forces f linear; both eps and delta are then round-off, so
  // compare eps against the size of the fitted coefficients.
  double scale = 1.0 + std::abs(fit.g.c0);
  for (double c : fit.g.coeffs) scale += std::abs(c);
  out.ratio = out.eps > 1e-9 * scale ? out.delta / out.eps : 0.0;
  return out;
}

namespace {

/// Polytope {f : |violation(S,T)| <= 1 for all pairs} with f(empty) = f({i}) = 0.
struct SearchPolytope {
  int n = 0;
  std::vector<int> var_of_mask;
  std::vector<std::uint64_t> mask_of_var;
  LpProblem lp;

  explicit SearchPolytope(int n_) : n(n_) {
    const std::uint64_t size = std::uint64_t{1} << n;
    var_of_mask.assign(size, -1);
    for (std::uint64_t m = 0; m < size; ++m) {
      if (std::popcount(m) >= 2) {
        var_of_mask[m] = static_cast<int>(mask_of_var.size());
        mask_of_var.push_back(m);
      }
    }
    const int nv = static_cast<int>(mask_of_var.size());
    lp = LpProblem(nv);
    std::fill(lp.free_var.begin(), lp.free_var.end(), 1);
    std::map<std::vector<double>, int> seen;
    for (std::uint64_t s = 0; s < size; ++s) {
      for (std::uint64_t t = s + 1; t < size; ++t) {
        const std::uint64_t both = s & t;
        if (both == s || both == t) continue;
        std::vector<double> row(static_cast<std::size_t>(nv), 0.0);
        const auto put = [&](std::uint64_t m, double c) {
          if (var_of_mask[m] >= 0) row[static_cast<std::size_t>(var_of_mask[m])] += c;
        };
        put(s, 1.0);
        put(t, 1.0);
        put(s | t, -1.0);
        put(both, -1.0);
        const auto nz = std::find_if(row.begin(), row.end(), [](double v) { return v != 0.0; });
        if (nz == row.end()) continue;
        if (*nz < 0) {
          for (double& v : row) v = -v;
        }
        if (!seen.emplace(row, 0).second) continue;
        lp.add_row(row, RowSense::le, 1.0);
        for (double& v : row) v = -v;
        lp.add_row(row, RowSense::le, 1.0);
      }
    }
  }

  SetFunction table_of(const std::vector<double>& x) const {
    std::vector<double> t(var_of_mask.size(), 0.0);
    for (std::size_t v = 0; v < mask_of_var.size(); ++v) t[mask_of_var[v]] = x[v];
    return SetFunction::table(n, std::move(t));
  }
};

struct Scored {
  SetFunction f;
  double ratio = -1.0;
  double delta = 0.0;
  double eps = 0.0;
};

Scored score(const SetFunction& f) {
  Scored s;
  s.f = f;
  s.eps = modularity_eps(f, Variant::strong).eps;
  if (s.eps <= 1e-12) {
    s.ratio = 0.0;
    return s;
  }
  FitOptions opt;
  opt.canonical = false;
  s.delta = closest_linear(f, ScanMode::exact(), opt).delta;
  s.ratio = s.delta / s.eps;
  return s;
}

/// Remove the linear part pinned by f(empty) and singletons, then scale to eps = 1.
SetFunction normalize_for_search(const SetFunction& f) {
  const SetFunction t = to_table(f);
  const auto v = t.table_values();
  const int n = f.n();
  LinearFunction g = LinearFunction::zero(n);
  g.c0 = v[0];
  for (int i = 0; i < n; ++i) g.coeffs[static_cast<std::size_t>(i)] = v[std::size_t{1} << i] - v[0];
  SetFunction r = subtract_linear(t, g);
  const double eps = modularity_eps(r, Variant::strong).eps;
  if (eps <= 0) return r;
  std::vector<double> scaled(r.table_values().begin(), r.table_values().end());
  for (double& x : scaled) x /= eps;
  return SetFunction::table(n, std::move(scaled));
}

}  // namespace

KaltonSearchResult kalton_search(int n, int budget, std::uint64_t seed, const std::optional<SetFunction>& warm_start) {
  if (n < 0 || n > 5) throw CapacityError("kalton_search supports n <= 5, got " + std::to_string(n));
  KaltonSearchResult out;
  out.best = SetFunction::table(n, std::vector<double>(std::size_t{1} << n, 0.0));
  if (n <= 1) return out;  // every function on at most one item is linear

  SearchPolytope poly(n);
  Simplex simplex(poly.lp);
  Rng rng(seed);
  const int nv = static_cast<int>(poly.mask_of_var.size());

  Scored best;
  best.f = out.best;
  best.ratio = 0.0;
  std::optional<std::vector<int>> best_basis;
  if (warm_start) {
    if (warm_start->n() != n) throw std::domain_error("warm start universe mismatch");
    Scored w = score(normalize_for_search(*warm_start));
    if (w.ratio > best.ratio) best = w;
  }

  const auto random_objective = [&] {
    std::vector<double> c(static_cast<std::size_t>(nv));
    for (double& v : c) v = rng.normal();
    return c;
  };

  bool started = false;
  for (int it = 0; it < budget; ++it) {
    const bool perturb = started && best_basis && rng.below(5) == 0;
    LpResult vertex;
    if (perturb) {
      simplex.restore_basis(*best_basis);
      const auto cands = simplex.entering_candidates();
      if (cands.empty()) continue;
      const int col = cands[static_cast<std::size_t>(rng.below(cands.size()))];
      if (!simplex.pivot_in(col)) continue;
      vertex = simplex.current();
    } else {
      const auto c = random_objective();
      vertex = simplex.reoptimize(c);
      started = true;
      if (vertex.status != LpStatus::optimal) continue;
    }
    ++out.vertices;
    Scored s = score(poly.table_of(vertex.x));
    if (s.ratio > best.ratio + 1e-12) {
      best = s;
      best_basis = simplex.basis();
    } else if (!best_basis) {
      best_basis = simplex.basis();
    }
  }
  out.best = best.f;
  out.ratio = best.ratio;
  out.delta = best.delta;
  out.eps = best.eps;
  return out;
}

ReducedPair reduce_pair(const SetFunction& f, const WideSet& s, const WideSet& t) {
  const auto* structure = dynamic_cast<const DualStructure*>(f.evaluator().get());
  if (structure == nullptr) {
    throw UnsupportedFunction("reduce_pair needs a function exposing complement and dual structure");
  }
  ReducedPair out{s, t, {}};
  const auto val = [&](const WideSet& x) { return f.evaluate(x); };
  if (std::abs(val(out.t)) > std::abs(val(out.s))) {
    std::swap(out.s, out.t);
    out.steps.emplace_back("swap");
  }
  if (val(out.s) < 0) {
    out.s = out.s.complement();
    out.t = out.t.complement();
    out.steps.emplace_back("complement");
  }
  if (val(out.s & out.t) > val(out.s | out.t)) {
    out.s = structure->dual(out.s);
    out.t = structure->dual(out.t);
    out.steps.emplace_back("dual");
  }
  return out;
}

}  // namespace modkit
