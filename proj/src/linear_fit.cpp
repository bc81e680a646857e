#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "modkit/lp.hpp"
#include "modkit/metrics.hpp"
#include "modkit/parallel.hpp"
#include "modkit/random.hpp"

namespace modkit {

namespace {

/// Active-set listings are truncated here (a linear f has every set active).
constexpr std::size_t kMaxActiveSets = 4096;

std::vector<double> indicator_row(const WideSet& s, int width) {
  std::vector<double> row(static_cast<std::size_t>(width), 0.0);
  row[0] = 1.0;
  for (int i : s.items()) row[static_cast<std::size_t>(i)] = 1.0;
  return row;
}

struct Family {
  std::vector<WideSet> sets;
  std::vector<double> values;
  std::unordered_set<WideSet, WideSetHash> seen;

  bool add(const WideSet& s, double v) {
    if (!seen.insert(s).second) return false;
    sets.push_back(s);
    values.push_back(v);
    return true;
  }
};

struct MinimaxSolution {
  LinearFunction g;
  double t = 0.0;
  FitCertificate cert;
};

/// min t s.t. |f(S) - g(S)| <= t over the family. Variables: c0..cn free, t >= 0.
MinimaxSolution solve_minimax(const Family& fam, int n) {
  const int nv = n + 2;
  LpProblem lp(nv);
  for (int j = 0; j <= n; ++j) lp.free_var[static_cast<std::size_t>(j)] = 1;
  lp.objective[static_cast<std::size_t>(n + 1)] = 1.0;
  for (std::size_t k = 0; k < fam.sets.size(); ++k) {
    auto row = indicator_row(fam.sets[k], nv);
    row[static_cast<std::size_t>(n + 1)] = -1.0;
    lp.add_row(row, RowSense::le, fam.values[k]);  // g - t <= f
    for (int j = 0; j <= n; ++j) row[static_cast<std::size_t>(j)] = -row[static_cast<std::size_t>(j)];
    lp.add_row(row, RowSense::le, -fam.values[k]);  // -g - t <= -f
  }
  const LpResult res = solve_lp(lp);
  if (res.status != LpStatus::optimal) {
    throw std::runtime_error("minimax LP ended with status " + to_string(res.status));
  }
  MinimaxSolution out;
  out.g = LinearFunction(res.x[0], std::vector<double>(res.x.begin() + 1, res.x.begin() + 1 + n));
  out.t = res.x[static_cast<std::size_t>(n + 1)];
  double above = 0.0;
  double below = 0.0;
  for (std::size_t k = 0; k < fam.sets.size(); ++k) {
    const double y_low = std::abs(res.duals[2 * k]);       // f sits at g - t
    const double y_high = std::abs(res.duals[2 * k + 1]);  // f sits at g + t
    if (y_high > 1e-12) {
      out.cert.above.emplace_back(fam.sets[k], y_high);
      above += y_high;
    }
    if (y_low > 1e-12) {
      out.cert.below.emplace_back(fam.sets[k], y_low);
      below += y_low;
    }
  }
  for (auto& [s, w] : out.cert.above) w /= above;
  for (auto& [s, w] : out.cert.below) w /= below;
  return out;
}

/// min sum |c_j| s.t. |f(S) - g(S)| <= band over the family.
std::optional<LinearFunction> solve_least_l1(const Family& fam, int n, double band) {
  const int width = n + 1;
  LpProblem lp(2 * width);
  std::fill(lp.objective.begin(), lp.objective.end(), 1.0);
  for (std::size_t k = 0; k < fam.sets.size(); ++k) {
    const auto ind = indicator_row(fam.sets[k], width);
    std::vector<double> row(static_cast<std::size_t>(2 * width), 0.0);
    for (int j = 0; j < width; ++j) {
      row[static_cast<std::size_t>(j)] = ind[static_cast<std::size_t>(j)];
      row[static_cast<std::size_t>(width + j)] = -ind[static_cast<std::size_t>(j)];
    }
    lp.add_row(row, RowSense::le, fam.values[k] + band);
    for (double& v : row) v = -v;
    lp.add_row(row, RowSense::le, -fam.values[k] + band);
  }
  const LpResult res = solve_lp(lp);
  if (res.status != LpStatus::optimal) return std::nullopt;
  LinearFunction g = LinearFunction::zero(n);
  g.c0 = res.x[0] - res.x[static_cast<std::size_t>(width)];
  for (int j = 1; j <= n; ++j) {
    g.coeffs[static_cast<std::size_t>(j - 1)] =
        res.x[static_cast<std::size_t>(j)] - res.x[static_cast<std::size_t>(width + j)];
  }
  return g;
}

struct ScanHit {
  double worst = -1.0;
  std::uint64_t worst_mask = 0;
  double high = 0.0;  ///< largest f - g
  std::uint64_t high_mask = 0;
  double low = 0.0;  ///< largest g - f
  std::uint64_t low_mask = 0;
};

/// Full-table residual scan; ties go to the smallest mask.
ScanHit scan_residual(std::span<const double> t, const LinearFunction& g) {
  const auto gt = linear_table(g);
  std::vector<ScanHit> parts(thread_count());
  parallel_ranges(t.size(), [&](unsigned w, std::uint64_t b, std::uint64_t e) {
    ScanHit h;
    h.high = -1e300;
    h.low = -1e300;
    for (std::uint64_t m = b; m < e; ++m) {
      const double r = t[m] - gt[m];
      if (r > h.high) {
        h.high = r;
        h.high_mask = m;
      }
      if (-r > h.low) {
        h.low = -r;
        h.low_mask = m;
      }
    }
    parts[w] = h;
  });
  ScanHit out;
  out.high = -1e300;
  out.low = -1e300;
  for (const auto& p : parts) {
    if (p.high > out.high) {
      out.high = p.high;
      out.high_mask = p.high_mask;
    }
    if (p.low > out.low) {
      out.low = p.low;
      out.low_mask = p.low_mask;
    }
  }
  if (out.high > out.low || (out.high == out.low && out.high_mask <= out.low_mask)) {
    out.worst = out.high;
    out.worst_mask = out.high_mask;
  } else {
    out.worst = out.low;
    out.worst_mask = out.low_mask;
  }
  return out;
}

double residual_scale(std::span<const double> t) {
  double m = 0.0;
  for (double v : t) m = std::max(m, std::abs(v));
  return 1.0 + m;
}

void fill_active(LinearFit& fit, std::span<const double> t, int n) {
  const double thr = fit.delta - 1e-7 * (1.0 + fit.delta);
  for (std::uint64_t m = 0; m < t.size() && fit.active_sets.size() < kMaxActiveSets; ++m) {
    if (std::abs(t[m] - linear_eval_mask(fit.g, m)) >= thr) fit.active_sets.push_back(WideSet(ItemSet(m, n)));
  }
}

LinearFit closest_exact(const SetFunction& f, const FitOptions& opt) {
  const int n = f.n();
  if (n > kMaxTableItems) {
    throw CapacityError("exact closest_linear needs n <= " + std::to_string(kMaxTableItems) + ", got " +
                        std::to_string(n));
  }
  const SetFunction table = to_table(f);
  const auto t = table.table_values();
  const double tol = opt.tol * residual_scale(t);
  Family fam;
  const auto seed_mask = [&](std::uint64_t m) { fam.add(WideSet(ItemSet(m, n)), t[m]); };
  seed_mask(0);
  seed_mask(low_bits(n));
  for (int i = 0; i < n; ++i) seed_mask(std::uint64_t{1} << i);
  if (n <= 5) {
    // Tiny universes: one LP over every set beats repeated generation rounds.
    for (std::uint64_t m = 0; m < t.size(); ++m) seed_mask(m);
  }

  LinearFit fit;
  MinimaxSolution sol;
  for (int round = 1;; ++round) {
    sol = solve_minimax(fam, n);
    fit.g = sol.g;
    fit.rounds = round;
    const ScanHit hit = scan_residual(t, sol.g);
    fit.delta = hit.worst;
    if (hit.worst <= sol.t + tol) break;
    if (round >= opt.max_rounds) {
      fit.certificate = sol.cert;
      throw ConvergenceError("closest_linear did not converge in " + std::to_string(opt.max_rounds) + " rounds", fit);
    }
    bool added = false;
    if (hit.high > sol.t + tol) added |= fam.add(WideSet(ItemSet(hit.high_mask, n)), t[hit.high_mask]);
    if (hit.low > sol.t + tol) added |= fam.add(WideSet(ItemSet(hit.low_mask, n)), t[hit.low_mask]);
    if (!added) break;  // violation is numerical noise on an already-present row
  }
  const double delta_star = sol.t;
  fit.certificate = check_certificate(table, sol.cert);

  if (opt.canonical) {
    const double band = delta_star + 1e-12 * residual_scale(t);
    for (int round = 0; round < opt.max_rounds; ++round) {
      auto g = solve_least_l1(fam, n, band);
      if (!g) break;
      const ScanHit hit = scan_residual(t, *g);
      if (hit.worst <= band + tol) {
        // delta stays the phase-one distance; the canonical g may exceed it by LP round-off.
        fit.g = *g;
        break;
      }
      bool added = false;
      if (hit.high > band + tol) added |= fam.add(WideSet(ItemSet(hit.high_mask, n)), t[hit.high_mask]);
      if (hit.low > band + tol) added |= fam.add(WideSet(ItemSet(hit.low_mask, n)), t[hit.low_mask]);
      if (!added) break;
    }
  }
  fit.delta = std::max(fit.delta, 0.0);
  fill_active(fit, t, n);
  fit.exact = true;
  return fit;
}

LinearFit closest_sampled(const SetFunction& f, const ScanMode& mode, const FitOptions& opt) {
  const int n = f.n();
  Family fam;
  const auto add = [&](const WideSet& s) {
    if (!fam.seen.count(s)) fam.add(s, f.evaluate(s));
  };
  add(WideSet(n));
  add(WideSet::full(n));
  for (int i = 1; i <= n; ++i) {
    WideSet s(n);
    s.insert(i);
    add(s);
  }
  Rng rng(mode.seed);
  for (std::uint64_t k = 0; k < mode.count; ++k) add(rng.subset(n));
  const MinimaxSolution sol = solve_minimax(fam, n);
  LinearFit fit;
  fit.g = sol.g;
  fit.delta = sol.t;
  fit.rounds = 1;
  if (opt.canonical) {
    if (auto g = solve_least_l1(fam, n, sol.t * (1 + 1e-9) + 1e-9)) fit.g = *g;
  }
  fit.certificate = check_certificate(f, sol.cert);
  double worst = 0.0;
  for (std::size_t k = 0; k < fam.sets.size(); ++k) {
    worst = std::max(worst, std::abs(fam.values[k] - linear_eval(fit.g, fam.sets[k])));
  }
  fit.delta = worst;
  for (std::size_t k = 0; k < fam.sets.size() && fit.active_sets.size() < kMaxActiveSets; ++k) {
    if (std::abs(fam.values[k] - linear_eval(fit.g, fam.sets[k])) >= worst - 1e-7 * (1 + worst)) {
      fit.active_sets.push_back(fam.sets[k]);
    }
  }
  fit.exact = false;
  fit.samples = mode.count;
  fit.seed = mode.seed;
  return fit;
}

}  // namespace

FitCertificate check_certificate(const SetFunction& f, const FitCertificate& cert) {
  FitCertificate out = cert;
  const int n = f.n();
  std::vector<double> marg(static_cast<std::size_t>(n), 0.0);
  double gap = 0.0;
  for (const auto& [s, w] : cert.above) {
    gap += w * f.evaluator()->value(s);
    for (int i : s.items()) marg[static_cast<std::size_t>(i - 1)] += w;
  }
  for (const auto& [s, w] : cert.below) {
    gap -= w * f.evaluator()->value(s);
    for (int i : s.items()) marg[static_cast<std::size_t>(i - 1)] -= w;
  }
  out.lower_bound = cert.above.empty() || cert.below.empty() ? 0.0 : gap / 2.0;
  out.marginal_gap = 0.0;
  for (double m : marg) out.marginal_gap = std::max(out.marginal_gap, std::abs(m));
  return out;
}

LinearFit closest_linear(const SetFunction& f, ScanMode mode, FitOptions options) {
  if (mode.sampled) return closest_sampled(f, mode, options);
  return closest_exact(f, options);
}

LinearFit chebyshev_fit(std::span<const FitRow> rows) {
  if (rows.empty()) throw std::invalid_argument("chebyshev_fit needs at least one row");
  const int n = rows.front().set.universe();
  Family fam;
  // Duplicate sets keep every target; the family dedup applies only to generated rows.
  for (const auto& r : rows) {
    if (r.set.universe() != n) throw std::domain_error("rows must share the universe size");
    fam.sets.push_back(r.set);
    fam.values.push_back(r.target);
  }
  const MinimaxSolution sol = solve_minimax(fam, n);
  LinearFit fit;
  fit.g = sol.g;
  fit.certificate = sol.cert;
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.target - linear_eval(sol.g, r.set)));
  fit.delta = worst;
  for (const auto& r : rows) {
    if (std::abs(r.target - linear_eval(sol.g, r.set)) >= worst - 1e-7 * (1 + worst)) fit.active_sets.push_back(r.set);
  }
  fit.rounds = 1;
  return fit;
}

BandFit chebyshev_fit(std::span<const FitRow> rows, double band) {
  if (rows.empty()) throw std::invalid_argument("chebyshev_fit needs at least one row");
  if (band < 0) throw std::domain_error("band must be nonnegative");
  const int n = rows.front().set.universe();
  LpProblem lp(n + 1);
  std::fill(lp.free_var.begin(), lp.free_var.end(), 1);
  for (const auto& r : rows) {
    if (r.set.universe() != n) throw std::domain_error("rows must share the universe size");
    auto row = indicator_row(r.set, n + 1);
    lp.add_row(row, RowSense::le, r.target + band);
    for (double& v : row) v = -v;
    lp.add_row(row, RowSense::le, -r.target + band);
  }
  const LpResult res = solve_lp(lp);
  BandFit out;
  if (res.status != LpStatus::optimal) return out;
  LinearFunction g(res.x[0], std::vector<double>(res.x.begin() + 1, res.x.end()));
  for (const auto& r : rows) out.max_residual = std::max(out.max_residual, std::abs(r.target - linear_eval(g, r.set)));
  out.g = std::move(g);
  return out;
}

SupportCertificate zero_closest_certificate(const SetFunction& f, const Collection& ps, const Collection& ns) {
  if (ps.count() == 0 || ns.count() == 0) throw std::invalid_argument("PS and NS must be nonempty");
  const int n = f.n();
  if (ps.universe() != n || ns.universe() != n) throw std::domain_error("collection universe mismatch");
  const auto& ev = *f.evaluator();
  SupportCertificate out;
  out.M = ev.value(ps[0]);
  const double tol = 1e-9 * (1 + std::abs(out.M));
  if (out.M <= 0) throw CertificateError("PS set " + format_set(ps[0]) + " has nonpositive value", ps[0]);
  for (const auto& s : ps.sets()) {
    if (std::abs(ev.value(s) - out.M) > tol) {
      throw CertificateError("PS set " + format_set(s) + " has value " + std::to_string(ev.value(s)) + " != M", s);
    }
  }
  for (const auto& s : ns.sets()) {
    if (std::abs(ev.value(s) + out.M) > tol) {
      throw CertificateError("NS set " + format_set(s) + " has value " + std::to_string(ev.value(s)) + " != -M", s);
    }
  }
  if (const auto* dual = dynamic_cast<const DualStructure*>(f.evaluator().get())) {
    if (std::abs(dual->max_abs() - out.M) > tol) {
      throw CertificateError("PS value differs from the declared bound M", ps[0]);
    }
  } else if (n <= kMaxTableItems) {
    const SetFunction table = to_table(f);
    const auto t = table.table_values();
    for (std::uint64_t m = 0; m < t.size(); ++m) {
      if (std::abs(t[m]) > out.M + tol) {
        const WideSet s(ItemSet(m, n));
        throw CertificateError("set " + format_set(s) + " exceeds M in absolute value", s);
      }
    }
  }

  const auto marginals = [&](const Collection& c, const std::vector<double>& w) {
    std::vector<double> m(static_cast<std::size_t>(n), 0.0);
    for (std::size_t k = 0; k < c.count(); ++k) {
      for (int i : c[k].items()) m[static_cast<std::size_t>(i - 1)] += w[k];
    }
    return m;
  };
  const auto close = [&](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a[i] - b[i]) > 1e-9) return false;
    }
    return true;
  };

  std::vector<double> up(ps.count(), 1.0 / static_cast<double>(ps.count()));
  std::vector<double> un(ns.count(), 1.0 / static_cast<double>(ns.count()));
  auto mp = marginals(ps, up);
  if (close(mp, marginals(ns, un))) {
    out.ok = true;
    out.uniform = true;
    out.weights_pos = std::move(up);
    out.weights_neg = std::move(un);
    out.marginals = std::move(mp);
    return out;
  }

  // Feasibility LP over the two distributions.
  const int np = static_cast<int>(ps.count());
  const int nn = static_cast<int>(ns.count());
  LpProblem lp(np + nn);
  std::vector<double> row(static_cast<std::size_t>(np + nn), 0.0);
  for (int k = 0; k < np; ++k) row[static_cast<std::size_t>(k)] = 1.0;
  lp.add_row(row, RowSense::eq, 1.0);
  std::fill(row.begin(), row.end(), 0.0);
  for (int k = 0; k < nn; ++k) row[static_cast<std::size_t>(np + k)] = 1.0;
  lp.add_row(row, RowSense::eq, 1.0);
  for (int i = 1; i <= n; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    for (int k = 0; k < np; ++k) row[static_cast<std::size_t>(k)] = ps[static_cast<std::size_t>(k)].contains(i) ? 1.0 : 0.0;
    for (int k = 0; k < nn; ++k) {
      row[static_cast<std::size_t>(np + k)] = ns[static_cast<std::size_t>(k)].contains(i) ? -1.0 : 0.0;
    }
    lp.add_row(row, RowSense::eq, 0.0);
  }
  const LpResult res = solve_lp(lp);
  if (res.status != LpStatus::optimal) return out;
  out.weights_pos.assign(res.x.begin(), res.x.begin() + np);
  out.weights_neg.assign(res.x.begin() + np, res.x.end());
  out.marginals = marginals(ps, out.weights_pos);
  out.ok = close(out.marginals, marginals(ns, out.weights_neg));
  return out;
}

SetFunction normalize_zero_closest(const SetFunction& f) {
  const LinearFit fit = closest_linear(f);
  return subtract_linear(f, fit.g);
}

}  // namespace modkit
