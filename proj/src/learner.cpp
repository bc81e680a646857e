#include "modkit/learner.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "modkit/metrics.hpp"
#include "modkit/random.hpp"

namespace modkit {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_power_of_two(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::string to_string(LearnMethod m) { return m == LearnMethod::hadamard ? "hadamard" : "lp"; }

WideSet HadamardBasis::plus_set(int row) const {
  WideSet s(n);
  for (int j = 0; j < n; ++j) {
    if (at(row, j) > 0) s.insert(j + 1);
  }
  return s;
}

HadamardBasis hadamard_basis(int n, const std::optional<std::vector<int>>& first_vector) {
  if (!is_power_of_two(n)) throw std::domain_error("Hadamard basis needs a power-of-two size, got " + std::to_string(n));
  if (n > kMaxWideItems) throw CapacityError("Hadamard basis limited to 1024");
  HadamardBasis b;
  b.n = n;
  b.first_vector.assign(static_cast<std::size_t>(n), 1);
  if (first_vector) {
    if (static_cast<int>(first_vector->size()) != n) throw std::domain_error("first vector has the wrong length");
    for (int v : *first_vector) {
      if (v != 1 && v != -1) throw std::domain_error("first vector entries must be +1 or -1");
    }
    b.first_vector = *first_vector;
  }
  b.entries.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // Sylvester: H[i][j] = (-1)^{popcount(i & j)}; row 0 is all ones, so
      // multiplying column j by first_vector[j] makes row 0 equal to it.
      const int sylvester = (std::popcount(static_cast<unsigned>(i & j)) & 1) ? -1 : 1;
      b.entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
          static_cast<std::int8_t>(sylvester * b.first_vector[static_cast<std::size_t>(j)]);
    }
  }
  return b;
}

std::vector<double> decompose(const HadamardBasis& basis, const WideSet& s) {
  if (s.universe() != basis.n) throw std::domain_error("set width does not match the basis");
  const auto items = s.items();
  const double norm = 1.0 / std::sqrt(static_cast<double>(basis.n));
  std::vector<double> lambda(static_cast<std::size_t>(basis.n), 0.0);
  for (int i = 0; i < basis.n; ++i) {
    int dot = 0;
    for (int item : items) dot += basis.at(i, item - 1);
    lambda[static_cast<std::size_t>(i)] = dot * norm;
  }
  return lambda;
}

std::vector<double> recompose(const HadamardBasis& basis, const std::vector<double>& lambda) {
  const double norm = 1.0 / std::sqrt(static_cast<double>(basis.n));
  std::vector<double> v(static_cast<std::size_t>(basis.n), 0.0);
  for (int i = 0; i < basis.n; ++i) {
    for (int j = 0; j < basis.n; ++j) v[static_cast<std::size_t>(j)] += lambda[static_cast<std::size_t>(i)] * basis.at(i, j) * norm;
  }
  return v;
}

std::vector<WideSet> hadamard_query_plan(const HadamardBasis& basis) {
  std::vector<WideSet> plan;
  std::unordered_map<WideSet, int, WideSetHash> seen;
  const auto push = [&](const WideSet& s) {
    if (seen.emplace(s, 0).second) plan.push_back(s);
  };
  push(WideSet(basis.n));
  for (int i = 0; i < basis.n; ++i) {
    const WideSet s = basis.plus_set(i);
    push(s);
    push(s.complement());
  }
  return plan;
}

namespace {

/// Queries f once per distinct set (after mapping through `restrict`).
class QueryCache {
 public:
  QueryCache(const SetFunction& f, int original_n) : f_(f), n_(original_n) {}

  double operator()(const WideSet& padded) {
    WideSet s(n_);
    for (int i : padded.items()) {
      if (i <= n_) s.insert(i);
    }
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    const double v = f_.evaluate(s);
    cache_.emplace(s, v);
    order_.push_back(s);
    return v;
  }

  const std::vector<WideSet>& order() const { return order_; }
  std::vector<FitRow> rows() const {
    std::vector<FitRow> out;
    out.reserve(order_.size());
    for (const auto& s : order_) out.push_back({s, cache_.at(s)});
    return out;
  }

 private:
  const SetFunction& f_;
  int n_;
  std::unordered_map<WideSet, double, WideSetHash> cache_;
  std::vector<WideSet> order_;
};

LearnResult run_learner(const SetFunction& f, const HadamardBasis& basis, LearnMethod method, double delta) {
  const int n = f.n();
  const int np = basis.n;
  const std::uint64_t before = f.query_count();
  QueryCache query(f, n);
  const auto plan = hadamard_query_plan(basis);
  for (const auto& s : plan) query(s);

  LearnResult out;
  out.method = method;
  if (method == LearnMethod::hadamard) {
    std::vector<double> e(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) {
      const WideSet s = basis.plus_set(i);
      e[static_cast<std::size_t>(i)] = query(s) - query(s.complement());
    }
    out.h = LinearFunction::zero(n);
    out.h.c0 = query(WideSet(np));
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int i = 0; i < np; ++i) acc += basis.at(i, j) * e[static_cast<std::size_t>(i)];
      out.h.coeffs[static_cast<std::size_t>(j)] = acc / np;
    }
  } else {
    const auto rows = query.rows();
    const BandFit fit = chebyshev_fit(rows, delta);
    out.feasible = fit.feasible();
    out.h = fit.feasible() ? *fit.g : LinearFunction::zero(n);
  }
  out.queries = query.order();
  out.query_count = f.query_count() - before;
  if (f.kind() == FunctionKind::table) out.query_count = out.queries.size();
  return out;
}

class ExtendedEvaluator final : public Evaluator {
 public:
  ExtendedEvaluator(std::shared_ptr<const Evaluator> f, int padded) : Evaluator(padded), f_(std::move(f)) {}
  double value(const WideSet& s) const override {
    WideSet r(f_->n());
    for (int i : s.items()) {
      if (i <= f_->n()) r.insert(i);
    }
    return f_->value(r);
  }

 private:
  std::shared_ptr<const Evaluator> f_;
};

}  // namespace

LearnResult learn_hadamard(const SetFunction& f) {
  if (!is_power_of_two(f.n())) {
    throw std::domain_error("learn_hadamard needs a power-of-two universe; extend it first (n=" + std::to_string(f.n()) +
                            ")");
  }
  return run_learner(f, hadamard_basis(f.n()), LearnMethod::hadamard, 0.0);
}

LearnResult learn_lp(const SetFunction& f, double delta) {
  if (delta < 0) throw std::domain_error("delta must be nonnegative");
  if (!is_power_of_two(f.n())) return learn_padded(f, LearnMethod::lp, delta);
  return run_learner(f, hadamard_basis(f.n()), LearnMethod::lp, delta);
}

SetFunction extend_power_of_two(const SetFunction& f) {
  if (is_power_of_two(f.n())) return f;
  const int np = next_power_of_two(f.n());
  if (np > kMaxWideItems) throw CapacityError("padded universe exceeds 1024 items");
  return SetFunction::generated(std::make_shared<ExtendedEvaluator>(f.evaluator(), np));
}

LearnResult learn_padded(const SetFunction& f, LearnMethod method, double delta) {
  const int n = f.n();
  const int np = next_power_of_two(n);
  if (np > kMaxWideItems) throw CapacityError("padded universe exceeds 1024 items");
  std::vector<int> first(static_cast<std::size_t>(np), 1);
  for (int j = n; j < np; ++j) first[static_cast<std::size_t>(j)] = -1;
  return run_learner(f, hadamard_basis(np, first), method, delta);
}

double learner_error_bound(int n, int size, double delta) {
  return 2.0 * delta * std::sqrt(static_cast<double>(std::min(size, n - size))) + 4.0 * delta;
}

std::vector<ProfileRow> learner_error_profile(const LinearFunction& h, const SetFunction& f, double delta,
                                              int samples_per_size, std::uint64_t seed) {
  const int n = f.n();
  if (h.n() != n) throw std::domain_error("h and f universe mismatch");
  std::vector<int> sizes;
  for (int t = 0; t <= 10; ++t) {
    const int k = static_cast<int>(std::lround(n * t / 10.0));
    if (sizes.empty() || sizes.back() != k) sizes.push_back(k);
  }
  Rng rng(seed);
  std::vector<ProfileRow> out;
  for (int k : sizes) {
    ProfileRow row;
    row.size = k;
    row.bound = learner_error_bound(n, k, delta);
    for (int s = 0; s < samples_per_size; ++s) {
      const WideSet set = rng.subset_of_size(n, k);
      row.max_err = std::max(row.max_err, std::abs(linear_eval(h, set) - f.evaluator()->value(set)));
      ++row.samples;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace modkit
