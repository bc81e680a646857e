#include "modkit/set_function.hpp"

#include <cmath>
#include <cstdlib>

#include "modkit/parallel.hpp"
#include "modkit/random.hpp"

namespace modkit {

namespace {

class TableEvaluator final : public Evaluator {
 public:
  TableEvaluator(int n, std::vector<double> values) : Evaluator(n), values_(std::move(values)) {}
  double value(const WideSet& s) const override { return values_[s.word(0)]; }
  double value_mask(std::uint64_t mask) const override { return values_[mask]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

class LinearEvaluator final : public Evaluator {
 public:
  explicit LinearEvaluator(LinearFunction g) : Evaluator(g.n()), g_(std::move(g)) {}
  double value(const WideSet& s) const override { return linear_eval(g_, s); }
  double value_mask(std::uint64_t mask) const override { return linear_eval_mask(g_, mask); }
  const LinearFunction& function() const { return g_; }

 private:
  LinearFunction g_;
};

class SymmetricEvaluator final : public Evaluator {
 public:
  explicit SymmetricEvaluator(std::vector<double> by_size)
      : Evaluator(static_cast<int>(by_size.size()) - 1), by_size_(std::move(by_size)) {}
  double value(const WideSet& s) const override { return by_size_[static_cast<std::size_t>(s.size())]; }
  double value_mask(std::uint64_t mask) const override {
    return by_size_[static_cast<std::size_t>(std::popcount(mask))];
  }
  const std::vector<double>& values() const { return by_size_; }

 private:
  std::vector<double> by_size_;
};

class OracleEvaluator final : public Evaluator {
 public:
  OracleEvaluator(int n, std::function<double(const WideSet&)> fn) : Evaluator(n), fn_(std::move(fn)) {}
  double value(const WideSet& s) const override { return fn_(s); }

 private:
  std::function<double(const WideSet&)> fn_;
};

class ResidualEvaluator final : public Evaluator {
 public:
  ResidualEvaluator(std::shared_ptr<const Evaluator> f, LinearFunction g)
      : Evaluator(f->n()), f_(std::move(f)), g_(std::move(g)) {}
  double value(const WideSet& s) const override { return f_->value(s) - linear_eval(g_, s); }
  double value_mask(std::uint64_t mask) const override { return f_->value_mask(mask) - linear_eval_mask(g_, mask); }

 private:
  std::shared_ptr<const Evaluator> f_;
  LinearFunction g_;
};

void check_table_size(int n) {
  if (n < 0 || n > kMaxTableItems) {
    throw CapacityError("dense tables are limited to " + std::to_string(kMaxTableItems) + " items, got " +
                        std::to_string(n));
  }
}

}  // namespace

double linear_eval(const LinearFunction& g, const WideSet& s) {
  if (s.universe() != g.n()) throw std::domain_error("set width does not match the linear function");
  double v = g.c0;
  for (int w = 0; w < s.word_count(); ++w) {
    for (std::uint64_t m = s.word(w); m != 0; m &= m - 1) {
      v += g.coeffs[static_cast<std::size_t>(64 * w + std::countr_zero(m))];
    }
  }
  return v;
}

double linear_eval_mask(const LinearFunction& g, std::uint64_t mask) {
  double v = g.c0;
  for (std::uint64_t m = mask; m != 0; m &= m - 1) v += g.coeffs[static_cast<std::size_t>(std::countr_zero(m))];
  return v;
}

std::string to_string(FunctionKind k) {
  switch (k) {
    case FunctionKind::table: return "table";
    case FunctionKind::linear: return "linear";
    case FunctionKind::symmetric: return "symmetric";
    case FunctionKind::generated: return "generated";
    case FunctionKind::oracle: return "oracle";
  }
  return "unknown";
}

SetFunction SetFunction::table(int n, std::vector<double> values) {
  check_table_size(n);
  if (values.size() != (std::size_t{1} << n)) {
    throw std::domain_error("table for n=" + std::to_string(n) + " needs " + std::to_string(std::size_t{1} << n) +
                            " values, got " + std::to_string(values.size()));
  }
  SetFunction f;
  f.ev_ = std::make_shared<TableEvaluator>(n, std::move(values));
  f.counter_ = std::make_shared<std::atomic<std::uint64_t>>(0);
  f.kind_ = FunctionKind::table;
  f.n_ = n;
  return f;
}

SetFunction SetFunction::linear(LinearFunction g) {
  if (g.n() > kMaxWideItems) throw CapacityError("linear function wider than 1024 items");
  SetFunction f;
  f.n_ = g.n();
  f.ev_ = std::make_shared<LinearEvaluator>(std::move(g));
  f.counter_ = std::make_shared<std::atomic<std::uint64_t>>(0);
  f.kind_ = FunctionKind::linear;
  return f;
}

SetFunction SetFunction::symmetric(std::vector<double> by_size) {
  if (by_size.empty()) throw std::domain_error("symmetric function needs n+1 values");
  if (by_size.size() > static_cast<std::size_t>(kMaxWideItems) + 1) throw CapacityError("symmetric function wider than 1024 items");
  SetFunction f;
  f.n_ = static_cast<int>(by_size.size()) - 1;
  f.ev_ = std::make_shared<SymmetricEvaluator>(std::move(by_size));
  f.counter_ = std::make_shared<std::atomic<std::uint64_t>>(0);
  f.kind_ = FunctionKind::symmetric;
  return f;
}

SetFunction SetFunction::generated(std::shared_ptr<const Evaluator> ev) {
  if (!ev) throw std::invalid_argument("null evaluator");
  SetFunction f;
  f.n_ = ev->n();
  f.ev_ = std::move(ev);
  f.counter_ = std::make_shared<std::atomic<std::uint64_t>>(0);
  f.kind_ = FunctionKind::generated;
  return f;
}

SetFunction SetFunction::oracle(int n, std::function<double(const WideSet&)> fn) {
  if (n < 0 || n > kMaxWideItems) throw CapacityError("oracle universe limited to 1024 items");
  SetFunction f;
  f.n_ = n;
  f.ev_ = std::make_shared<OracleEvaluator>(n, std::move(fn));
  f.counter_ = std::make_shared<std::atomic<std::uint64_t>>(0);
  f.kind_ = FunctionKind::oracle;
  return f;
}

double SetFunction::evaluate(const WideSet& s) const {
  if (s.universe() != n_) {
    throw std::domain_error("set over " + std::to_string(s.universe()) + " items passed to a function over " +
                            std::to_string(n_));
  }
  bill();
  return ev_->value(s);
}

double SetFunction::evaluate(std::uint64_t mask) const {
  if (n_ > kMaxItems) throw CapacityError("mask evaluation needs n <= 64");
  if ((mask & ~low_bits(n_)) != 0) throw std::domain_error("mask has bits outside the universe");
  bill();
  return ev_->value_mask(mask);
}

std::span<const double> SetFunction::table_values() const {
  if (kind_ != FunctionKind::table) return {};
  return static_cast<const TableEvaluator&>(*ev_).values();
}

const LinearFunction* SetFunction::as_linear() const {
  if (kind_ != FunctionKind::linear) return nullptr;
  return &static_cast<const LinearEvaluator&>(*ev_).function();
}

const std::vector<double>* SetFunction::symmetric_values() const {
  if (kind_ != FunctionKind::symmetric) return nullptr;
  return &static_cast<const SymmetricEvaluator&>(*ev_).values();
}

std::vector<double> linear_table(const LinearFunction& g) {
  const int n = g.n();
  check_table_size(n);
  const int lo_bits = n / 2;
  const int hi_bits = n - lo_bits;
  std::vector<double> lo(std::size_t{1} << lo_bits, 0.0);
  std::vector<double> hi(std::size_t{1} << hi_bits, 0.0);
  for (std::size_t m = 1; m < lo.size(); ++m) {
    const int b = std::countr_zero(m);
    lo[m] = lo[m & (m - 1)] + g.coeffs[static_cast<std::size_t>(b)];
  }
  for (std::size_t m = 1; m < hi.size(); ++m) {
    const int b = std::countr_zero(m);
    hi[m] = hi[m & (m - 1)] + g.coeffs[static_cast<std::size_t>(lo_bits + b)];
  }
  std::vector<double> out(std::size_t{1} << n);
  for (std::size_t h = 0; h < hi.size(); ++h) {
    for (std::size_t l = 0; l < lo.size(); ++l) out[(h << lo_bits) | l] = g.c0 + (lo[l] + hi[h]);
  }
  return out;
}

SetFunction to_table(const SetFunction& f) {
  check_table_size(f.n());
  if (f.kind() == FunctionKind::table) return f;
  const std::size_t size = std::size_t{1} << f.n();
  std::vector<double> values(size);
  if (const auto* g = f.as_linear()) {
    // Keep the table bit-identical to direct evaluation.
    for (std::size_t m = 0; m < size; ++m) values[m] = linear_eval_mask(*g, m);
  } else {
    const auto& ev = *f.evaluator();
    parallel_ranges(size, [&](unsigned, std::uint64_t b, std::uint64_t e) {
      for (std::uint64_t m = b; m < e; ++m) values[m] = ev.value_mask(m);
    });
  }
  return SetFunction::table(f.n(), std::move(values));
}

SetFunction subtract_linear(const SetFunction& f, const LinearFunction& g) {
  if (g.n() != f.n()) throw std::domain_error("universe size mismatch");
  if (f.kind() == FunctionKind::table) {
    auto vals = f.table_values();
    std::vector<double> out(vals.begin(), vals.end());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] -= linear_eval_mask(g, m);
    return SetFunction::table(f.n(), std::move(out));
  }
  return SetFunction::generated(std::make_shared<ResidualEvaluator>(f.evaluator(), g));
}

DistanceResult max_distance(const SetFunction& f, const SetFunction& g, ScanMode mode) {
  if (f.n() != g.n()) throw std::domain_error("universe size mismatch");
  const int n = f.n();
  DistanceResult out;
  out.witness = WideSet(n);
  if (!mode.sampled) {
    check_table_size(n);
    const std::size_t size = std::size_t{1} << n;
    const auto& fe = *f.evaluator();
    const auto& ge = *g.evaluator();
    std::vector<std::pair<double, std::uint64_t>> best(thread_count(), {-1.0, 0});
    parallel_ranges(size, [&](unsigned w, std::uint64_t b, std::uint64_t e) {
      double bv = -1.0;
      std::uint64_t bm = 0;
      for (std::uint64_t m = b; m < e; ++m) {
        const double d = std::abs(fe.value_mask(m) - ge.value_mask(m));
        if (d > bv) {
          bv = d;
          bm = m;
        }
      }
      best[w] = {bv, bm};
    });
    // Chunks are ordered by worker, so the first strict maximum is the smallest mask.
    for (const auto& [v, m] : best) {
      if (v > out.value) {
        out.value = v;
        out.witness = WideSet(ItemSet(m, n));
      }
    }
    out.exact = true;
    return out;
  }
  Rng rng(mode.seed);
  out.exact = false;
  out.samples = mode.count;
  out.seed = mode.seed;
  bool first = true;
  for (std::uint64_t i = 0; i < mode.count; ++i) {
    const WideSet s = rng.subset(n);
    const double d = std::abs(f.evaluator()->value(s) - g.evaluator()->value(s));
    if (first || d > out.value) {
      out.value = d;
      out.witness = s;
      first = false;
    }
  }
  return out;
}

}  // namespace modkit
