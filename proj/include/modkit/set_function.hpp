#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "modkit/item_set.hpp"

namespace modkit {

/// g(S) = c0 + sum of coeffs[i-1] over items i in S.
struct LinearFunction {
  double c0 = 0.0;
  std::vector<double> coeffs;

  LinearFunction() = default;
  LinearFunction(double c0_, std::vector<double> coeffs_) : c0(c0_), coeffs(std::move(coeffs_)) {}
  static LinearFunction zero(int n) { return {0.0, std::vector<double>(static_cast<std::size_t>(n), 0.0)}; }

  int n() const { return static_cast<int>(coeffs.size()); }
};

double linear_eval(const LinearFunction& g, const WideSet& s);

/// Sums c0 + coefficients over a bitmask (n <= 64).
double linear_eval_mask(const LinearFunction& g, std::uint64_t mask);

enum class FunctionKind { table, linear, symmetric, generated, oracle };

std::string to_string(FunctionKind k);

/// Backend of a SetFunction. Implementations must be pure and thread-safe.
class Evaluator {
 public:
  explicit Evaluator(int n) : n_(n) {}
  virtual ~Evaluator() = default;

  int n() const { return n_; }
  virtual double value(const WideSet& s) const = 0;
  /// Fast path for n <= 64.
  virtual double value_mask(std::uint64_t mask) const { return value(WideSet(ItemSet(mask, n_))); }

 private:
  int n_;
};

/// Value oracle over subsets of {1..n} with a shared query counter.
///
/// Copies share the evaluator and the counter. Table lookups are not billed;
/// every other representation bills one query per evaluation.
class SetFunction {
 public:
  SetFunction() = default;

  /// Dense table indexed by mask, n <= 24.
  static SetFunction table(int n, std::vector<double> values);
  static SetFunction linear(LinearFunction g);
  /// Values indexed by cardinality 0..n.
  static SetFunction symmetric(std::vector<double> by_size);
  static SetFunction generated(std::shared_ptr<const Evaluator> ev);
  static SetFunction oracle(int n, std::function<double(const WideSet&)> fn);

  int n() const { return n_; }
  FunctionKind kind() const { return kind_; }
  bool valid() const { return static_cast<bool>(ev_); }

  double evaluate(const WideSet& s) const;
  double evaluate(std::uint64_t mask) const;
  double operator()(const WideSet& s) const { return evaluate(s); }

  std::uint64_t query_count() const { return counter_ ? counter_->load(std::memory_order_relaxed) : 0; }

  /// Table entries (empty unless kind() == table).
  std::span<const double> table_values() const;
  /// Coefficients when kind() == linear.
  const LinearFunction* as_linear() const;
  /// Values by cardinality when kind() == symmetric.
  const std::vector<double>* symmetric_values() const;

  const std::shared_ptr<const Evaluator>& evaluator() const { return ev_; }

 private:
  std::shared_ptr<const Evaluator> ev_;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
  FunctionKind kind_ = FunctionKind::table;
  int n_ = 0;

  void bill() const {
    if (kind_ != FunctionKind::table) counter_->fetch_add(1, std::memory_order_relaxed);
  }
};

/// Materialize a dense table (n <= 24). Evaluates f once per mask.
SetFunction to_table(const SetFunction& f);

/// f - g pointwise, as a generated function over f's universe.
SetFunction subtract_linear(const SetFunction& f, const LinearFunction& g);

/// Scan mode shared by the distance and modularity operations.
struct ScanMode {
  bool sampled = false;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;

  static ScanMode exact() { return {}; }
  static ScanMode sample(std::uint64_t count, std::uint64_t seed) { return {true, count, seed}; }
};

struct DistanceResult {
  double value = 0.0;
  WideSet witness;
  bool exact = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// max_S |f(S) - g(S)|. Exact mode needs n <= 24; sampled mode returns a lower bound.
DistanceResult max_distance(const SetFunction& f, const SetFunction& g, ScanMode mode = ScanMode::exact());

/// Table of g over all masks (n <= 24), built from two half-width partial sums.
std::vector<double> linear_table(const LinearFunction& g);

}  // namespace modkit
