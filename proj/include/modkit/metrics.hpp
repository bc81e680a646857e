#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "modkit/item_set.hpp"
#include "modkit/set_function.hpp"

namespace modkit {

enum class Variant { weak, strong };
std::string to_string(Variant v);

/// f(S) + f(T) - f(S u T) - f(S n T).
double violation(const SetFunction& f, const WideSet& s, const WideSet& t);

struct PairWitness {
  WideSet s;
  WideSet t;
  /// Signed violation at (s, t).
  double value = 0.0;
};

struct EpsResult {
  double eps = 0.0;
  std::optional<PairWitness> witness;
  bool exact = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct ModularityReport {
  EpsResult weak;
  EpsResult strong;
  double eps_weak() const { return weak.eps; }
  double eps_strong() const { return strong.eps; }
};

/// Largest universe for exhaustive pair scans.
inline constexpr int kMaxExactPairItems = 20;

/// Max |violation| over disjoint (weak) or all (strong) pairs.
///
/// Exact mode scans canonical pairs S.mask < T.mask and reports the
/// lexicographically smallest witness; comparable pairs are skipped since
/// their violation is identically zero. Sampled mode returns a lower bound.
EpsResult modularity_eps(const SetFunction& f, Variant variant, ScanMode mode = ScanMode::exact());
ModularityReport modularity_report(const SetFunction& f, ScanMode mode = ScanMode::exact());

/// Exact epsilon of a symmetric function from its cardinality profile.
EpsResult symmetric_modularity_eps(const SetFunction& f, Variant variant);

/// Weighted extreme sets proving that no linear function is closer than delta.
struct FitCertificate {
  std::vector<std::pair<WideSet, double>> above;  ///< f - g = +delta, weights sum to 1
  std::vector<std::pair<WideSet, double>> below;  ///< f - g = -delta, weights sum to 1
  /// Half the weighted gap; equals delta when the certificate is tight.
  double lower_bound = 0.0;
  /// Largest per-item marginal mismatch between the two distributions.
  double marginal_gap = 0.0;
};

struct LinearFit {
  LinearFunction g;
  double delta = 0.0;
  std::vector<WideSet> active_sets;
  FitCertificate certificate;
  int rounds = 0;
  bool exact = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, LinearFit best) : std::runtime_error(what), best_(std::move(best)) {}
  const LinearFit& best() const { return best_; }

 private:
  LinearFit best_;
};

struct FitOptions {
  int max_rounds = 5000;
  double tol = 1e-9;
  /// Among optimal fits prefer the one with least total |coefficient|. The
  /// reported delta is the minimax value; the canonical g attains it up to tol.
  bool canonical = true;
};

/// Chebyshev-closest linear function by constraint generation.
LinearFit closest_linear(const SetFunction& f, ScanMode mode = ScanMode::exact(), FitOptions options = {});

/// Evaluate the certificate against f: recomputes the bound and marginal gap.
FitCertificate check_certificate(const SetFunction& f, const FitCertificate& cert);

struct FitRow {
  WideSet set;
  double target = 0.0;
};

/// Minimax linear fit over the given rows only.
LinearFit chebyshev_fit(std::span<const FitRow> rows);

/// Any linear function within `band` of every row, or nothing if none exists.
struct BandFit {
  std::optional<LinearFunction> g;
  double max_residual = 0.0;
  bool feasible() const { return g.has_value(); }
};
BandFit chebyshev_fit(std::span<const FitRow> rows, double band);

class CertificateError : public std::runtime_error {
 public:
  CertificateError(const std::string& what, WideSet offending)
      : std::runtime_error(what), offending_(std::move(offending)) {}
  const WideSet& offending() const { return offending_; }

 private:
  WideSet offending_;
};

/// Support structure a (k, M)-symmetric evaluator exposes for reductions.
class DualStructure {
 public:
  virtual ~DualStructure() = default;
  virtual WideSet dual(const WideSet& s) const = 0;
  virtual int max_abs() const = 0;
};

struct SupportCertificate {
  bool ok = false;
  bool uniform = false;
  double M = 0.0;
  std::vector<double> weights_pos;
  std::vector<double> weights_neg;
  /// Per-item probability under the positive distribution (equal to the negative one when ok).
  std::vector<double> marginals;
};

/// Equal-marginal distributions over PS and NS, proving the zero function closest.
SupportCertificate zero_closest_certificate(const SetFunction& f, const Collection& ps, const Collection& ns);

/// f minus its closest linear function.
SetFunction normalize_zero_closest(const SetFunction& f);

struct KaltonRatio {
  double ratio = 0.0;
  double delta = 0.0;
  double eps = 0.0;
};

KaltonRatio kalton_ratio(const SetFunction& f, Variant variant);

struct KaltonSearchResult {
  SetFunction best;
  double ratio = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  int vertices = 0;
};

/// Random-vertex search for functions with large strong ratio (n <= 5).
KaltonSearchResult kalton_search(int n, int budget, std::uint64_t seed,
                                 const std::optional<SetFunction>& warm_start = std::nullopt);

class UnsupportedFunction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ReducedPair {
  WideSet s;
  WideSet t;
  std::vector<std::string> steps;
};

/// Swap / complement / dual steps bringing (S, T) to the canonical case.
ReducedPair reduce_pair(const SetFunction& f, const WideSet& s, const WideSet& t);

}  // namespace modkit
