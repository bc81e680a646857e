#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modkit/item_set.hpp"
#include "modkit/metrics.hpp"
#include "modkit/set_function.hpp"

namespace modkit {

/// X u Y with |X| = |Y| = k; the nine-case value table on (S n X, S n Y). 2 <= k <= 10.
SetFunction pawlik(int k);

/// Symmetric function valued -eps on the full set and 0 elsewhere.
SetFunction symmetric_example(int n, double eps);

/// n = 4: +1 on {1,2}, {3,4}; -1 on {1,3}, {2,4}; 0 elsewhere.
SetFunction four_item_worstcase();

/// g(S) + delta * s(S) with s(S) = +-1 from a hash of the set (adversarially signed noise).
SetFunction noisy_linear(const LinearFunction& g, double delta, std::uint64_t seed);

/// Coefficients uniform in [-1, 1], seeded.
LinearFunction random_linear(int n, std::uint64_t seed);

/// Items are the balanced +-1 vectors of width 2k (n = C(2k, k)), in
/// lexicographic order with +1 before -1. Generator P_j holds the items whose
/// coordinate j is +1; N_j is its complement.
class KMUniverse {
 public:
  explicit KMUniverse(int k);

  int k() const { return k_; }
  int n() const { return n_; }
  int generator_count() const { return 2 * k_; }

  /// Coordinates of item i (1-based), each +1 or -1.
  const std::vector<int>& vector_of(int item) const { return vectors_[static_cast<std::size_t>(item - 1)]; }
  const WideSet& positive(int j) const { return ps_.sets()[static_cast<std::size_t>(j)]; }
  const WideSet& negative(int j) const { return ns_.sets()[static_cast<std::size_t>(j)]; }
  const Collection& ps() const { return ps_; }
  const Collection& ns() const { return ns_; }

  /// Item whose vector is the negation of item i's.
  int partner(int item) const { return partner_[static_cast<std::size_t>(item - 1)]; }
  WideSet negate(const WideSet& s) const;
  /// Complement of the negation image.
  WideSet dual(const WideSet& s) const;
  /// Image of s under the coordinate permutation perm (coordinate c -> perm[c]).
  WideSet permute(const WideSet& s, const std::vector<int>& perm) const;

 private:
  int k_;
  int n_;
  std::vector<std::vector<int>> vectors_;
  std::vector<int> partner_;
  Collection ps_;
  Collection ns_;
};

KMUniverse km_universe(int k);
WideSet dual_set(const KMUniverse& u, const WideSet& s);

struct Rule {
  std::string name;
  std::function<std::optional<int>(const WideSet&)> apply;
};

struct ModularityClaim {
  Variant variant = Variant::strong;
  int eps = 0;
};

/// Integer-valued function given by an ordered rule program; the first rule
/// that returns a value wins.
class RuleFunction {
 public:
  RuleFunction(std::string name, std::shared_ptr<const KMUniverse> universe, int M, std::vector<Rule> rules,
               ModularityClaim claim);

  const std::string& name() const { return name_; }
  const KMUniverse& universe() const { return *universe_; }
  std::shared_ptr<const KMUniverse> universe_ptr() const { return universe_; }
  int M() const { return M_; }
  const ModularityClaim& claim() const { return claim_; }
  const std::vector<Rule>& rules() const { return rules_; }

  int value(const WideSet& s) const;
  /// Name of the rule that decides s.
  std::string fired_rule(const WideSet& s) const;

  /// Copy with `rule` placed ahead of all others (used as a negative control).
  RuleFunction with_override(Rule rule) const;

  SetFunction as_set_function() const;

 private:
  std::string name_;
  std::shared_ptr<const KMUniverse> universe_;
  int M_;
  std::vector<Rule> rules_;
  ModularityClaim claim_;
};

/// k = 4, M = 2; claimed strongly 2-modular.
RuleFunction km70();
/// k = 3, M = 3; claimed weakly 2-modular.
RuleFunction km20();

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
  std::vector<WideSet> witness;
};

enum class VerifyLevel { sampled, exact };

struct CertificateReport {
  std::vector<Check> checks;
  std::uint64_t samples = 0;
  std::uint64_t pair_samples = 0;
  std::uint64_t seed = 0;
  VerifyLevel level = VerifyLevel::sampled;
  double max_sampled_violation = 0.0;
  double max_structural_violation = 0.0;
  std::optional<double> exact_eps;
  std::optional<double> exact_max_abs;

  bool all_pass() const;
  const Check* find(const std::string& name) const;
};

/// Sets built from the generators: PS, NS and pairwise unions/intersections.
std::vector<WideSet> structural_sets(const KMUniverse& u);

/// Sampled (and optionally exhaustive) checks of the (k, M)-symmetric properties.
CertificateReport km_certificates(const RuleFunction& f, std::uint64_t samples, std::uint64_t seed,
                                  VerifyLevel level = VerifyLevel::sampled, std::uint64_t pair_samples = 0);

struct StructuralReport {
  /// No intersection of two positive generators lies inside a union of two
  /// negative ones, and vice versa.
  Check containment;
  /// The four non-containment items for two positive and two negative generators.
  std::vector<Check> weak_items;
  bool weak_all() const;
};

StructuralReport structural_claims(const KMUniverse& u);

enum class IntersectionMode { distinct, with_repetition };

struct DeficitProfile {
  int ell = 0;
  double d = 0.0;
  double s = 0.0;
  double bound = 0.0;
  bool within_bound = true;
  /// Fraction of intersections containing each item (min / max over items).
  double item_frequency_min = 0.0;
  double item_frequency_max = 0.0;
};

/// Envelope for d_l + s_l of a 1-modular function, scaled by eps.
double intersection_bound(int ell, double eps);

DeficitProfile intersection_deficit_profile(const RuleFunction& f, int ell, double eps,
                                            IntersectionMode mode = IntersectionMode::distinct);

/// Ratio for a rule function: delta = M (certified by the support
/// distributions), eps = the claim checked exhaustively when n <= 20, else by
/// sampling.
KaltonRatio kalton_ratio(const RuleFunction& f, std::uint64_t samples = 100000, std::uint64_t seed = 1);

struct AdversarialInstance {
  SetFunction f;
  WideSet hidden;
  LinearFunction g;
  double delta = 0.0;
  double q = 0.0;
  double threshold = 0.0;
};

/// Hidden half-size set T, g = q on T, and f that hides g behind balance tests.
AdversarialInstance adversarial(int n, double delta, std::uint64_t seed);

}  // namespace modkit
