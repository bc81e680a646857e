#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modkit/item_set.hpp"
#include "modkit/set_function.hpp"

namespace modkit {

/// Left vertices 0..2k-1, right vertices 0..right-1. Parallel edges allowed.
struct BipartiteGraph {
  int k = 0;
  int right = 0;
  int r = 0;
  double theta = 0.0;
  std::vector<std::pair<int, int>> edges;

  int left() const { return 2 * k; }
  std::vector<int> left_degrees() const;
  std::vector<int> right_degrees() const;
  /// Bitmask of distinct right neighbours of left vertex v (right <= 64).
  std::uint64_t neighbour_mask(int v) const;
};

/// r copies of each left vertex, shuffled, then dealt round-robin to the right side.
BipartiteGraph sample_biregular(int k, int r, double theta, std::uint64_t seed);

struct ExpansionResult {
  bool ok = true;
  int max_size = 0;
  std::uint64_t subsets_checked = 0;
  /// Left subset minimizing |N(S)| - |S| (first in enumeration order).
  std::uint64_t worst = 0;
  int worst_neighbours = 0;
  int worst_deficiency = 0;  ///< |S| - |N(S)|, positive on failure
};

/// Exhaustive Hall-type check over left subsets of size 1..floor(2k alpha).
ExpansionResult verify_expansion(const BipartiteGraph& g, double alpha);

class ExpansionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ValueAccounting {
  double sources = 0.0;
  double intermediates = 0.0;
  double targets = 0.0;
  double empty_value = 0.0;
  /// Number of extra pieces on each side: 2kr - 2k and 2kr - 2 theta k.
  int split_pieces = 0;
  int merge_pieces = 0;

  /// Both weak-modularity chain inequalities at tolerance eps.
  bool lower_holds(double eps, double tol = 1e-9) const;
  bool upper_holds(double eps, double tol = 1e-9) const;
};

struct Recombination {
  std::vector<WideSet> labels;  ///< per edge, same order as graph edges
  Collection targets;
  int source_frequency = 0;
  bool partition_ok = false;
  bool disjoint_ok = false;
  bool frequency_ok = false;
  ValueAccounting accounting;
};

/// `sets` sets over n items, item i placed in `freq` consecutive sets of a
/// seeded random cyclic order (every item exactly `freq` times).
Collection frequent_collection(int sets, int n, int freq, std::uint64_t seed);

/// Splits each source across its edges via one matching per item and merges
/// the labels at each right vertex.
Recombination recombine(const BipartiteGraph& g, const Collection& sources, const SetFunction& f);

double stirling_base(double c, double d);

struct StirlingBracket {
  double lower = 0.0;
  double upper = 0.0;
  double actual = 0.0;
};
/// Explicit envelope around C(cm, dm).
StirlingBracket stirling_bracket(double c, double d, int m);

/// Per-2k exponential base of the expander failure probability.
double union_bound_rate(double alpha, double r, double theta);

double m_upper_bound(double d, double s, double d2, double s2, double eps, double r, double theta);

double kr(double r, double theta);
double kfirst(double r, double theta);

struct KwMin {
  double value = 0.0;
  double u = 0.0;  ///< d' + s' at the crossing
  bool sign_change = false;
};
/// max over u >= 0 of min(first branch, second branch).
KwMin kw_min(double r, double theta, double r2, double theta2);

/// N2 lookup: alpha in {1/2, 1/4, 1/8, 1/16, 1/32}.
double n2_value(double alpha);
double kprime(double alpha, double r, double theta);

struct ExpanderParams {
  double alpha = 0.0;
  double r = 0.0;
  double theta = 0.0;
};

double ks_v1(double delta, ExpanderParams p1, ExpanderParams p2);
double ks_v2(double delta, ExpanderParams p1, ExpanderParams p2, double threshold = 5.08);

struct Optimum {
  double delta = 0.0;
  double value = 0.0;
};
/// Golden-section search on (lo, hi).
Optimum minimize_ks_v2(ExpanderParams p1, ExpanderParams p2, double threshold = 5.08, double lo = 1.5, double hi = 4.0,
                       double tol = 1e-6);

struct BoundProfile {
  std::string name;
  std::map<std::string, ExpanderParams> tuples;
  std::map<std::string, double> scalars;
};

BoundProfile paper_profile();

struct BoundValue {
  std::string name;
  double value = 0.0;
  std::string params;
};

std::vector<BoundValue> bound_suite(const BoundProfile& profile);

}  // namespace modkit
