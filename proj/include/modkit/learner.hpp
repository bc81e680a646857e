#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modkit/item_set.hpp"
#include "modkit/set_function.hpp"

namespace modkit {

/// Orthogonal +-1 basis of dimension n (a power of two), Sylvester order,
/// with columns sign-flipped so that row 0 equals the requested first vector.
struct HadamardBasis {
  int n = 0;
  std::vector<std::int8_t> entries;  ///< row-major n x n
  std::vector<int> first_vector;

  int at(int row, int col) const {
    return entries[static_cast<std::size_t>(row) * static_cast<std::size_t>(n) + static_cast<std::size_t>(col)];
  }
  /// Items (1-based) where row i is +1.
  WideSet plus_set(int row) const;
};

bool is_power_of_two(int n);
int next_power_of_two(int n);

HadamardBasis hadamard_basis(int n, const std::optional<std::vector<int>>& first_vector = std::nullopt);

/// Coefficients of the 0/1 indicator of S in the normalized basis y_i = v_i / sqrt(n).
std::vector<double> decompose(const HadamardBasis& basis, const WideSet& s);
/// Inverse of decompose: sum lambda_i y_i.
std::vector<double> recompose(const HadamardBasis& basis, const std::vector<double>& lambda);

enum class LearnMethod { hadamard, lp };
std::string to_string(LearnMethod m);

struct LearnResult {
  LinearFunction h;
  /// Distinct queried sets in first-query order.
  std::vector<WideSet> queries;
  std::uint64_t query_count = 0;
  LearnMethod method = LearnMethod::hadamard;
  /// False only for the LP method when the band admits no linear function.
  bool feasible = true;
};

/// Nonadaptive query plan: empty set, then S_i and its complement for each basis row.
std::vector<WideSet> hadamard_query_plan(const HadamardBasis& basis);

/// Algorithm over a power-of-two universe with the all-ones first vector.
LearnResult learn_hadamard(const SetFunction& f);

/// Band-feasibility LP over the same query plan.
LearnResult learn_lp(const SetFunction& f, double delta);

/// f'(S) = f(S n U) over the next power of two (identity if already one).
SetFunction extend_power_of_two(const SetFunction& f);

/// Runs either learner on the padded universe (first vector +1 on real items,
/// -1 on padding) and restricts h back to the original items.
LearnResult learn_padded(const SetFunction& f, LearnMethod method, double delta = 0.0);

struct ProfileRow {
  int size = 0;
  double max_err = 0.0;
  double bound = 0.0;
  std::uint64_t samples = 0;
};

/// 2 delta sqrt(min(k, n-k)) + 4 delta.
double learner_error_bound(int n, int size, double delta);

/// Max |h - f| on random sets of each decile size, against the error envelope.
std::vector<ProfileRow> learner_error_profile(const LinearFunction& h, const SetFunction& f, double delta,
                                              int samples_per_size, std::uint64_t seed);

}  // namespace modkit
