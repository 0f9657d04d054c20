#pragma once

// Finite-section operators. Column j holds the image of e_j; row i is the
// coordinate functional e*_i. With this convention the c0 operator norm is a
// max row sum and the l1 operator norm a max column sum.

#include "semilab/spaces.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace semilab {

enum class StructureHint { Dense, Diagonal, DiagonalPlusFirstColumn, Shift };

std::string_view to_string(StructureHint hint) noexcept;
StructureHint structure_from_string(std::string_view name);

class OperatorMatrix {
 public:
  /// Throws InvalidStructure when the hint disagrees with the nonzero pattern.
  explicit OperatorMatrix(CMatrix entries, StructureHint hint = StructureHint::Dense);

  static OperatorMatrix identity(Index dim);
  static OperatorMatrix zero(Index dim);
  static OperatorMatrix diagonal(const CVector& d);

  const CMatrix& entries() const noexcept { return entries_; }
  Index dim() const noexcept { return entries_.rows(); }
  StructureHint structure() const noexcept { return hint_; }
  Complex operator()(Index i, Index j) const { return entries_(i, j); }

  /// Number of leading coordinates on which the finite section reproduces the
  /// infinite operator without losing mass past index N. Equal to dim() except
  /// for the shift, whose last column would land on e_{N+1}.
  Index faithful_dim() const noexcept;

 private:
  CMatrix entries_;
  StructureHint hint_;
};

struct OperatorNormReport {
  Real value = 0;
  SpaceTag space = SpaceTag::C0;
  /// Row (c0), column (l1), or dominant coordinate of the top right singular
  /// vector (l2).
  Index achieving_index = 0;
};

struct IsometryCheck {
  bool passed = false;
  Real worst_deviation = 0;
  Index samples = 0;
};

struct DisjointnessWitness {
  Index first = 0;
  Index second = 0;
  TruncVector x;
  TruncVector y;
  TruncVector image_x;
  TruncVector image_y;
};

TruncVector apply(const OperatorMatrix& t, const TruncVector& x);

/// Product a*b (apply b first). The result carries the Dense hint unless both
/// factors are diagonal.
OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b);

/// Exact for c0 and l1. On l2 the largest singular value comes from power
/// iteration on T^H T, stopped at relative change spectral_tol.
OperatorNormReport op_norm(const OperatorMatrix& t, SpaceTag space, const ToleranceConfig& tol = {});

/// Checks ||Tx|| = ||x|| on every basis vector of the faithful domain and then
/// on `trials` random unit vectors drawn from `seed`. Diagonal operators also
/// get the exact structural check max_k ||d_k| - 1|.
IsometryCheck isometry_check_sampled(const OperatorMatrix& t, SpaceTag space, int trials,
                                     std::uint64_t seed, const ToleranceConfig& tol = {});

/// T(sum a_i e_i) = (a_1 + a_2)/2 e_1 + sum a_i e_{i+1}, cut to N x N.
OperatorMatrix shift_isometry(Index dim);

/// Column j of the result is phases[j] * e_{perm[j]}.
OperatorMatrix signed_permutation(const std::vector<Index>& perm, const CVector& phases);

/// First basis pair (e_j, e_k), j < k, whose images overlap.
std::optional<DisjointnessWitness> disjointness_violation_witness(const OperatorMatrix& t,
                                                                  const ToleranceConfig& tol = {});

nlohmann::json to_json(const OperatorMatrix& t);
OperatorMatrix operator_from_json(const nlohmann::json& j);

}  // namespace semilab
