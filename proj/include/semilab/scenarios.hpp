#pragma once

// Executable certificates: each scenario evaluates one claim about the c0
// semigroups on a finite grid and records every check as a labelled
// assertion with the metric it was decided on.

#include "semilab/semigroups.hpp"
#include "semilab/spectral.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace semilab {

struct Assertion {
  std::string label;
  bool passed = false;
  Real metric = 0;
};

struct ScenarioResult {
  std::string name;
  std::string provenance;  // the statement being certified
  std::vector<Assertion> assertions;
  std::map<std::string, Real> info;  // grid resolution, truncation error, ...
  nlohmann::json details = nlohmann::json::object();

  bool overall() const;
  const Assertion* find(std::string_view label) const;
  void check(std::string label, bool passed, Real metric);
};

struct PhaseFit {
  Real omega = 0;
  Real max_residual = 0;
  Real modulus_defect = 0;
};

struct DeltaProbe {
  Real delta = 0;
  std::size_t prefix_points = 0;
  /// max over the prefix of |<T_s e_j, e*_k>|, j != k (row k).
  Real row_max = 0;
  /// max over the prefix of |<T_s e_k, e*_j>|, j != k (column k).
  Real column_max = 0;
  /// max(row_max, column_max); zero for an isometric semigroup.
  Real off_diag_max = 0;
};

/// Tolerances used by the scenarios beyond ToleranceConfig.
struct ScenarioThresholds {
  Real contraction = 1e-12;
  Real semigroup_law = 1e-10;
  Real exp_agreement = 1e-10;
  Real frequency = 1e-8;
  /// Number of grid points used for the quadratic-cost checks.
  std::size_t law_points = 10;
};

/// Checks the c0 example at dimension N >= 4 over `grid`.
ScenarioResult run_example_scenario(Index dim, const TimeGrid& grid, const ToleranceConfig& tol = {},
                                    const ScenarioThresholds& th = {});

/// Fits gamma_k(t) = <T_t e_k, e*_k> by a phase line omega_k t for every k.
/// The unwrapped phase may not jump by more than 0.95 pi between samples, and
/// when `omega_bound` is given, max_gap * omega_bound must stay below pi;
/// violations throw UnwrapAliasing. Requires at least 8 grid points.
std::vector<PhaseFit> recover_frequencies(const SemigroupEvaluator& s, const TimeGrid& grid,
                                          std::optional<Real> omega_bound = std::nullopt);

/// Largest grid prefix on which column k stays below 1/2 off the diagonal,
/// and the off-diagonal mass of row and column k on that prefix. k is
/// zero-based.
DeltaProbe delta_k_probe(const SemigroupEvaluator& s, Index k, const TimeGrid& grid);

/// First norming functional of x whose pairing with T_t x keeps modulus
/// >= 1 - eq_tol on the whole grid. Extreme points of J(x) are tried first,
/// then convex combinations of up to four of them on a simplex grid of step
/// 1/8.
std::optional<DualityWitness> thm2_witness_search(const SemigroupEvaluator& s, const TruncVector& x,
                                                  const TimeGrid& grid,
                                                  const ToleranceConfig& tol = {});

/// Diagonal structure, unimodular diagonal and linear phase of an evaluator,
/// i.e. T_t e_k = e^{i omega_k t} e_k on the grid. With `expected_omega`,
/// recovered frequencies are also compared against it.
ScenarioResult isometric_scenario(const SemigroupEvaluator& s, const TimeGrid& grid,
                                  const std::optional<RVector>& expected_omega = std::nullopt,
                                  const ToleranceConfig& tol = {},
                                  const ScenarioThresholds& th = {});

/// Generator diag(i lambda_k - mu_k) on l2 with mu_1 = 0.
ScenarioResult hilbert_control_scenario(const RVector& lambda, const RVector& mu,
                                        const TimeGrid& grid, const ToleranceConfig& tol = {});

/// Isometry, disjointness violation and non-embeddability checks on c0 for an
/// arbitrary operator.
ScenarioResult isometry_structure_scenario(std::string name, const OperatorMatrix& t, int trials,
                                           std::uint64_t seed, const ToleranceConfig& tol = {});

ScenarioResult shift_isometry_scenario(Index dim, int trials, std::uint64_t seed,
                                       const ToleranceConfig& tol = {});

/// Diagonal phase semigroup on l1 scaled by `amplitude` (1 for the genuine
/// isometric semigroup).
ScenarioResult l1_diagonal_scenario(const RVector& omega, const TimeGrid& grid,
                                    const ToleranceConfig& tol = {}, Real amplitude = 1.0,
                                    const ScenarioThresholds& th = {});

/// c0 distance from T e_k to the unimodular multiples of e_k.
Real distance_from_unimodular_multiples(const OperatorMatrix& t, Index k);

nlohmann::json to_json(const ScenarioResult& r);
nlohmann::json to_json(const PhaseFit& fit);

}  // namespace semilab
