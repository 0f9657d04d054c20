#include "semilab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace semilab {

bool ScenarioResult::overall() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

const Assertion* ScenarioResult::find(std::string_view label) const {
  for (const auto& a : assertions) {
    if (a.label == label) return &a;
  }
  return nullptr;
}

void ScenarioResult::check(std::string label, bool passed, Real metric) {
  assertions.push_back({std::move(label), passed, metric});
}

namespace {

constexpr Real kPi = std::numbers::pi;
// Adjacent unwrapped phase steps closer than this to pi are treated as aliased.
constexpr Real kMaxPhaseStep = 0.95 * kPi;

std::vector<CMatrix> evaluate_on(const SemigroupEvaluator& s, const TimeGrid& grid, Real amplitude = 1.0) {
  std::vector<CMatrix> out;
  out.reserve(grid.size());
  for (Real t : grid.points()) out.push_back(amplitude * evaluate(s, t).entries());
  return out;
}

Real off_diagonal_max(const CMatrix& m) {
  CMatrix off = m;
  off.diagonal().setZero();
  return off.size() == 0 ? 0 : off.cwiseAbs().maxCoeff();
}

PhaseFit fit_phase(const std::vector<Real>& times, const std::vector<Complex>& gamma) {
  PhaseFit fit;
  const std::size_t n = gamma.size();
  std::vector<Real> phase(n);
  phase[0] = std::arg(gamma[0]);
  for (std::size_t i = 0; i < n; ++i) fit.modulus_defect = std::max(fit.modulus_defect, std::abs(std::abs(gamma[i]) - 1.0));
  for (std::size_t i = 1; i < n; ++i) {
    const Real step = std::arg(gamma[i] * std::conj(gamma[i - 1]));
    if (std::abs(step) > kMaxPhaseStep) {
      throw Error(ErrorCode::UnwrapAliasing, "phase step " + std::to_string(step) + " at t = " +
                                                 std::to_string(times[i]) + " is too close to pi");
    }
    phase[i] = phase[i - 1] + step;
  }
  // A grid that does not start at 0 leaves the first phase ambiguous by 2 pi m;
  // pick m from the mean slope.
  if (times[0] > 0) {
    const Real slope = (phase[n - 1] - phase[0]) / (times[n - 1] - times[0]);
    const Real wraps = std::round((slope * times[0] - phase[0]) / (2.0 * kPi));
    for (Real& p : phase) p += 2.0 * kPi * wraps;
  }
  Real num = 0;
  Real den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += times[i] * phase[i];
    den += times[i] * times[i];
  }
  fit.omega = den > 0 ? num / den : 0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.max_residual = std::max(fit.max_residual, std::abs(phase[i] - fit.omega * times[i]));
  }
  return fit;
}

std::vector<PhaseFit> fit_diagonal_phases(const TimeGrid& grid, const std::vector<CMatrix>& mats) {
  if (grid.size() < 8) throw Error(ErrorCode::InvalidGrid, "frequency recovery needs at least 8 grid points");
  const Index n = mats.front().rows();
  std::vector<PhaseFit> fits;
  fits.reserve(static_cast<std::size_t>(n));
  std::vector<Complex> gamma(mats.size());
  for (Index k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < mats.size(); ++i) gamma[i] = mats[i](k, k);
    fits.push_back(fit_phase(grid.points(), gamma));
  }
  return fits;
}

DeltaProbe probe_cached(const TimeGrid& grid, const std::vector<CMatrix>& mats, Index k) {
  DeltaProbe out;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const CMatrix& m = mats[i];
    Real column = 0;
    Real row = 0;
    for (Index j = 0; j < m.rows(); ++j) {
      if (j == k) continue;
      column = std::max(column, std::abs(m(j, k)));
      row = std::max(row, std::abs(m(k, j)));
    }
    if (!(column < 0.5)) break;
    out.delta = grid.points()[i];
    out.prefix_points = i + 1;
    out.column_max = std::max(out.column_max, column);
    out.row_max = std::max(out.row_max, row);
  }
  if (out.prefix_points == 0) {
    throw Error(ErrorCode::NoAdmissiblePrefix, "column " + std::to_string(k + 1) +
                                                   " already has an off-diagonal entry >= 1/2 at the first grid point");
  }
  out.off_diag_max = std::max(out.row_max, out.column_max);
  return out;
}

void add_grid_info(ScenarioResult& r, const TimeGrid& grid) {
  r.info["grid_points"] = static_cast<Real>(grid.size());
  r.info["grid_start"] = grid.front();
  r.info["grid_stop"] = grid.back();
  r.info["grid_max_gap"] = grid.max_gap();
}

nlohmann::json omega_json(const std::vector<PhaseFit>& fits) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t k = 0; k < fits.size(); ++k) {
    nlohmann::json j = to_json(fits[k]);
    j["k"] = k + 1;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

ScenarioResult run_example_scenario(Index dim, const TimeGrid& grid, const ToleranceConfig& tol,
                                    const ScenarioThresholds& th) {
  if (dim < 4) throw Error(ErrorCode::DimensionTooSmall, "example scenario needs dim >= 4");
  tol.validate();
  ScenarioResult r;
  r.name = "example";
  r.provenance =
      "A e_1 = sum_{k>=2} e_k / k, A e_i = -e_i / i generates a C0 contraction semigroup on c0 with "
      "<T_t e_1, e*_1> = 1 for all t, yet A has no eigenvector for a purely imaginary eigenvalue or 0";

  const auto closed = SemigroupEvaluator::closed_form(dim);
  const GeneratorSpec gen = paper_generator(dim);
  const auto expo = SemigroupEvaluator::matrix_exp(gen);
  const TruncVector e1 = TruncVector::basis(dim, 0);
  const DualityWitness e1_star = DualityWitness::coordinate(dim, 0);

  Real contraction = 0;
  Real pairing_dev = 0;
  for (Real t : grid.points()) {
    const OperatorMatrix tt = evaluate(closed, t);
    contraction = std::max(contraction, std::abs(op_norm(tt, SpaceTag::C0).value - 1.0));
    pairing_dev = std::max(pairing_dev, std::abs(pairing(apply(tt, e1), e1_star) - Complex(1.0)));
  }
  r.check("contraction_norm_one", contraction <= th.contraction, contraction);
  r.check("pairing_e1_identically_one", pairing_dev == 0.0, pairing_dev);

  const TimeGrid law = grid.subsample(th.law_points);
  const Real law_residual = max_semigroup_residual(closed, law.points());
  r.check("semigroup_law", law_residual <= th.semigroup_law, law_residual);

  const auto profile = strong_continuity_profile(closed, grid);
  bool monotone = true;
  for (std::size_t i = 1; i < profile.size(); ++i) monotone = monotone && profile[i].defect >= profile[i - 1].defect;
  r.check("continuity_monotone", monotone, profile.size() > 1 ? profile[1].defect : profile[0].defect);

  const SpuriousZeroRow zero = analyze_zero_eigenvalues(gen.matrix, tol);
  r.check("zero_eigenvalue_is_artifact", zero.passed && zero.zero_count == 1, zero.zero_defect);
  r.check("no_purely_imaginary_eigenvalue", zero.imaginary_count == 0, static_cast<Real>(zero.imaginary_count));

  const SpectrumReport spectrum = eig(gen.matrix, tol);
  std::vector<Complex> computed;
  std::vector<Complex> expected{Complex(0)};
  for (const auto& p : spectrum.pairs) computed.push_back(p.value);
  for (Index k = 2; k <= dim; ++k) expected.emplace_back(-1.0 / static_cast<Real>(k), 0.0);
  const EigenvalueMatch match = match_eigenvalues(computed, expected, tol.spectral_tol);
  r.check("spectrum_matches", match.matched, match.max_error);

  Real ek_residual = 0;
  for (Index k = 1; k < dim; ++k) {
    const TruncVector ek = TruncVector::basis(dim, k);
    const CVector res = apply(gen.matrix, ek).coords() + ek.coords() / static_cast<Real>(k + 1);
    ek_residual = std::max(ek_residual, sup_norm(res));
  }
  r.check("basis_eigenvectors", ek_residual <= tol.eq_tol, ek_residual);

  Real exp_gap = 0;
  Real exp_norm = 0;
  for (Real t : law.points()) {
    const CMatrix e = evaluate(expo, t).entries();
    exp_gap = std::max(exp_gap, max_row_sum(e - evaluate(closed, t).entries()).value);
    exp_norm = std::max(exp_norm, max_row_sum(e).value);
  }
  r.check("matrix_exp_matches_closed_form", exp_gap <= th.exp_agreement, exp_gap);
  r.check("matrix_exp_contraction", exp_norm <= 1.0 + th.exp_agreement, exp_norm);

  add_grid_info(r, grid);
  r.info["dim"] = static_cast<Real>(dim);
  r.info["law_points"] = static_cast<Real>(law.size());
  r.info["truncation_error_at_stop"] = closed_form_truncation_error(dim, grid.back());
  r.details["zero_eigenvalue"] = {{"re", zero.zero_value.real()}, {"im", zero.zero_value.imag()},
                                  {"defect", zero.zero_defect}, {"artifact", zero.artifact_flagged}};
  return r;
}

std::vector<PhaseFit> recover_frequencies(const SemigroupEvaluator& s, const TimeGrid& grid,
                                          std::optional<Real> omega_bound) {
  if (grid.size() < 8) throw Error(ErrorCode::InvalidGrid, "frequency recovery needs at least 8 grid points");
  if (omega_bound && grid.max_gap() * std::abs(*omega_bound) >= kPi) {
    throw Error(ErrorCode::UnwrapAliasing, "grid gap times frequency bound reaches pi");
  }
  return fit_diagonal_phases(grid, evaluate_on(s, grid));
}

DeltaProbe delta_k_probe(const SemigroupEvaluator& s, Index k, const TimeGrid& grid) {
  if (k < 0 || k >= s.dim()) throw Error(ErrorCode::InvalidArgument, "delta probe index out of range");
  return probe_cached(grid, evaluate_on(s, grid), k);
}

std::optional<DualityWitness> thm2_witness_search(const SemigroupEvaluator& s, const TruncVector& x,
                                                  const TimeGrid& grid, const ToleranceConfig& tol) {
  const std::vector<DualityWitness> extremes = duality_extreme_points(x, tol);
  if (x.dim() != s.dim()) throw Error(ErrorCode::DimensionMismatch, "witness search: dims differ");
  std::vector<TruncVector> orbit;
  orbit.reserve(grid.size());
  for (Real t : grid.points()) orbit.push_back(apply(evaluate(s, t), x));

  auto qualifies = [&](const DualityWitness& f) {
    for (const auto& y : orbit) {
      if (std::abs(pairing(y, f)) < 1.0 - tol.eq_tol) return false;
    }
    return true;
  };
  for (const auto& f : extremes) {
    if (qualifies(f)) return f;
  }
  if (extremes.size() < 2) return std::nullopt;

  // Interior points of the simplex spanned by the first (at most four)
  // extreme points, weights in multiples of 1/8.
  constexpr int kSteps = 8;
  const std::size_t m = std::min<std::size_t>(extremes.size(), 4);
  const std::vector<DualityWitness> corners(extremes.begin(), extremes.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<int> counts(m, 0);
  std::optional<DualityWitness> found;
  auto recurse = [&](auto&& self, std::size_t idx, int remaining) -> void {
    if (found) return;
    if (idx + 1 == m) {
      counts[idx] = remaining;
      if (std::count(counts.begin(), counts.end(), kSteps) == 1) return;  // a vertex, already tried
      std::vector<Real> w(m);
      for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<Real>(counts[i]) / kSteps;
      DualityWitness g = convex_combination(corners, w);
      if (qualifies(g)) found = std::move(g);
      return;
    }
    for (int c = remaining; c >= 0; --c) {
      counts[idx] = c;
      self(self, idx + 1, remaining - c);
    }
  };
  recurse(recurse, 0, kSteps);
  return found;
}

ScenarioResult isometric_scenario(const SemigroupEvaluator& s, const TimeGrid& grid,
                                  const std::optional<RVector>& expected_omega, const ToleranceConfig& tol,
                                  const ScenarioThresholds& th) {
  tol.validate();
  ScenarioResult r;
  r.name = "isometric";
  r.provenance = "every C0 isometric semigroup on c0 satisfies T_t e_k = e^{i omega_k t} e_k for real omega_k";

  const std::vector<CMatrix> mats = evaluate_on(s, grid);
  Real off = 0;
  for (const auto& m : mats) off = std::max(off, off_diagonal_max(m));
  r.check("diagonal_structure", off <= tol.eq_tol, off);

  const std::vector<PhaseFit> fits = fit_diagonal_phases(grid, mats);
  Real modulus = 0;
  Real phase = 0;
  for (const auto& f : fits) {
    modulus = std::max(modulus, f.modulus_defect);
    phase = std::max(phase, f.max_residual);
  }
  r.check("unimodular_diagonal", modulus <= tol.eq_tol, modulus);
  r.check("linear_phase", phase <= tol.eq_tol, phase);

  Real probe_max = 0;
  Real min_delta = std::numeric_limits<Real>::infinity();
  bool admissible = true;
  for (Index k = 0; k < s.dim(); ++k) {
    try {
      const DeltaProbe p = probe_cached(grid, mats, k);
      probe_max = std::max(probe_max, p.off_diag_max);
      min_delta = std::min(min_delta, p.delta);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoAdmissiblePrefix) throw;
      admissible = false;
    }
  }
  r.check("delta_probe_admissible", admissible, admissible ? 1.0 : 0.0);
  r.check("delta_probe_off_diagonal_vanishes", admissible && probe_max <= tol.eq_tol, probe_max);

  if (expected_omega) {
    if (expected_omega->size() != static_cast<Index>(fits.size())) {
      throw Error(ErrorCode::LengthMismatch, "expected frequencies do not match the semigroup dimension");
    }
    Real err = 0;
    for (std::size_t k = 0; k < fits.size(); ++k) {
      err = std::max(err, std::abs(fits[k].omega - (*expected_omega)(static_cast<Index>(k))));
    }
    r.check("frequencies_match", err <= th.frequency, err);
  }

  add_grid_info(r, grid);
  r.info["dim"] = static_cast<Real>(s.dim());
  if (std::isfinite(min_delta)) r.info["min_delta"] = min_delta;
  r.details["frequencies"] = omega_json(fits);
  r.details["evaluator"] = to_json(s);
  return r;
}

ScenarioResult hilbert_control_scenario(const RVector& lambda, const RVector& mu, const TimeGrid& grid,
                                        const ToleranceConfig& tol) {
  tol.validate();
  if (lambda.size() != mu.size()) throw Error(ErrorCode::LengthMismatch, "lambda and mu lengths differ");
  const Index n = lambda.size();
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "Hilbert control needs at least two coordinates");
  if (mu(0) != 0.0) throw Error(ErrorCode::InvalidArgument, "mu_1 must be 0");
  if ((mu.array() < 0).any()) throw Error(ErrorCode::InvalidArgument, "damping rates must be nonnegative");

  ScenarioResult r;
  r.name = "hilbert";
  r.provenance =
      "on a Hilbert space, lim |<T_t x, J(x)>| = 1 for a unit x forces A x = i lambda x with lambda real";

  CVector diag(n);
  for (Index k = 0; k < n; ++k) diag(k) = Complex(-mu(k), lambda(k));
  const GeneratorSpec gen{OperatorMatrix::diagonal(diag), "diag(i lambda - mu)"};
  const auto s = SemigroupEvaluator::matrix_exp(gen);

  const TruncVector e1 = TruncVector::basis(n, 0, SpaceTag::L2);
  const DualityWitness j_e1 = duality_extreme_points(e1, tol).front();
  Real hyp = 0;
  Real contraction = 0;
  std::vector<CMatrix> mats;
  for (Real t : grid.points()) {
    const OperatorMatrix tt = evaluate(s, t);
    hyp = std::max(hyp, std::abs(std::abs(pairing(apply(tt, e1), j_e1)) - 1.0));
    contraction = std::max(contraction, op_norm(tt, SpaceTag::L2, tol).value);
    mats.push_back(tt.entries());
  }
  r.check("hypothesis_holds_on_e1", hyp <= tol.eq_tol, hyp);

  const CVector ae1 = apply(gen.matrix, e1).coords() - Complex(0.0, lambda(0)) * e1.coords();
  const Real eigen_res = ae1.norm();
  r.check("e1_eigenvector_with_imaginary_eigenvalue", eigen_res <= tol.eq_tol, eigen_res);
  r.check("contraction_l2", contraction <= 1.0 + tol.eq_tol, contraction);

  const auto witness = thm2_witness_search(s, e1, grid, tol);
  r.check("norming_witness_found", witness.has_value(), witness ? 1.0 : 0.0);

  for (Index k = 1; k < n; ++k) {
    if (!(mu(k) > 0)) continue;
    const Real at_stop = std::abs(mats.back()(k, k));
    r.check("hypothesis_fails_on_e" + std::to_string(k + 1), at_stop < 1.0 - tol.eq_tol, at_stop);
  }

  add_grid_info(r, grid);
  r.info["dim"] = static_cast<Real>(n);
  return r;
}

Real distance_from_unimodular_multiples(const OperatorMatrix& t, Index k) {
  if (k < 0 || k >= t.dim()) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  CVector col = t.entries().col(k);
  // min over |c| = 1 of |z - c| is ||z| - 1|.
  const Real on_diag = std::abs(std::abs(col(k)) - 1.0);
  col(k) = 0;
  return std::max(on_diag, sup_norm(col));
}

ScenarioResult isometry_structure_scenario(std::string name, const OperatorMatrix& t, int trials, std::uint64_t seed,
                                           const ToleranceConfig& tol) {
  tol.validate();
  ScenarioResult r;
  r.name = std::move(name);
  r.provenance =
      "an isometry of c0 need not preserve disjoint supports, and one that moves e_1 off its unimodular "
      "multiples is not T_t of any C0 isometric semigroup";

  const IsometryCheck iso = isometry_check_sampled(t, SpaceTag::C0, trials, seed, tol);
  r.check("isometry_sampled", iso.passed, iso.worst_deviation);

  const auto witness = disjointness_violation_witness(t, tol);
  r.check("disjointness_violated", witness.has_value(), witness ? 1.0 : 0.0);
  if (witness) {
    r.details["disjointness_witness"] = {{"first", witness->first + 1},
                                         {"second", witness->second + 1},
                                         {"image_first", to_json(witness->image_x)},
                                         {"image_second", to_json(witness->image_y)}};
  }

  const Real dist = distance_from_unimodular_multiples(t, 0);
  r.check("not_semigroup_embeddable", dist >= 1.0 - 1e-12, dist);

  r.info["dim"] = static_cast<Real>(t.dim());
  r.info["trials"] = static_cast<Real>(trials);
  r.info["samples"] = static_cast<Real>(iso.samples);
  r.info["faithful_dim"] = static_cast<Real>(t.faithful_dim());
  r.info["seed"] = static_cast<Real>(seed);
  return r;
}

ScenarioResult shift_isometry_scenario(Index dim, int trials, std::uint64_t seed, const ToleranceConfig& tol) {
  if (dim < 4) throw Error(ErrorCode::DimensionTooSmall, "shift scenario needs dim >= 4");
  ScenarioResult r = isometry_structure_scenario("shift", shift_isometry(dim), trials, seed, tol);
  const auto witness = disjointness_violation_witness(shift_isometry(dim), tol);
  const bool e1e2 = witness && witness->first == 0 && witness->second == 1;
  r.check("witness_is_e1_e2", e1e2, e1e2 ? 1.0 : 0.0);
  return r;
}

ScenarioResult l1_diagonal_scenario(const RVector& omega, const TimeGrid& grid, const ToleranceConfig& tol,
                                    Real amplitude, const ScenarioThresholds& th) {
  tol.validate();
  ScenarioResult r;
  r.name = "l1";
  r.provenance = "an isometric C0 semigroup on l1 acts as T_t e_n = e^{i omega_n t} e_n";

  const auto s = SemigroupEvaluator::diagonal_phase(omega);
  const std::vector<CMatrix> mats = evaluate_on(s, grid, amplitude);

  Real colsum_dev = 0;
  std::size_t violations = 0;
  for (const auto& m : mats) {
    colsum_dev = std::max(colsum_dev, (m.cwiseAbs().colwise().sum().array() - 1.0).abs().maxCoeff());
    if (disjointness_violation_witness(OperatorMatrix(m), tol)) ++violations;
  }
  r.check("l1_isometry", colsum_dev <= tol.eq_tol, colsum_dev);
  r.check("disjointness_preserved", violations == 0, static_cast<Real>(violations));

  const std::vector<PhaseFit> fits = fit_diagonal_phases(grid, mats);
  Real err = 0;
  for (std::size_t k = 0; k < fits.size(); ++k) err = std::max(err, std::abs(fits[k].omega - omega(static_cast<Index>(k))));
  r.check("frequencies_match", err <= th.frequency, err);

  add_grid_info(r, grid);
  r.info["dim"] = static_cast<Real>(omega.size());
  r.info["amplitude"] = amplitude;
  r.details["frequencies"] = omega_json(fits);
  return r;
}

nlohmann::json to_json(const PhaseFit& fit) {
  return {{"omega", fit.omega}, {"max_residual", fit.max_residual}, {"modulus_defect", fit.modulus_defect}};
}

nlohmann::json to_json(const ScenarioResult& r) {
  nlohmann::json assertions = nlohmann::json::array();
  for (const auto& a : r.assertions) {
    assertions.push_back({{"label", a.label}, {"passed", a.passed}, {"metric", a.metric}});
  }
  nlohmann::json info = nlohmann::json::object();
  for (const auto& [k, v] : r.info) info[k] = v;
  return {{"name", r.name},
          {"provenance", r.provenance},
          {"overall", r.overall() ? "pass" : "fail"},
          {"assertions", assertions},
          {"info", info},
          {"details", r.details}};
}

}  // namespace semilab
