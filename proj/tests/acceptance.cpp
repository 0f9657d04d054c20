// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "semilab/cli.hpp"
#include "semilab/scenarios.hpp"
#include "semilab/spectral.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

using namespace semilab;

namespace {

// Pinned tolerances and budgets.
constexpr Real kPairingTol = 1e-15;
constexpr Real kContractionTol = 1e-12;
constexpr Real kExpmContractionSlack = 1e-10;
constexpr Real kExpOracleTol = 1e-10;
constexpr Real kLawTol = 1e-10;
constexpr Real kSpectrumTol = 1e-8;
constexpr Real kResidualTol = 1e-8;
constexpr Real kDefectFloor = 0.99;
constexpr Real kFrequencyTol = 1e-8;
constexpr Real kModulusTol = 1e-12;
constexpr Real kDiagonalOffDiagCeil = 1e-10;
constexpr Real kClosedFormOffDiagFloor = 0.2;
constexpr Real kShiftDeviationTol = 1e-14;
constexpr Real kEmbeddingFloor = 1.0 - 1e-12;

constexpr double kPairingBudget = 1.0;
constexpr double kExpOracleBudget = 5.0;
constexpr double kSpectrumBudget = 10.0;
constexpr double kFrequencyBudget = 30.0;

struct Verdict {
  bool passed;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Verdict pairing_identity() {
  Timer timer;
  std::vector<Real> pts(100);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = 10.0 * static_cast<Real>(i) / 99.0;
  const TimeGrid grid(pts);
  const Index n = 64;
  const auto values = trajectory_pairing(SemigroupEvaluator::closed_form(n), TruncVector::basis(n, 0),
                                         DualityWitness(CVector::Unit(n, 0), SpaceTag::C0), grid);
  Real dev = 0;
  for (const Complex& v : values) dev = std::max(dev, std::abs(v - Complex(1)));
  const double secs = timer.seconds();
  return {dev <= kPairingTol && values.size() == 100 && secs < kPairingBudget,
          fmt("max |<T_t e1, e1*> - 1| = %.3g over 100 points, %.3f s", dev, secs)};
}

Verdict contraction_norm() {
  const TimeGrid grid = TimeGrid::lattice(0, 10, 0.1);
  const Index n = 64;
  const auto closed = SemigroupEvaluator::closed_form(n);
  const auto mexp = SemigroupEvaluator::matrix_exp(paper_generator(n));
  Real closed_dev = 0;
  Real mexp_max = 0;
  for (Real t : grid.points()) {
    closed_dev = std::max(closed_dev, std::abs(op_norm(evaluate(closed, t), SpaceTag::C0).value - 1.0));
    mexp_max = std::max(mexp_max, op_norm(evaluate(mexp, t), SpaceTag::C0).value);
  }
  return {closed_dev <= kContractionTol && mexp_max <= 1.0 + kExpmContractionSlack,
          fmt("closed form max |norm - 1| = %.3g, matrix exp max norm - 1 = %.3g", closed_dev, mexp_max - 1.0)};
}

Verdict exponential_oracle() {
  Timer timer;
  Real worst = 0;
  for (Index n : {8, 64}) {
    const auto closed = SemigroupEvaluator::closed_form(n);
    const auto mexp = SemigroupEvaluator::matrix_exp(paper_generator(n));
    for (Real t : {0.1, 1.0, 10.0}) {
      const CMatrix diff = evaluate(mexp, t).entries() - evaluate(closed, t).entries();
      worst = std::max(worst, max_row_sum(diff).value);
    }
  }
  const double secs = timer.seconds();
  return {worst <= kExpOracleTol && secs < kExpOracleBudget, fmt("max c0 gap = %.3g, %.3f s", worst, secs)};
}

Verdict semigroup_law() {
  std::vector<Real> times(10);
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = 5.0 * static_cast<Real>(i) / 9.0;
  const Index n = 32;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<Real> u(-10, 10);
  RVector omega(n);
  for (Index i = 0; i < n; ++i) omega(i) = u(gen);
  const Real closed = max_semigroup_residual(SemigroupEvaluator::closed_form(n), times);
  const Real mexp = max_semigroup_residual(SemigroupEvaluator::matrix_exp(paper_generator(n)), times);
  const Real phase = max_semigroup_residual(SemigroupEvaluator::diagonal_phase(omega), times);
  return {std::max({closed, mexp, phase}) <= kLawTol,
          fmt("closed form %.3g, matrix exp %.3g, diagonal phase %.3g", closed, mexp, phase)};
}

Verdict spectrum() {
  Real match_err = 0;
  Real residual = 0;
  bool matched = true;
  double secs_128 = 0;
  for (Index n = 2; n <= 128; ++n) {
    Timer timer;
    const SpectrumReport r = eig(paper_generator(n).matrix);
    if (n == 128) secs_128 = timer.seconds();
    std::vector<Complex> computed;
    for (const auto& p : r.pairs) computed.push_back(p.value);
    std::vector<Complex> expected{Complex(0)};
    for (Index k = 2; k <= n; ++k) expected.emplace_back(-1.0 / static_cast<Real>(k));
    const EigenvalueMatch m = match_eigenvalues(computed, expected, kSpectrumTol);
    matched = matched && m.matched;
    match_err = std::max(match_err, m.max_error);
    residual = std::max(residual, r.max_residual());
  }
  return {matched && match_err <= kSpectrumTol && residual <= kResidualTol && secs_128 < kSpectrumBudget,
          fmt("N = 2..128: max eigenvalue error %.3g, max residual %.3g, N = 128 in %.3f s", match_err, residual,
              secs_128)};
}

Verdict artifact_detection() {
  const SpuriousZeroReport rep = spurious_zero_analysis({8, 32, 128});
  bool ok = rep.rows.size() == 3;
  Real min_defect = 1;
  std::size_t imaginary = 0;
  for (const auto& row : rep.rows) {
    ok = ok && row.zero_count == 1 && row.zero_defect >= kDefectFloor && row.artifact_flagged;
    min_defect = std::min(min_defect, row.zero_defect);
    imaginary += row.imaginary_count;
  }
  return {ok && imaginary == 0 && rep.passed(),
          fmt("min zero-eigenvector defect %.17g, purely imaginary eigenvalues found: %.0f", min_defect,
              static_cast<double>(imaginary))};
}

Verdict frequency_recovery() {
  Timer timer;
  const TimeGrid grid = TimeGrid::lattice(0, 5, 0.1);
  const Index n = 16;
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<Real> u(-10, 10);
  Real freq_err = 0;
  Real modulus = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    RVector omega(n);
    for (Index i = 0; i < n; ++i) omega(i) = u(gen);
    const auto fits = recover_frequencies(SemigroupEvaluator::diagonal_phase(omega), grid, 10.0);
    for (Index k = 0; k < n; ++k) {
      freq_err = std::max(freq_err, std::abs(fits[static_cast<std::size_t>(k)].omega - omega(k)));
      modulus = std::max(modulus, fits[static_cast<std::size_t>(k)].modulus_defect);
    }
  }
  const double secs = timer.seconds();
  return {freq_err <= kFrequencyTol && modulus <= kModulusTol && secs < kFrequencyBudget,
          fmt("1000 draws: max frequency error %.3g, max modulus defect %.3g, %.2f s", freq_err, modulus, secs)};
}

Verdict delta_separation() {
  const TimeGrid grid = TimeGrid::lattice(0, 5, 0.1);
  const Index n = 16;
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<Real> u(-10, 10);
  Real diagonal_max = 0;
  for (int draw = 0; draw < 100; ++draw) {
    RVector omega(n);
    for (Index i = 0; i < n; ++i) omega(i) = u(gen);
    const auto s = SemigroupEvaluator::diagonal_phase(omega);
    for (Index k = 0; k < n; ++k) diagonal_max = std::max(diagonal_max, delta_k_probe(s, k, grid).off_diag_max);
  }
  const DeltaProbe closed = delta_k_probe(SemigroupEvaluator::closed_form(64), 0, grid);
  const Real two_ln2 = 2.0 * std::numbers::ln2;
  const bool ok = diagonal_max <= kDiagonalOffDiagCeil && closed.off_diag_max >= kClosedFormOffDiagFloor &&
                  std::abs(closed.delta - two_ln2) <= grid.max_gap();
  return {ok, fmt("diagonal off-diagonal max %.3g; closed form k = 1 off-diagonal %.6f at delta %.3f",
                  diagonal_max, closed.off_diag_max, closed.delta)};
}

Verdict witness_search() {
  const TimeGrid grid = TimeGrid::lattice(0, 10, 0.1);
  const Index n = 64;
  const auto closed = SemigroupEvaluator::closed_form(n);
  const auto e1 = thm2_witness_search(closed, TruncVector::basis(n, 0), grid);
  const bool e1_ok = e1.has_value() && e1->coeffs() == CVector::Unit(n, 0);
  const bool e2_none = !thm2_witness_search(closed, TruncVector::basis(n, 1), grid).has_value();

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<Real> u(-10, 10);
  RVector omega(16);
  for (Index i = 0; i < omega.size(); ++i) omega(i) = u(gen);
  const auto phase = SemigroupEvaluator::diagonal_phase(omega);
  int basis_ok = 0;
  for (Index k = 0; k < omega.size(); ++k) {
    const auto f = thm2_witness_search(phase, TruncVector::basis(omega.size(), k), grid);
    if (f && f->coeffs() == CVector::Unit(omega.size(), k)) ++basis_ok;
  }
  return {e1_ok && e2_none && basis_ok == omega.size(),
          fmt("e1 -> e1*: %.0f, e2 -> none: %.0f, diagonal basis witnesses %.0f/16", e1_ok, e2_none, basis_ok)};
}

Verdict shift_check() {
  const Index n = 64;
  const OperatorMatrix t = semilab::shift_isometry(n);
  const IsometryCheck iso = isometry_check_sampled(t, SpaceTag::C0, 1000, 42);
  const auto w = disjointness_violation_witness(t);
  const bool pair = w && w->first == 0 && w->second == 1;
  const Real dist = distance_from_unimodular_multiples(t, 0);
  return {iso.worst_deviation <= kShiftDeviationTol && pair && dist >= kEmbeddingFloor,
          fmt("deviation %.3g over 1000 trials, witness (e1, e2): %.0f, distance %.17g", iso.worst_deviation, pair,
              dist)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  const auto root = std::filesystem::temp_directory_path() / "semilab_acceptance_determinism";
  std::filesystem::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"verify shift --dim 32 --seed 42 --trials 500", "shift.json"},
      {"verify example --dim 64 --grid 0:10:0.1", "example.json"},
      {"verify isometric --omega 1,-2,3.141592 --grid 0:5:0.1", "isometric.json"},
      {"spectrum --dims 8,32", "spectrum.json"},
  };
  int identical = 0;
  for (const auto& [args, file] : runs) {
    std::string first;
    bool same = true;
    for (int rep = 0; rep < 2; ++rep) {
      const auto dir = root / std::to_string(rep);
      const std::string cmd =
          std::string(SEMILAB_CLI_PATH) + " " + args + " --out " + dir.string() + " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) same = false;
      const std::string body = slurp(dir / file);
      if (body.empty()) same = false;
      if (rep == 0) first = body;
      else same = same && body == first;
    }
    if (same) ++identical;
  }
  return {identical == static_cast<int>(runs.size()),
          fmt("%.0f of %.0f commands byte-identical across two runs", identical, static_cast<double>(runs.size()))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"pairing_identity", pairing_identity},
      {"contraction_norm", contraction_norm},
      {"exponential_oracle", exponential_oracle},
      {"semigroup_law", semigroup_law},
      {"spectrum", spectrum},
      {"artifact_detection", artifact_detection},
      {"frequency_recovery", frequency_recovery},
      {"delta_separation", delta_separation},
      {"witness_search", witness_search},
      {"shift_isometry", shift_check},
      {"cli_determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.passed) ++failures;
    std::cout << (v.passed ? "PASS " : "FAIL ") << name << ": " << v.detail << "\n";
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
