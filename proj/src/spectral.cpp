#include "semilab/spectral.hpp"

#include "format.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace semilab {

std::string_view to_string(EigenClass c) noexcept {
  switch (c) {
    case EigenClass::Zero: return "Zero";
    case EigenClass::PurelyImaginary: return "PurelyImaginary";
    case EigenClass::NegativeRealPart: return "NegativeRealPart";
    case EigenClass::Other: return "Other";
  }
  return "Other";
}

Real SpectrumReport::max_residual() const {
  Real worst = 0;
  for (const auto& p : pairs) worst = std::max(worst, p.residual);
  return worst;
}

std::size_t SpectrumReport::count(EigenClass c) const {
  return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [c](const EigenPair& p) { return p.cls == c; }));
}

EigenClass classify_eigenvalue(Complex lambda, Real tol) {
  if (std::abs(lambda) <= tol) return EigenClass::Zero;
  if (std::abs(lambda.real()) <= tol) return EigenClass::PurelyImaginary;
  if (lambda.real() < -tol) return EigenClass::NegativeRealPart;
  return EigenClass::Other;
}

Real c0_membership_defect(const TruncVector& v, Real tail_fraction) {
  if (!(tail_fraction > 0) || tail_fraction > 1) {
    throw Error(ErrorCode::InvalidArgument, "tail_fraction must lie in (0, 1]");
  }
  const Real sup = sup_norm(v.coords());
  if (sup == 0) throw Error(ErrorCode::ZeroVector, "c0 membership defect of the zero vector");
  const Index n = v.dim();
  const auto tail = std::clamp<Index>(static_cast<Index>(std::ceil(tail_fraction * static_cast<Real>(n))), 1, n);
  return v.coords().tail(tail).cwiseAbs().minCoeff() / sup;
}

SpectrumReport eig(const OperatorMatrix& a, const ToleranceConfig& tol, const ArtifactRule& rule, Index cap) {
  if (a.dim() > cap) {
    throw Error(ErrorCode::InvalidArgument, "eig: dim " + std::to_string(a.dim()) + " exceeds cap " + std::to_string(cap));
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(a.entries(), /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "complex Schur iteration failed");

  SpectrumReport report;
  report.pairs.reserve(static_cast<std::size_t>(a.dim()));
  for (Index i = 0; i < a.dim(); ++i) {
    const Complex lambda = solver.eigenvalues()(i);
    CVector v = solver.eigenvectors().col(i);
    v.normalize();
    const Real residual = (a.entries() * v - lambda * v).norm();
    if (!(residual <= tol.spectral_tol)) {
      throw Error(ErrorCode::ConvergenceFailure, "eigenpair residual " + std::to_string(residual) + " above tolerance");
    }
    TruncVector vec(std::move(v), SpaceTag::C0);
    const bool artifact = c0_membership_defect(vec, rule.tail_fraction) >= rule.threshold;
    report.pairs.push_back({lambda, std::move(vec), residual, classify_eigenvalue(lambda, tol.spectral_tol), artifact});
  }
  std::stable_sort(report.pairs.begin(), report.pairs.end(), [](const EigenPair& x, const EigenPair& y) {
    if (x.value.real() != y.value.real()) return x.value.real() > y.value.real();
    return x.value.imag() < y.value.imag();
  });
  return report;
}

EigenvalueMatch match_eigenvalues(const std::vector<Complex>& computed, const std::vector<Complex>& expected,
                                  Real tol) {
  EigenvalueMatch out;
  if (computed.size() != expected.size()) return out;
  std::vector<bool> used(computed.size(), false);
  for (const Complex& target : expected) {
    Real best = std::numeric_limits<Real>::infinity();
    std::size_t best_idx = computed.size();
    for (std::size_t i = 0; i < computed.size(); ++i) {
      if (used[i]) continue;
      const Real d = std::abs(computed[i] - target);
      if (d < best) {
        best = d;
        best_idx = i;
      }
    }
    if (best_idx == computed.size()) return out;
    used[best_idx] = true;
    out.max_error = std::max(out.max_error, best);
  }
  out.matched = out.max_error <= tol;
  return out;
}

SpuriousZeroRow analyze_zero_eigenvalues(const OperatorMatrix& a, const ToleranceConfig& tol,
                                         const ArtifactRule& rule) {
  const SpectrumReport report = eig(a, tol, rule);
  SpuriousZeroRow row;
  row.dim = a.dim();
  row.max_residual = report.max_residual();
  row.imaginary_count = report.count(EigenClass::PurelyImaginary);
  bool all_flagged = true;
  Real min_defect = std::numeric_limits<Real>::infinity();
  for (const auto& p : report.pairs) {
    if (p.cls != EigenClass::Zero) continue;
    if (row.zero_count == 0) row.zero_value = p.value;
    ++row.zero_count;
    min_defect = std::min(min_defect, c0_membership_defect(p.vector, rule.tail_fraction));
    all_flagged = all_flagged && p.artifact;
  }
  row.zero_defect = row.zero_count > 0 ? min_defect : 0;
  row.artifact_flagged = row.zero_count > 0 && all_flagged;
  row.passed = row.imaginary_count == 0 && (row.zero_count == 0 || all_flagged);
  return row;
}

bool SpuriousZeroReport::passed() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const SpuriousZeroRow& r) { return r.passed; });
}

SpuriousZeroReport spurious_zero_analysis(const std::vector<Index>& dims, const ToleranceConfig& tol,
                                          const ArtifactRule& rule) {
  SpuriousZeroReport report;
  for (Index n : dims) {
    SpuriousZeroRow row = analyze_zero_eigenvalues(paper_generator(n).matrix, tol, rule);
    // The truncated example generator has exactly one zero eigenvalue.
    row.passed = row.passed && row.zero_count == 1;
    report.rows.push_back(row);
  }
  return report;
}

nlohmann::json to_json(const SpectrumReport& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"re", p.value.real()},
                     {"im", p.value.imag()},
                     {"residual", p.residual},
                     {"class", std::string(to_string(p.cls))},
                     {"artifact_flag", p.artifact}});
  }
  return {{"pairs", pairs}, {"max_residual", r.max_residual()}};
}

nlohmann::json to_json(const SpuriousZeroReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"dim", row.dim},
                    {"zero_count", row.zero_count},
                    {"zero_re", row.zero_value.real()},
                    {"zero_im", row.zero_value.imag()},
                    {"zero_defect", row.zero_defect},
                    {"imaginary_count", row.imaginary_count},
                    {"max_residual", row.max_residual},
                    {"artifact", row.artifact_flagged},
                    {"passed", row.passed}});
  }
  return {{"rows", rows}, {"passed", r.passed()}};
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& r) {
  out << "re,im,residual,class,artifact_flag\n";
  for (const auto& p : r.pairs) {
    out << detail::fmt17(p.value.real()) << ',' << detail::fmt17(p.value.imag()) << ',' << detail::fmt17(p.residual)
        << ',' << to_string(p.cls) << ',' << (p.artifact ? "true" : "false") << '\n';
  }
}

void write_spurious_zero_csv(std::ostream& out, const SpuriousZeroReport& r) {
  out << "dim,zero_count,zero_re,zero_im,zero_defect,imaginary_count,max_residual,artifact,passed\n";
  for (const auto& row : r.rows) {
    out << row.dim << ',' << row.zero_count << ',' << detail::fmt17(row.zero_value.real()) << ','
        << detail::fmt17(row.zero_value.imag()) << ',' << detail::fmt17(row.zero_defect) << ','
        << row.imaginary_count << ',' << detail::fmt17(row.max_residual) << ','
        << (row.artifact_flagged ? "true" : "false") << ',' << (row.passed ? "true" : "false") << '\n';
  }
}

}  // namespace semilab
