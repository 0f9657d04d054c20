#pragma once

#include "semilab/semigroups.hpp"

#include <iosfwd>
#include <string_view>
#include <vector>

namespace semilab {

enum class EigenClass { Zero, PurelyImaginary, NegativeRealPart, Other };

std::string_view to_string(EigenClass c) noexcept;

struct EigenPair {
  Complex value;
  TruncVector vector;  // unit l2 norm
  Real residual = 0;   // ||Av - lambda v||_2 / ||v||_2
  EigenClass cls = EigenClass::Other;
  bool artifact = false;
};

struct SpectrumReport {
  std::vector<EigenPair> pairs;

  Real max_residual() const;
  std::size_t count(EigenClass c) const;
};

/// Tail fraction and defect threshold used to flag eigenvectors that do not
/// decay like a c0 sequence.
struct ArtifactRule {
  Real tail_fraction = 0.25;
  Real threshold = 0.99;
};

constexpr Index kDefaultEigCap = 512;

/// Full spectrum of a dense complex matrix with residuals, classes and
/// truncation-artifact flags. Throws InvalidArgument above `cap`,
/// ConvergenceFailure if the solver fails or any residual exceeds
/// spectral_tol.
SpectrumReport eig(const OperatorMatrix& a, const ToleranceConfig& tol = {},
                   const ArtifactRule& rule = {}, Index cap = kDefaultEigCap);

EigenClass classify_eigenvalue(Complex lambda, Real tol);

/// Sup-normalizes v and returns the smallest modulus among the last
/// ceil(tail_fraction * N) coordinates.
Real c0_membership_defect(const TruncVector& v, Real tail_fraction);

struct EigenvalueMatch {
  bool matched = false;
  Real max_error = 0;
};

/// Greedy nearest matching of `computed` against `expected` (same size).
EigenvalueMatch match_eigenvalues(const std::vector<Complex>& computed,
                                  const std::vector<Complex>& expected, Real tol);

/// One row of the truncation-artifact analysis.
struct SpuriousZeroRow {
  Index dim = 0;
  std::size_t zero_count = 0;
  Complex zero_value{};
  Real zero_defect = 0;  // c0 membership defect of the zero eigenvector
  std::size_t imaginary_count = 0;
  Real max_residual = 0;
  bool artifact_flagged = false;
  bool passed = false;
};

struct SpuriousZeroReport {
  std::vector<SpuriousZeroRow> rows;
  bool passed() const;
};

/// Truncation spectrum analysis of a single operator. A row passes when no
/// purely imaginary eigenvalue exists and every zero eigenvalue carries an
/// artifact-flagged eigenvector.
SpuriousZeroRow analyze_zero_eigenvalues(const OperatorMatrix& a, const ToleranceConfig& tol = {},
                                         const ArtifactRule& rule = {});

/// analyze_zero_eigenvalues on the example generator at every requested size.
SpuriousZeroReport spurious_zero_analysis(const std::vector<Index>& dims,
                                          const ToleranceConfig& tol = {},
                                          const ArtifactRule& rule = {});

nlohmann::json to_json(const SpectrumReport& r);
nlohmann::json to_json(const SpuriousZeroReport& r);

/// Header "re,im,residual,class,artifact_flag".
void write_spectrum_csv(std::ostream& out, const SpectrumReport& r);
/// Header "dim,zero_count,zero_re,zero_im,zero_defect,imaginary_count,max_residual,artifact,passed".
void write_spurious_zero_csv(std::ostream& out, const SpuriousZeroReport& r);

}  // namespace semilab
