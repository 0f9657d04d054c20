#pragma once

#include "semilab/operators.hpp"

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace semilab {

struct GeneratorSpec {
  OperatorMatrix matrix;
  std::string label;

  /// Throws DimensionTooSmall (dim < 2) or InvalidArgument (non-finite entry).
  void validate() const;
};

/// Strictly increasing, nonnegative sample times.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<Real> points);

  /// start, start+step, ... up to stop; stop itself is included when it sits on
  /// the lattice (relative slack 1e-9).
  static TimeGrid lattice(Real start, Real stop, Real step);
  /// Parses "start:stop:step".
  static TimeGrid parse(std::string_view text);

  const std::vector<Real>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  Real front() const { return points_.front(); }
  Real back() const { return points_.back(); }
  Real max_gap() const noexcept { return max_gap_; }

  /// At most `count` points picked at evenly spaced indices, endpoints kept.
  TimeGrid subsample(std::size_t count) const;

 private:
  std::vector<Real> points_;
  Real max_gap_ = 0;
};

/// T_t of the c0 example in closed form: column 1 is
/// (1, 1 - e^{-t/2}, ..., 1 - e^{-t/N}), column i >= 2 is e^{-t/i} e_i.
struct ClosedFormPaper {
  Index dim = 0;
};

struct MatrixExp {
  GeneratorSpec generator;
  Real exp_tol = 1e-12;
};

/// diag(e^{i omega_k t}).
struct DiagonalPhase {
  RVector omega;
};

class SemigroupEvaluator {
 public:
  using Mode = std::variant<ClosedFormPaper, MatrixExp, DiagonalPhase>;

  explicit SemigroupEvaluator(Mode mode);

  static SemigroupEvaluator closed_form(Index dim);
  static SemigroupEvaluator matrix_exp(GeneratorSpec generator, Real exp_tol = 1e-12);
  static SemigroupEvaluator diagonal_phase(RVector omega);

  const Mode& mode() const noexcept { return mode_; }
  Index dim() const noexcept { return dim_; }
  std::string_view mode_name() const noexcept;

 private:
  Mode mode_;
  Index dim_ = 0;
};

/// A: column 1 = (0, 1/2, ..., 1/N), column i >= 2 = -(1/i) e_i.
GeneratorSpec paper_generator(Index dim);

OperatorMatrix evaluate(const SemigroupEvaluator& s, Real t);

/// ||T_{s+t} - T_s T_t|| on c0.
Real semigroup_residual(const SemigroupEvaluator& s, Real first, Real second);

/// Max semigroup_residual over all pairs from `times`, evaluating every
/// distinct time (including the sums) once.
Real max_semigroup_residual(const SemigroupEvaluator& s, const std::vector<Real>& times);

struct ContinuitySample {
  Real t = 0;
  Real defect = 0;
};

/// defect(t) = max_k ||T_t e_k - e_k||_c0, in grid order.
std::vector<ContinuitySample> strong_continuity_profile(const SemigroupEvaluator& s,
                                                        const TimeGrid& grid);

std::vector<Complex> trajectory_pairing(const SemigroupEvaluator& s, const TruncVector& x,
                                        const DualityWitness& f, const TimeGrid& grid);

/// c0 distance between the truncated and the infinite T_t e_1 for the closed
/// form: the sup of the dropped tail, 1 - e^{-t/(N+1)}.
Real closed_form_truncation_error(Index dim, Real t);

nlohmann::json to_json(const SemigroupEvaluator& s);
SemigroupEvaluator evaluator_from_json(const nlohmann::json& j);

/// CSV with header "t,re,im,modulus".
void write_trajectory_csv(std::ostream& out, const TimeGrid& grid,
                          const std::vector<Complex>& values);

}  // namespace semilab
