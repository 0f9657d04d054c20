#include "semilab/semigroups.hpp"

#include "format.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <string>

namespace semilab {

void GeneratorSpec::validate() const {
  if (matrix.dim() < 2) throw Error(ErrorCode::DimensionTooSmall, "generator needs dim >= 2");
  if (!matrix.entries().allFinite()) throw Error(ErrorCode::InvalidArgument, "generator has non-finite entries");
}

TimeGrid::TimeGrid(std::vector<Real> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCode::InvalidGrid, "time grid is empty");
  if (!std::isfinite(points_.front()) || points_.front() < 0) {
    throw Error(ErrorCode::InvalidGrid, "time grid must start at a finite t >= 0");
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i]) || !(points_[i] > points_[i - 1])) {
      throw Error(ErrorCode::InvalidGrid, "time grid must be strictly increasing");
    }
    max_gap_ = std::max(max_gap_, points_[i] - points_[i - 1]);
  }
}

TimeGrid TimeGrid::lattice(Real start, Real stop, Real step) {
  if (!(step > 0) || !std::isfinite(step)) throw Error(ErrorCode::InvalidGrid, "grid step must be positive");
  if (!(start >= 0) || !(stop > start) || !std::isfinite(stop)) {
    throw Error(ErrorCode::InvalidGrid, "grid needs 0 <= start < stop");
  }
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<Real> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back(start + static_cast<Real>(i) * step);
  return TimeGrid(std::move(pts));
}

TimeGrid TimeGrid::parse(std::string_view text) {
  Real parts[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? text.find(':', pos) : text.size();
    if (end == std::string_view::npos) throw Error(ErrorCode::InvalidGrid, "grid must be start:stop:step");
    const char* first = text.data() + pos;
    const char* last = text.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, parts[i]);
    if (ec != std::errc() || ptr != last) {
      throw Error(ErrorCode::InvalidGrid, "cannot parse grid component in '" + std::string(text) + "'");
    }
    pos = end + 1;
  }
  return lattice(parts[0], parts[1], parts[2]);
}

TimeGrid TimeGrid::subsample(std::size_t count) const {
  if (count < 2 || points_.size() <= count) return *this;
  std::vector<Real> pts;
  std::size_t last = points_.size();
  for (std::size_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * static_cast<double>(points_.size() - 1) / static_cast<double>(count - 1)));
    if (idx != last) pts.push_back(points_[idx]);
    last = idx;
  }
  return TimeGrid(std::move(pts));
}

SemigroupEvaluator::SemigroupEvaluator(Mode mode) : mode_(std::move(mode)) {
  if (const auto* c = std::get_if<ClosedFormPaper>(&mode_)) {
    if (c->dim < 2) throw Error(ErrorCode::DimensionTooSmall, "closed form needs dim >= 2");
    dim_ = c->dim;
  } else if (const auto* m = std::get_if<MatrixExp>(&mode_)) {
    m->generator.validate();
    if (!(m->exp_tol > 0)) throw Error(ErrorCode::InvalidArgument, "exp_tol must be positive");
    dim_ = m->generator.matrix.dim();
  } else {
    const auto& d = std::get<DiagonalPhase>(mode_);
    if (d.omega.size() < 1) throw Error(ErrorCode::DimensionTooSmall, "need at least one frequency");
    if (!d.omega.allFinite()) throw Error(ErrorCode::InvalidArgument, "frequencies must be finite");
    dim_ = d.omega.size();
  }
}

SemigroupEvaluator SemigroupEvaluator::closed_form(Index dim) { return SemigroupEvaluator(ClosedFormPaper{dim}); }

SemigroupEvaluator SemigroupEvaluator::matrix_exp(GeneratorSpec generator, Real exp_tol) {
  return SemigroupEvaluator(MatrixExp{std::move(generator), exp_tol});
}

SemigroupEvaluator SemigroupEvaluator::diagonal_phase(RVector omega) {
  return SemigroupEvaluator(DiagonalPhase{std::move(omega)});
}

std::string_view SemigroupEvaluator::mode_name() const noexcept {
  switch (mode_.index()) {
    case 0: return "ClosedFormPaper";
    case 1: return "MatrixExp";
    default: return "DiagonalPhase";
  }
}

GeneratorSpec paper_generator(Index dim) {
  if (dim < 2) throw Error(ErrorCode::DimensionTooSmall, "generator needs dim >= 2");
  CMatrix a = CMatrix::Zero(dim, dim);
  for (Index k = 1; k < dim; ++k) {
    const Real inv = 1.0 / static_cast<Real>(k + 1);
    a(k, 0) = inv;
    a(k, k) = -inv;
  }
  return {OperatorMatrix(std::move(a), StructureHint::DiagonalPlusFirstColumn), "c0 example generator"};
}

namespace {

OperatorMatrix closed_form_at(Index dim, Real t) {
  CMatrix m = CMatrix::Identity(dim, dim);
  for (Index k = 1; k < dim; ++k) {
    const Real decay = std::exp(-t / static_cast<Real>(k + 1));
    m(k, k) = decay;
    m(k, 0) = 1.0 - decay;
  }
  return OperatorMatrix(std::move(m), StructureHint::DiagonalPlusFirstColumn);
}

}  // namespace

OperatorMatrix evaluate(const SemigroupEvaluator& s, Real t) {
  if (!(t >= 0) || !std::isfinite(t)) throw Error(ErrorCode::NegativeTime, "t = " + std::to_string(t));
  if (const auto* c = std::get_if<ClosedFormPaper>(&s.mode())) return closed_form_at(c->dim, t);
  if (const auto* m = std::get_if<MatrixExp>(&s.mode())) {
    const auto& gen = m->generator.matrix;
    CMatrix e = expm(CMatrix(t * gen.entries()), m->exp_tol);
    if (gen.structure() == StructureHint::Diagonal) return OperatorMatrix(std::move(e), StructureHint::Diagonal);
    return OperatorMatrix(std::move(e));
  }
  const auto& omega = std::get<DiagonalPhase>(s.mode()).omega;
  CVector d(omega.size());
  for (Index k = 0; k < omega.size(); ++k) d(k) = std::polar(1.0, omega(k) * t);
  return OperatorMatrix::diagonal(d);
}

namespace {

Real residual_of(const CMatrix& sum, const CMatrix& first, const CMatrix& second) {
  return max_row_sum(sum - first * second).value;
}

}  // namespace

Real semigroup_residual(const SemigroupEvaluator& s, Real first, Real second) {
  return residual_of(evaluate(s, first + second).entries(), evaluate(s, first).entries(),
                     evaluate(s, second).entries());
}

Real max_semigroup_residual(const SemigroupEvaluator& s, const std::vector<Real>& times) {
  std::map<Real, CMatrix> cache;
  auto at = [&](Real t) -> const CMatrix& {
    auto it = cache.find(t);
    if (it == cache.end()) it = cache.emplace(t, evaluate(s, t).entries()).first;
    return it->second;
  };
  Real worst = 0;
  for (Real a : times) {
    for (Real b : times) worst = std::max(worst, residual_of(at(a + b), at(a), at(b)));
  }
  return worst;
}

std::vector<ContinuitySample> strong_continuity_profile(const SemigroupEvaluator& s, const TimeGrid& grid) {
  std::vector<ContinuitySample> out;
  out.reserve(grid.size());
  for (Real t : grid.points()) {
    const OperatorMatrix m = evaluate(s, t);
    const CMatrix diff = m.entries() - CMatrix::Identity(m.dim(), m.dim());
    // max_k ||(T - I) e_k||_c0 is the largest entry modulus.
    out.push_back({t, diff.cwiseAbs().maxCoeff()});
  }
  return out;
}

std::vector<Complex> trajectory_pairing(const SemigroupEvaluator& s, const TruncVector& x,
                                        const DualityWitness& f, const TimeGrid& grid) {
  if (x.dim() != s.dim() || f.base_dim() != s.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "trajectory_pairing: vector, witness and semigroup dims differ");
  }
  std::vector<Complex> out;
  out.reserve(grid.size());
  for (Real t : grid.points()) out.push_back(pairing(apply(evaluate(s, t), x), f));
  return out;
}

Real closed_form_truncation_error(Index dim, Real t) {
  return 1.0 - std::exp(-t / static_cast<Real>(dim + 1));
}

nlohmann::json to_json(const SemigroupEvaluator& s) {
  if (const auto* c = std::get_if<ClosedFormPaper>(&s.mode())) {
    return {{"mode", "ClosedFormPaper"}, {"dim", c->dim}};
  }
  if (const auto* m = std::get_if<MatrixExp>(&s.mode())) {
    return {{"mode", "MatrixExp"},
            {"exp_tol", m->exp_tol},
            {"label", m->generator.label},
            {"generator", to_json(m->generator.matrix)}};
  }
  const auto& omega = std::get<DiagonalPhase>(s.mode()).omega;
  return {{"mode", "DiagonalPhase"}, {"omega", std::vector<Real>(omega.data(), omega.data() + omega.size())}};
}

SemigroupEvaluator evaluator_from_json(const nlohmann::json& j) {
  const auto mode = j.at("mode").get<std::string>();
  if (mode == "ClosedFormPaper") return SemigroupEvaluator::closed_form(j.at("dim").get<Index>());
  if (mode == "MatrixExp") {
    GeneratorSpec gen{operator_from_json(j.at("generator")), j.value("label", std::string())};
    return SemigroupEvaluator::matrix_exp(std::move(gen), j.value("exp_tol", 1e-12));
  }
  if (mode == "DiagonalPhase") {
    const auto omega = j.at("omega").get<std::vector<Real>>();
    return SemigroupEvaluator::diagonal_phase(
        Eigen::Map<const RVector>(omega.data(), static_cast<Index>(omega.size())));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown evaluator mode '" + mode + "'");
}

void write_trajectory_csv(std::ostream& out, const TimeGrid& grid, const std::vector<Complex>& values) {
  if (values.size() != grid.size()) throw Error(ErrorCode::LengthMismatch, "one value per grid point");
  out << "t,re,im,modulus\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << detail::fmt17(grid.points()[i]) << ',' << detail::fmt17(values[i].real()) << ','
        << detail::fmt17(values[i].imag()) << ',' << detail::fmt17(std::abs(values[i])) << '\n';
  }
}

}  // namespace semilab
