#include "semilab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace semilab {

std::string_view to_string(StructureHint hint) noexcept {
  switch (hint) {
    case StructureHint::Dense: return "Dense";
    case StructureHint::Diagonal: return "Diagonal";
    case StructureHint::DiagonalPlusFirstColumn: return "DiagonalPlusFirstColumn";
    case StructureHint::Shift: return "Shift";
  }
  return "Dense";
}

StructureHint structure_from_string(std::string_view name) {
  if (name == "Dense") return StructureHint::Dense;
  if (name == "Diagonal") return StructureHint::Diagonal;
  if (name == "DiagonalPlusFirstColumn") return StructureHint::DiagonalPlusFirstColumn;
  if (name == "Shift") return StructureHint::Shift;
  throw Error(ErrorCode::InvalidArgument, "unknown structure hint '" + std::string(name) + "'");
}

namespace {

bool allowed(StructureHint hint, Index i, Index j) {
  switch (hint) {
    case StructureHint::Dense: return true;
    case StructureHint::Diagonal: return i == j;
    case StructureHint::DiagonalPlusFirstColumn: return i == j || j == 0;
    case StructureHint::Shift: return (i == 0 && (j == 0 || j == 1)) || i == j + 1;
  }
  return true;
}

}  // namespace

OperatorMatrix::OperatorMatrix(CMatrix entries, StructureHint hint) : entries_(std::move(entries)), hint_(hint) {
  if (entries_.rows() != entries_.cols()) throw Error(ErrorCode::DimensionMismatch, "operator must be square");
  if (entries_.rows() < 1) throw Error(ErrorCode::DimensionTooSmall, "operator dimension must be positive");
  if (hint_ == StructureHint::Dense) return;
  for (Index j = 0; j < entries_.cols(); ++j) {
    for (Index i = 0; i < entries_.rows(); ++i) {
      if (entries_(i, j) != Complex(0) && !allowed(hint_, i, j)) {
        throw Error(ErrorCode::InvalidStructure, "entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                                     ") is nonzero under hint " + std::string(to_string(hint_)));
      }
    }
  }
}

OperatorMatrix OperatorMatrix::identity(Index dim) {
  return OperatorMatrix(CMatrix::Identity(dim, dim), StructureHint::Diagonal);
}

OperatorMatrix OperatorMatrix::zero(Index dim) {
  return OperatorMatrix(CMatrix::Zero(dim, dim), StructureHint::Diagonal);
}

OperatorMatrix OperatorMatrix::diagonal(const CVector& d) {
  return OperatorMatrix(d.asDiagonal().toDenseMatrix(), StructureHint::Diagonal);
}

Index OperatorMatrix::faithful_dim() const noexcept {
  return hint_ == StructureHint::Shift ? dim() - 1 : dim();
}

TruncVector apply(const OperatorMatrix& t, const TruncVector& x) {
  if (t.dim() != x.dim()) throw Error(ErrorCode::DimensionMismatch, "apply: operator and vector dims differ");
  return TruncVector(t.entries() * x.coords(), x.space());
}

OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "compose: dims differ");
  const bool diag = a.structure() == StructureHint::Diagonal && b.structure() == StructureHint::Diagonal;
  return OperatorMatrix(a.entries() * b.entries(), diag ? StructureHint::Diagonal : StructureHint::Dense);
}

namespace {

OperatorNormReport spectral_norm(const CMatrix& t, const ToleranceConfig& tol) {
  constexpr int kMaxIterations = 20000;
  const Index n = t.cols();
  const CMatrix gram = t.adjoint() * t;
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(1.0 / static_cast<Real>(i + 1), 0.25 / static_cast<Real>(n + i));
  v.normalize();

  Real estimate = 0;
  for (int it = 0; it < kMaxIterations; ++it) {
    CVector w = gram * v;
    const Real next = w.norm();
    if (next == 0) return {0, SpaceTag::L2, 0};
    w /= next;
    const bool converged = it > 0 && std::abs(next - estimate) <= tol.spectral_tol * next;
    v = std::move(w);
    estimate = next;
    if (converged) {
      OperatorNormReport out{std::sqrt(estimate), SpaceTag::L2, 0};
      v.cwiseAbs().maxCoeff(&out.achieving_index);
      return out;
    }
  }
  throw Error(ErrorCode::ConvergenceFailure, "power iteration for the l2 operator norm did not converge");
}

}  // namespace

OperatorNormReport op_norm(const OperatorMatrix& t, SpaceTag space, const ToleranceConfig& tol) {
  switch (space) {
    case SpaceTag::C0: {
      const auto r = max_row_sum(t.entries());
      return {r.value, space, r.index};
    }
    case SpaceTag::L1: {
      const auto r = max_col_sum(t.entries());
      return {r.value, space, r.index};
    }
    case SpaceTag::L2:
      return spectral_norm(t.entries(), tol);
  }
  return {};
}

IsometryCheck isometry_check_sampled(const OperatorMatrix& t, SpaceTag space, int trials, std::uint64_t seed,
                                     const ToleranceConfig& tol) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "isometry check needs at least one trial");
  const Index n = t.dim();
  const Index domain = t.faithful_dim();
  IsometryCheck out;

  auto record = [&](const CVector& x) {
    const Real dev = std::abs(seq_norm(t.entries() * x, space) - seq_norm(x, space));
    out.worst_deviation = std::max(out.worst_deviation, dev);
    ++out.samples;
  };

  // Basis vectors first; for diagonal operators this is already exact.
  for (Index k = 0; k < domain; ++k) record(CVector::Unit(n, k));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> modulus(0.0, 1.0);
  std::uniform_real_distribution<Real> phase(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < trials; ++trial) {
    CVector x = CVector::Zero(n);
    for (Index i = 0; i < domain; ++i) x(i) = std::polar(modulus(rng), phase(rng));
    const Real nx = seq_norm(x, space);
    if (nx == 0) continue;
    x /= nx;
    record(x);
  }
  out.passed = out.worst_deviation <= tol.eq_tol;
  return out;
}

OperatorMatrix shift_isometry(Index dim) {
  if (dim < 3) throw Error(ErrorCode::DimensionTooSmall, "shift isometry needs dim >= 3");
  CMatrix m = CMatrix::Zero(dim, dim);
  m(0, 0) = 0.5;
  m(0, 1) = 0.5;
  for (Index i = 0; i + 1 < dim; ++i) m(i + 1, i) = 1.0;
  return OperatorMatrix(std::move(m), StructureHint::Shift);
}

OperatorMatrix signed_permutation(const std::vector<Index>& perm, const CVector& phases) {
  const auto n = static_cast<Index>(perm.size());
  if (phases.size() != n) throw Error(ErrorCode::LengthMismatch, "one phase per permuted column");
  std::vector<bool> seen(perm.size(), false);
  CMatrix m = CMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const Index i = perm[static_cast<std::size_t>(j)];
    if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)]) {
      throw Error(ErrorCode::InvalidArgument, "not a permutation");
    }
    seen[static_cast<std::size_t>(i)] = true;
    m(i, j) = phases(j);
  }
  return OperatorMatrix(std::move(m));
}

std::optional<DisjointnessWitness> disjointness_violation_witness(const OperatorMatrix& t,
                                                                  const ToleranceConfig& tol) {
  const Index n = t.dim();
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      TruncVector x = TruncVector::basis(n, j);
      TruncVector y = TruncVector::basis(n, k);
      TruncVector tx(t.entries().col(j), SpaceTag::C0);
      TruncVector ty(t.entries().col(k), SpaceTag::C0);
      if (is_disjoint(x, y, tol) && !is_disjoint(tx, ty, tol)) {
        return DisjointnessWitness{j, k, std::move(x), std::move(y), std::move(tx), std::move(ty)};
      }
    }
  }
  return std::nullopt;
}

nlohmann::json to_json(const OperatorMatrix& t) {
  nlohmann::json j{{"dim", t.dim()}, {"structure_hint", std::string(to_string(t.structure()))}};
  switch (t.structure()) {
    case StructureHint::Dense: {
      CVector flat(t.dim() * t.dim());
      for (Index i = 0; i < t.dim(); ++i) flat.segment(i * t.dim(), t.dim()) = t.entries().row(i).transpose();
      j["entries"] = complex_array_to_json(flat);
      break;
    }
    case StructureHint::Diagonal:
      j["diagonal"] = complex_array_to_json(t.entries().diagonal());
      break;
    case StructureHint::DiagonalPlusFirstColumn:
      j["diagonal"] = complex_array_to_json(t.entries().diagonal());
      j["first_column"] = complex_array_to_json(t.entries().col(0));
      break;
    case StructureHint::Shift:
      break;
  }
  return j;
}

OperatorMatrix operator_from_json(const nlohmann::json& j) {
  const Index n = j.at("dim").get<Index>();
  if (n < 1) throw Error(ErrorCode::DimensionTooSmall, "operator dimension must be positive");
  const StructureHint hint = structure_from_string(j.at("structure_hint").get<std::string>());
  auto expect_len = [](const CVector& v, Index len) {
    if (v.size() != len) throw Error(ErrorCode::LengthMismatch, "operator parameter list has the wrong length");
  };
  switch (hint) {
    case StructureHint::Dense: {
      const CVector flat = complex_array_from_json(j.at("entries"));
      expect_len(flat, n * n);
      CMatrix m(n, n);
      for (Index i = 0; i < n; ++i) m.row(i) = flat.segment(i * n, n).transpose();
      return OperatorMatrix(std::move(m));
    }
    case StructureHint::Diagonal: {
      const CVector d = complex_array_from_json(j.at("diagonal"));
      expect_len(d, n);
      return OperatorMatrix::diagonal(d);
    }
    case StructureHint::DiagonalPlusFirstColumn: {
      const CVector d = complex_array_from_json(j.at("diagonal"));
      const CVector c = complex_array_from_json(j.at("first_column"));
      expect_len(d, n);
      expect_len(c, n);
      CMatrix m = CMatrix::Zero(n, n);
      m.col(0) = c;
      m.diagonal().tail(n - 1) = d.tail(n - 1);
      if (c(0) != d(0)) throw Error(ErrorCode::InvalidArgument, "first_column[0] must equal diagonal[0]");
      return OperatorMatrix(std::move(m), hint);
    }
    case StructureHint::Shift:
      return shift_isometry(n);
  }
  throw Error(ErrorCode::InvalidArgument, "unreachable structure hint");
}

}  // namespace semilab
