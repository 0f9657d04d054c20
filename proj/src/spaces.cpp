#include "semilab/spaces.hpp"

#include <cmath>
#include <string>

namespace semilab {

std::string_view to_string(SpaceTag tag) noexcept {
  switch (tag) {
    case SpaceTag::C0: return "C0";
    case SpaceTag::L1: return "L1";
    case SpaceTag::L2: return "L2";
  }
  return "C0";
}

SpaceTag space_from_string(std::string_view name) {
  if (name == "C0" || name == "c0") return SpaceTag::C0;
  if (name == "L1" || name == "l1") return SpaceTag::L1;
  if (name == "L2" || name == "l2") return SpaceTag::L2;
  throw Error(ErrorCode::InvalidArgument, "unknown space tag '" + std::string(name) + "'");
}

void ToleranceConfig::validate() const {
  if (!(eq_tol > 0) || !(argmax_tol > 0) || !(spectral_tol > 0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
  }
}

TruncVector::TruncVector(CVector coords, SpaceTag space) : coords_(std::move(coords)), space_(space) {
  if (coords_.size() < 1) throw Error(ErrorCode::DimensionTooSmall, "vector dimension must be positive");
  if (!coords_.allFinite()) throw Error(ErrorCode::InvalidArgument, "vector has non-finite coordinates");
}

TruncVector TruncVector::basis(Index dim, Index k, SpaceTag space) {
  if (k < 0 || k >= dim) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  CVector v = CVector::Zero(dim);
  v(k) = 1.0;
  return TruncVector(std::move(v), space);
}

TruncVector TruncVector::zero(Index dim, SpaceTag space) {
  return TruncVector(CVector::Zero(dim), space);
}

DualityWitness::DualityWitness(CVector coeffs, SpaceTag space) : coeffs_(std::move(coeffs)), space_(space) {
  if (coeffs_.size() < 1) throw Error(ErrorCode::DimensionTooSmall, "witness dimension must be positive");
}

DualityWitness DualityWitness::coordinate(Index dim, Index k, SpaceTag space) {
  if (k < 0 || k >= dim) throw Error(ErrorCode::InvalidArgument, "coordinate index out of range");
  CVector f = CVector::Zero(dim);
  f(k) = 1.0;
  return DualityWitness(std::move(f), space);
}

Real norm(const TruncVector& x) { return seq_norm(x.coords(), x.space()); }

Real dual_norm(const DualityWitness& f) { return dual_seq_norm(f.coeffs(), f.space()); }

Complex pairing(const TruncVector& x, const DualityWitness& f) {
  if (x.dim() != f.base_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "pairing of dim " + std::to_string(x.dim()) +
                                                  " with witness of dim " + std::to_string(f.base_dim()));
  }
  return x.coords().cwiseProduct(f.coeffs()).sum();
}

std::vector<DualityWitness> duality_extreme_points(const TruncVector& x, const ToleranceConfig& tol) {
  const Real n = norm(x);
  if (std::abs(n - 1.0) > tol.eq_tol) {
    throw Error(ErrorCode::NotUnitVector, "norm " + std::to_string(n) + " is not 1");
  }
  std::vector<DualityWitness> out;
  switch (x.space()) {
    case SpaceTag::C0:
      for (Index i = 0; i < x.dim(); ++i) {
        const Real m = std::abs(x[i]);
        if (m >= 1.0 - tol.argmax_tol) {
          CVector f = CVector::Zero(x.dim());
          f(i) = std::conj(x[i]) / m;
          out.emplace_back(std::move(f), SpaceTag::C0);
        }
      }
      break;
    case SpaceTag::L2:
      out.emplace_back(x.coords().conjugate() / n, SpaceTag::L2);
      break;
    case SpaceTag::L1:
      throw Error(ErrorCode::InvalidArgument, "duality extreme points are implemented for C0 and L2 only");
  }
  return out;
}

bool is_disjoint(const TruncVector& x, const TruncVector& y, const ToleranceConfig& tol) {
  if (x.dim() != y.dim()) throw Error(ErrorCode::DimensionMismatch, "is_disjoint on different dimensions");
  for (Index i = 0; i < x.dim(); ++i) {
    if (std::min(std::abs(x[i]), std::abs(y[i])) > tol.argmax_tol) return false;
  }
  return true;
}

DualityWitness convex_combination(const std::vector<DualityWitness>& witnesses,
                                  const std::vector<Real>& weights) {
  if (witnesses.empty() || witnesses.size() != weights.size()) {
    throw Error(ErrorCode::LengthMismatch, "convex_combination needs one weight per witness");
  }
  CVector acc = CVector::Zero(witnesses.front().base_dim());
  Real total = 0;
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    if (witnesses[i].base_dim() != acc.size()) throw Error(ErrorCode::DimensionMismatch, "witness dims differ");
    if (weights[i] < 0) throw Error(ErrorCode::InvalidArgument, "negative convex weight");
    acc += weights[i] * witnesses[i].coeffs();
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "convex weights must sum to 1");
  return DualityWitness(std::move(acc), witnesses.front().space());
}

nlohmann::json complex_array_to_json(const CVector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
  return arr;
}

CVector complex_array_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, "expected an array of [re, im] pairs");
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& p = j[i];
    if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::InvalidArgument, "expected [re, im]");
    v(static_cast<Index>(i)) = Complex(p[0].get<Real>(), p[1].get<Real>());
  }
  return v;
}

nlohmann::json to_json(const TruncVector& x) {
  return {{"space", std::string(to_string(x.space()))}, {"coords", complex_array_to_json(x.coords())}};
}

nlohmann::json to_json(const DualityWitness& f) {
  return {{"space", std::string(to_string(f.space()))}, {"coeffs", complex_array_to_json(f.coeffs())}};
}

TruncVector vector_from_json(const nlohmann::json& j) {
  return TruncVector(complex_array_from_json(j.at("coords")),
                     space_from_string(j.at("space").get<std::string>()));
}

DualityWitness witness_from_json(const nlohmann::json& j) {
  return DualityWitness(complex_array_from_json(j.at("coeffs")),
                        space_from_string(j.at("space").get<std::string>()));
}

}  // namespace semilab
