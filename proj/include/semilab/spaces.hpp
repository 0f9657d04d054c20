#pragma once

// Finite sections of c0, l1 and l2. A vector of dimension N stands for the
// infinite sequence obtained by padding with zeros.

#include "semilab/error.hpp"
#include "semilab/linalg.hpp"

#include <nlohmann/json.hpp>

#include <string_view>
#include <vector>

namespace semilab {

enum class SpaceTag { C0, L1, L2 };

std::string_view to_string(SpaceTag tag) noexcept;
SpaceTag space_from_string(std::string_view name);

/// Conjugate exponent pairing of the spaces in use: c0* = l1, l1* = l-infinity
/// (on finite sections the sup norm), l2* = l2.
template <typename Derived>
typename Derived::RealScalar seq_norm(const Eigen::MatrixBase<Derived>& x, SpaceTag tag) {
  switch (tag) {
    case SpaceTag::C0: return sup_norm(x);
    case SpaceTag::L1: return l1_norm(x);
    case SpaceTag::L2: return l2_norm(x);
  }
  return 0;
}

template <typename Derived>
typename Derived::RealScalar dual_seq_norm(const Eigen::MatrixBase<Derived>& f, SpaceTag primal) {
  switch (primal) {
    case SpaceTag::C0: return l1_norm(f);
    case SpaceTag::L1: return sup_norm(f);
    case SpaceTag::L2: return l2_norm(f);
  }
  return 0;
}

struct ToleranceConfig {
  Real eq_tol = 1e-10;
  Real argmax_tol = 1e-12;
  Real spectral_tol = 1e-8;

  /// Throws InvalidArgument unless every tolerance is strictly positive.
  void validate() const;
};

class TruncVector {
 public:
  TruncVector(CVector coords, SpaceTag space);

  /// The k-th standard basis vector, k zero-based.
  static TruncVector basis(Index dim, Index k, SpaceTag space = SpaceTag::C0);
  static TruncVector zero(Index dim, SpaceTag space = SpaceTag::C0);

  const CVector& coords() const noexcept { return coords_; }
  Index dim() const noexcept { return coords_.size(); }
  SpaceTag space() const noexcept { return space_; }
  Complex operator[](Index i) const { return coords_(i); }

 private:
  CVector coords_;
  SpaceTag space_;
};

/// An element of the dual space in coordinates. `space` is the primal space
/// the functional acts on, which fixes the dual norm.
class DualityWitness {
 public:
  DualityWitness(CVector coeffs, SpaceTag space);

  /// The coordinate functional e*_k (zero-based k).
  static DualityWitness coordinate(Index dim, Index k, SpaceTag space = SpaceTag::C0);

  const CVector& coeffs() const noexcept { return coeffs_; }
  Index base_dim() const noexcept { return coeffs_.size(); }
  SpaceTag space() const noexcept { return space_; }

 private:
  CVector coeffs_;
  SpaceTag space_;
};

Real norm(const TruncVector& x);
Real dual_norm(const DualityWitness& f);

/// Bilinear pairing sum_i x_i f_i. Conjugation, where needed, is carried by
/// the witness coefficients.
Complex pairing(const TruncVector& x, const DualityWitness& f);

/// Extreme points of J(x) for a unit vector x. On c0 these are the phases
/// conj(x_i)/|x_i| placed at every index of the argmax set
/// {i : |x_i| >= 1 - argmax_tol}; J(x) is their convex hull. On l2 the single
/// functional conj(x) is returned. l1 input is rejected.
std::vector<DualityWitness> duality_extreme_points(const TruncVector& x,
                                                   const ToleranceConfig& tol = {});

/// |x| ^ |y| = 0 up to argmax_tol.
bool is_disjoint(const TruncVector& x, const TruncVector& y, const ToleranceConfig& tol = {});

/// Convex combination sum_i w_i f_i; weights must be nonnegative and sum to 1.
DualityWitness convex_combination(const std::vector<DualityWitness>& witnesses,
                                  const std::vector<Real>& weights);

nlohmann::json to_json(const TruncVector& x);
nlohmann::json to_json(const DualityWitness& f);
TruncVector vector_from_json(const nlohmann::json& j);
DualityWitness witness_from_json(const nlohmann::json& j);

nlohmann::json complex_array_to_json(const CVector& v);
CVector complex_array_from_json(const nlohmann::json& j);

}  // namespace semilab
