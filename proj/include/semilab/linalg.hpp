#pragma once

// Dense kernels shared by every module. Everything here is templated on the
// Eigen expression type so callers can pass blocks, maps, or products without
// materializing them first.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>

namespace semilab {

template <typename Real>
using CVectorX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrixX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using Real = double;
using Complex = std::complex<Real>;
using CVector = CVectorX<Real>;
using CMatrix = CMatrixX<Real>;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Sup norm (c0).
template <typename Derived>
typename Derived::RealScalar sup_norm(const Eigen::MatrixBase<Derived>& x) {
  if (x.size() == 0) return 0;
  return x.template lpNorm<Eigen::Infinity>();
}

/// Sum of moduli (l1).
template <typename Derived>
typename Derived::RealScalar l1_norm(const Eigen::MatrixBase<Derived>& x) {
  return x.cwiseAbs().sum();
}

template <typename Derived>
typename Derived::RealScalar l2_norm(const Eigen::MatrixBase<Derived>& x) {
  return x.norm();
}

template <typename RealT>
struct IndexedNorm {
  RealT value = 0;
  Index index = 0;
};

/// Operator norm on c0: the largest row l1-sum, together with the row.
template <typename Derived>
IndexedNorm<typename Derived::RealScalar> max_row_sum(const Eigen::MatrixBase<Derived>& a) {
  IndexedNorm<typename Derived::RealScalar> out;
  if (a.rows() == 0) return out;
  out.value = a.cwiseAbs().rowwise().sum().maxCoeff(&out.index);
  return out;
}

/// Operator norm on l1: the largest column l1-sum, together with the column.
template <typename Derived>
IndexedNorm<typename Derived::RealScalar> max_col_sum(const Eigen::MatrixBase<Derived>& a) {
  IndexedNorm<typename Derived::RealScalar> out;
  if (a.cols() == 0) return out;
  out.value = a.cwiseAbs().colwise().sum().maxCoeff(&out.index);
  return out;
}

template <typename RealT>
struct ExpmStats {
  int squarings = 0;
  int taylor_terms = 0;
};

/// Matrix exponential by scaling and squaring around a truncated Taylor
/// series. The scaling exponent is the smallest s with ||a||/2^s <= 1/2 in
/// the max-row-sum norm; the series stops once the bound on the next term
/// drops below tol/10.
template <typename Derived>
typename Derived::PlainObject expm(const Eigen::MatrixBase<Derived>& a,
                                   typename Derived::RealScalar tol,
                                   ExpmStats<typename Derived::RealScalar>* stats = nullptr) {
  using Plain = typename Derived::PlainObject;
  using RealT = typename Derived::RealScalar;
  eigen_assert(a.rows() == a.cols());
  const Index n = a.rows();

  const RealT norm = max_row_sum(a).value;
  int squarings = 0;
  if (norm > RealT(0.5)) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / RealT(0.5))));
  }
  const Plain scaled = a / std::ldexp(RealT(1), squarings);
  const RealT scaled_norm = norm / std::ldexp(RealT(1), squarings);

  Plain result = Plain::Identity(n, n);
  Plain term = Plain::Identity(n, n);
  RealT term_norm = 1;
  int k = 0;
  const int max_terms = 64;
  while (k < max_terms) {
    // ||term_{k+1}|| <= ||term_k|| * ||B|| / (k+1)
    const RealT next_bound = term_norm * scaled_norm / RealT(k + 1);
    if (next_bound < tol / RealT(10)) break;
    ++k;
    term = (term * scaled) / RealT(k);
    result += term;
    term_norm = max_row_sum(term).value;
  }

  for (int i = 0; i < squarings; ++i) {
    result = (result * result).eval();
  }
  if (stats != nullptr) {
    stats->squarings = squarings;
    stats->taylor_terms = k;
  }
  return result;
}

}  // namespace semilab
