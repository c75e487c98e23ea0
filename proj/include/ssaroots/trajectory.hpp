#ifndef SSAROOTS_TRAJECTORY_HPP
#define SSAROOTS_TRAJECTORY_HPP

///
/// \file trajectory.hpp
///
/// Hankel trajectory matrices and the two subspaces they define: the
/// trajectory space (column span) and the relations space (conjugated
/// orthogonal complement).
///

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/SVD>

#include "ssaroots/series.hpp"

namespace ssaroots {

/// L x K Hankel matrix X(i, j) = f_{i+j}, K = N - L + 1.
template <typename Real>
class TrajectoryMatrix {
 public:
  TrajectoryMatrix(const TimeSeries<Real>& f, int window) {
    const int n = static_cast<int>(f.size());
    if (window <= 1 || window >= n)
      throw Error(ErrorKind::WindowOutOfRange, "window length must satisfy 1 < L < N");
    data_.resize(window, n - window + 1);
    for (int j = 0; j < data_.cols(); ++j) data_.col(j) = f.segment(j, window);
  }

  const ComplexMatrix<Real>& data() const noexcept { return data_; }
  int window() const noexcept { return static_cast<int>(data_.rows()); }
  int columns() const noexcept { return static_cast<int>(data_.cols()); }

 private:
  ComplexMatrix<Real> data_;
};

template <typename Real>
TrajectoryMatrix<Real> hankel(const TimeSeries<Real>& f, int window) {
  return TrajectoryMatrix<Real>(f, window);
}

template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> singular_values(const TrajectoryMatrix<Real>& x) {
  Eigen::BDCSVD<ComplexMatrix<Real>> svd(x.data());
  return svd.singularValues();
}

template <typename Real>
Real default_rank_tol(const TrajectoryMatrix<Real>& x) {
  return static_cast<Real>(std::max(x.window(), x.columns())) * Real(1e-12);
}

/// Number of singular values above rel_tol * sigma_1 (negative rel_tol selects max(L,K) * 1e-12).
template <typename Real>
int numerical_rank(const TrajectoryMatrix<Real>& x, Real rel_tol = Real(-1)) {
  if (rel_tol < 0) rel_tol = default_rank_tol(x);
  const auto sv = singular_values(x);
  if (sv.size() == 0 || sv[0] == 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > rel_tol * sv[0]) ++r;
  return r;
}

/// Orthonormal columns spanning a subspace of C^L.
template <typename Real>
struct SubspaceBasis {
  ComplexMatrix<Real> vectors;

  int dimension() const noexcept { return static_cast<int>(vectors.cols()); }
  int ambient() const noexcept { return static_cast<int>(vectors.rows()); }
};

///
/// The d leading left singular vectors. With exact = true a numerically
/// vanishing sigma_d is reported as RankDeficient; the noisy path passes
/// exact = false and takes whatever the leading vectors are.
///
template <typename Real>
SubspaceBasis<Real> trajectory_basis(const TrajectoryMatrix<Real>& x, int d, bool exact = true,
                                     Real rel_tol = Real(-1)) {
  if (d < 0 || d > std::min(x.window(), x.columns()))
    throw Error(ErrorKind::InvalidArgument, "basis dimension exceeds min(L, K)");
  if (rel_tol < 0) rel_tol = default_rank_tol(x);
  Eigen::BDCSVD<ComplexMatrix<Real>> svd(x.data(), Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (exact && d > 0 && !(sv[d - 1] > rel_tol * sv[0]))
    throw Error(ErrorKind::RankDeficient, "trajectory matrix has rank below the requested dimension");
  return SubspaceBasis<Real>{svd.matrixU().leftCols(d)};
}

/// Orthonormalized column span of an arbitrary full-rank matrix.
template <typename Real>
SubspaceBasis<Real> orthonormalize(const ComplexMatrix<Real>& m) {
  Eigen::HouseholderQR<ComplexMatrix<Real>> qr(m);
  ComplexMatrix<Real> q = qr.householderQ() * ComplexMatrix<Real>::Identity(m.rows(), m.cols());
  return SubspaceBasis<Real>{q};
}

/// Sine of the largest principal angle between two column spans.
template <typename Real>
Real subspace_distance(const ComplexMatrix<Real>& a, const ComplexMatrix<Real>& b) {
  const auto qa = orthonormalize<Real>(a).vectors;
  const auto qb = orthonormalize<Real>(b).vectors;
  if (qa.cols() != qb.cols()) return Real(1);
  const ComplexMatrix<Real> residual = qb - qa * (qa.adjoint() * qb);
  if (residual.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix<Real>> svd(residual);
  return svd.singularValues()[0];
}

///
/// Banded L x (L - d) matrix whose column j holds the coefficients of
/// z^j P(z). Its column span is the relations space of any series with
/// characteristic polynomial P.
///
template <typename Real>
ComplexMatrix<Real> relations_basis(const Polynomial<Real>& p, int window) {
  const int d = p.degree();
  if (d < 0) throw Error(ErrorKind::ZeroPolynomial, "relations basis of the zero polynomial");
  if (window <= d) throw Error(ErrorKind::WindowTooSmall, "window length must exceed deg P");
  ComplexMatrix<Real> m = ComplexMatrix<Real>::Zero(window, window - d);
  for (int j = 0; j < window - d; ++j) m.col(j).segment(j, d + 1) = p.coeffs();
  return m;
}

///
/// Columns l^k(lambda) = d^k/dlambda^k (1, lambda, ..., lambda^{L-1}) for
/// every root and 0 <= k < multiplicity, in model order.
///
template <typename Real>
ComplexMatrix<Real> vandermonde_basis(const SignalModel<Real>& m, int window) {
  const int d = m.difference_dimension();
  if (window <= d) throw Error(ErrorKind::WindowTooSmall, "window length must exceed the difference dimension");
  ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(window, d);
  int col = 0;
  for (const auto& term : m.terms()) {
    for (int k = 0; k <= term.poly.degree(); ++k, ++col) {
      for (int j = k; j < window; ++j) {
        Real falling = 1;
        for (int s = 0; s < k; ++s) falling *= static_cast<Real>(j - s);
        out(j, col) = falling * std::pow(term.root, static_cast<Real>(j - k));
      }
    }
  }
  return out;
}

/// Distance from unit vector e to the span of the orthonormal columns of u.
template <typename Real>
Real projection_residual(const ComplexMatrix<Real>& u, int index) {
  ComplexVector<Real> e = ComplexVector<Real>::Zero(u.rows());
  e[index] = 1;
  return (e - u * (u.adjoint() * e)).norm();
}

///
/// Forward (backward) L-continuability: e_L (e_1) lies outside the
/// trajectory space. Requires L <= N/2, where the test is also sufficient.
///
template <typename Real>
bool is_continuable(const TimeSeries<Real>& f, int window, Direction direction, Real threshold = Real(1e-8)) {
  if (2 * window > f.size()) throw Error(ErrorKind::WindowOutOfRange, "continuability test needs L <= N/2");
  const TrajectoryMatrix<Real> x(f, window);
  const int r = numerical_rank(x);
  const auto basis = trajectory_basis(x, r, false);
  const int index = direction == Direction::Forward ? window - 1 : 0;
  return projection_residual<Real>(basis.vectors, index) > threshold;
}

#ifndef SSAROOTS_NO_EXTERN_TEMPLATES
// Instantiated once in the compiled library (src/instantiate.cpp).
extern template Eigen::Matrix<double, Eigen::Dynamic, 1> singular_values<double>(const TrajectoryMatrix<double>&);
extern template SubspaceBasis<double> trajectory_basis<double>(const TrajectoryMatrix<double>&, int, bool, double);
extern template SubspaceBasis<double> orthonormalize<double>(const ComplexMatrix<double>&);
extern template double subspace_distance<double>(const ComplexMatrix<double>&, const ComplexMatrix<double>&);
#endif

}  // namespace ssaroots

#endif  // SSAROOTS_TRAJECTORY_HPP
