#ifndef SSAROOTS_SEPARABILITY_HPP
#define SSAROOTS_SEPARABILITY_HPP

///
/// \file separability.hpp
///
/// Exact weak separability (orthogonality of trajectory spaces) decided
/// from signal roots, with a direct numerical check on the trajectory
/// matrices to compare against.
///
/// Two series of simple roots are left-separable at window L iff, for some
/// rho > 0 and omega in [0, 1/L),
///   lambda_k = rho     exp(2 pi i (m_k / L + omega)),
///   mu_j     = rho^-1  exp(2 pi i (n_j / L + omega)),
/// with all m_k, n_j distinct in [0, L).
///

#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include "ssaroots/trajectory.hpp"

namespace ssaroots {

enum class Side { Left, Right, TwoSided };

enum class SeparabilityReason { Ok, RootFormViolation, MultipleRoot, BorderCase };

inline const char* to_string(SeparabilityReason r) {
  switch (r) {
    case SeparabilityReason::Ok: return "ok";
    case SeparabilityReason::RootFormViolation: return "root-form-violation";
    case SeparabilityReason::MultipleRoot: return "multiple-root";
    case SeparabilityReason::BorderCase: return "border-case";
  }
  return "unknown";
}

inline const char* to_string(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::TwoSided: return "two_sided";
  }
  return "unknown";
}

template <typename Real>
struct SeparabilityWitness {
  Real rho = 1;
  Real omega = 0;
  int window = 0;            // the L the lattice refers to
  std::vector<int> m;        // lattice indices of the first model's roots
  std::vector<int> n;        // lattice indices of the second model's roots
  bool real_compatible = false;  // omega = 0 or omega = 1/(2L)
};

template <typename Real>
struct SeparabilityVerdict {
  bool separable = false;
  Side side = Side::Left;
  SeparabilityReason reason = SeparabilityReason::RootFormViolation;
  std::optional<SeparabilityWitness<Real>> witness;
  std::string diagnostic;
};

template <typename Real>
struct SeparableFamily {
  std::vector<RootCluster<Real>> admissible_roots;
};

/// Coefficients of conj(U)(z) for a vector U.
template <typename Real>
Polynomial<Real> conjugate_generating_poly(const ComplexVector<Real>& u) {
  return Polynomial<Real>(ComplexVector<Real>(u.conjugate()));
}

///
/// Nonzero common roots, with their common multiplicities, of the
/// conjugated generating polynomials of the basis vectors.
///
template <typename Real>
SeparableFamily<Real> separable_family(const ComplexMatrix<Real>& basis, Real tol = Real(1e-6)) {
  if (basis.cols() == 0) throw Error(ErrorKind::EmptyBasis, "empty basis");
  Polynomial<Real> g;
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    const Polynomial<Real> u = conjugate_generating_poly<Real>(basis.col(i));
    if (u.is_zero()) throw Error(ErrorKind::InvalidArgument, "zero basis vector");
    g = gcd(g, u, tol);
    if (g.degree() == 0) return {};
  }
  SeparableFamily<Real> out;
  for (const auto& c : roots(g, tol))
    if (std::abs(c.value) > tol) out.admissible_roots.push_back(c);
  return out;
}

namespace detail {

template <typename Real>
Real frac(Real x) {
  return x - std::floor(x);
}

/// Position of root in turns, in [0, 1).
template <typename Real>
Real turns(std::complex<Real> z) {
  return frac(std::arg(z) / (2 * std::numbers::pi_v<Real>));
}

}  // namespace detail

template <typename Real>
SeparabilityVerdict<Real> check_left_separable(const SignalModel<Real>& m1, const SignalModel<Real>& m2, int window,
                                               Real angle_tol = Real(1e-9), Real modulus_tol = Real(1e-9)) {
  SeparabilityVerdict<Real> v;
  v.side = Side::Left;
  if (m1.is_zero() || m2.is_zero()) throw Error(ErrorKind::InvalidArgument, "separability of a zero series");
  if (window < 2) throw Error(ErrorKind::WindowOutOfRange, "window length must be at least 2");
  if (m1.has_multiple_root() || m2.has_multiple_root()) {
    v.reason = SeparabilityReason::MultipleRoot;
    return v;
  }
  const Real rho = std::abs(m1.terms().front().root);
  const Real lattice = Real(1) / static_cast<Real>(window);
  Real omega = std::fmod(detail::turns(m1.terms().front().root), lattice);
  if (omega > lattice - angle_tol) omega = 0;

  SeparabilityWitness<Real> w;
  w.rho = rho;
  w.omega = omega;
  w.window = window;
  std::set<int> used;
  auto place = [&](std::complex<Real> z, Real expected_modulus, std::vector<int>& slots) {
    if (std::abs(std::abs(z) - expected_modulus) > modulus_tol * expected_modulus) return false;
    const Real x = (detail::turns(z) - omega) * static_cast<Real>(window);
    const Real k = std::round(x);
    if (std::abs(x - k) > angle_tol * static_cast<Real>(window)) return false;
    const int idx = ((static_cast<int>(k) % window) + window) % window;
    if (!used.insert(idx).second) return false;
    slots.push_back(idx);
    return true;
  };
  for (const auto& t : m1.terms())
    if (!place(t.root, rho, w.m)) return v;
  for (const auto& t : m2.terms())
    if (!place(t.root, Real(1) / rho, w.n)) return v;

  const Real half = lattice / 2;
  w.real_compatible = std::abs(omega) <= angle_tol || std::abs(omega - half) <= angle_tol;
  v.separable = true;
  v.reason = SeparabilityReason::Ok;
  v.witness = std::move(w);
  return v;
}

///
/// Required shape of a conjugate-pair root for a real cosine to be
/// separable from anything: lambda = rho exp(2 pi i m / (2L)), 0 < m < L.
///
template <typename Real>
std::optional<int> check_conjugate_pair_constraint(std::complex<Real> lambda, int window, Real angle_tol = Real(1e-9)) {
  if (lambda.imag() == 0) throw Error(ErrorKind::RealRoot, "conjugate-pair constraint needs Im lambda != 0");
  const Real x = std::abs(std::arg(lambda)) / (2 * std::numbers::pi_v<Real>) * static_cast<Real>(2 * window);
  const Real k = std::round(x);
  if (std::abs(x - k) > angle_tol * static_cast<Real>(2 * window)) return std::nullopt;
  const int m = static_cast<int>(k);
  if (m <= 0 || m >= window) return std::nullopt;
  return m;
}

///
/// max over column pairs of |<X_i, Y_j>| / (|X_i| |Y_j|) for the two
/// trajectory matrices; zero columns are skipped. The loops run in a fixed
/// order so the value is exactly symmetric in its arguments.
///
template <typename Real>
Real numeric_separability(const TimeSeries<Real>& f1, const TimeSeries<Real>& f2, int window) {
  const TrajectoryMatrix<Real> x(f1, window), y(f2, window);
  const auto& a = x.data();
  const auto& b = y.data();
  std::vector<Real> na(static_cast<std::size_t>(a.cols())), nb(static_cast<std::size_t>(b.cols()));
  for (Eigen::Index i = 0; i < a.cols(); ++i) na[static_cast<std::size_t>(i)] = a.col(i).norm();
  for (Eigen::Index j = 0; j < b.cols(); ++j) nb[static_cast<std::size_t>(j)] = b.col(j).norm();
  Real worst = 0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      const Real den = na[static_cast<std::size_t>(i)] * nb[static_cast<std::size_t>(j)];
      if (den == 0) continue;
      Real re = 0, im = 0;
      for (Eigen::Index t = 0; t < a.rows(); ++t) {
        const auto p = a(t, i);
        const auto q = b(t, j);
        re += p.real() * q.real() + p.imag() * q.imag();
        im += p.real() * q.imag() - p.imag() * q.real();
      }
      worst = std::max(worst, std::hypot(re, im) / den);
    }
  }
  return worst;
}

///
/// Separability when e_L lies in the trajectory space of f1: both series
/// must be "border" series, f1 = (0, ..., 0, tail of length d1) and
/// f2 = (head of length h2, 0, ..., 0) with d1 + h2 <= L. The zero-pattern
/// verdict is compared with the direct orthogonality test and any
/// disagreement is reported in the diagnostic.
///
template <typename Real>
SeparabilityVerdict<Real> check_border_separable(const TimeSeries<Real>& f1, const TimeSeries<Real>& f2, int window,
                                                 Real zero_tol = Real(1e-12)) {
  SeparabilityVerdict<Real> v;
  v.side = Side::Left;
  const int n = static_cast<int>(f1.size());
  if (f2.size() != n) throw Error(ErrorKind::InvalidArgument, "series lengths differ");
  if (window <= 1 || window >= n) throw Error(ErrorKind::WindowOutOfRange, "window length must satisfy 1 < L < N");
  const Real s1 = f1.cwiseAbs().maxCoeff(), s2 = f2.cwiseAbs().maxCoeff();
  if (s1 == 0 || s2 == 0) throw Error(ErrorKind::InvalidArgument, "border separability of a zero series");

  int first1 = 0;
  while (std::abs(f1[first1]) <= zero_tol * s1) ++first1;
  int last2 = n - 1;
  while (std::abs(f2[last2]) <= zero_tol * s2) --last2;
  const int tail = n - first1;
  const int head = last2 + 1;
  const bool border = first1 > 0 && last2 < n - 1 && tail + head <= window;
  const bool orthogonal = numeric_separability(f1, f2, window) < Real(1e-10);

  v.separable = border;
  v.reason = border ? SeparabilityReason::BorderCase : SeparabilityReason::RootFormViolation;
  if (border != orthogonal)
    v.diagnostic = std::string("zero-pattern test says ") + (border ? "separable" : "not separable") +
                   " but the direct orthogonality test disagrees";
  return v;
}

/// Right separability is left separability at window K = N - L + 1.
template <typename Real>
SeparabilityVerdict<Real> check_right_separable(const SignalModel<Real>& m1, const SignalModel<Real>& m2, int window,
                                                int length) {
  auto v = check_left_separable(m1, m2, length - window + 1);
  v.side = Side::Right;
  return v;
}

///
/// Two-sided separability: the left criterion at L* = gcd(L, K). Requires
/// max(d1, d2) < L < N - max(d1, d2) + 1.
///
template <typename Real>
SeparabilityVerdict<Real> check_two_sided(const SignalModel<Real>& m1, const SignalModel<Real>& m2, int window,
                                          int length) {
  const int d = std::max(m1.difference_dimension(), m2.difference_dimension());
  if (!(d < window && window < length - d + 1))
    throw Error(ErrorKind::WindowOutOfRange, "two-sided separability needs max(d1, d2) < L < N - max(d1, d2) + 1");
  const int common = std::gcd(window, length - window + 1);
  SeparabilityVerdict<Real> v;
  if (common < 2) {
    v.side = Side::TwoSided;
    v.reason = m1.has_multiple_root() || m2.has_multiple_root() ? SeparabilityReason::MultipleRoot
                                                                : SeparabilityReason::RootFormViolation;
    v.diagnostic = "gcd(L, K) = 1 admits only the zero series";
    return v;
  }
  v = check_left_separable(m1, m2, common);
  v.side = Side::TwoSided;
  return v;
}

}  // namespace ssaroots

#endif  // SSAROOTS_SEPARABILITY_HPP
