#ifndef SSAROOTS_POLYNOMIAL_HPP
#define SSAROOTS_POLYNOMIAL_HPP

///
/// \file polynomial.hpp
///
/// Dense complex polynomials stored by ascending coefficients, together with
/// root extraction (balanced companion matrix), multiplicity clustering and
/// an approximate GCD obtained by matching clustered roots.
///

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ssaroots/error.hpp"

namespace ssaroots {

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

///
/// Polynomial \f$ p(z) = \sum_k c_k z^k \f$ with complex coefficients.
///
/// The coefficient vector never ends with an exact zero; the identically zero
/// polynomial is the empty vector and has degree -1.
///
template <typename Real>
class Polynomial {
 public:
  using Complex = std::complex<Real>;
  using Coeffs = ComplexVector<Real>;

  Polynomial() = default;

  explicit Polynomial(Coeffs coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  Polynomial(std::initializer_list<Complex> coeffs) : coeffs_(static_cast<Eigen::Index>(coeffs.size())) {
    Eigen::Index k = 0;
    for (const auto& c : coeffs) coeffs_[k++] = c;
    trim();
  }

  static Polynomial constant(Complex value) { return Polynomial{value}; }

  static Polynomial monomial(int power, Complex value = Complex(1)) {
    Coeffs c = Coeffs::Zero(power + 1);
    c[power] = value;
    return Polynomial(std::move(c));
  }

  const Coeffs& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.size() == 0; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  /// Coefficient of z^k; zero outside the stored range.
  Complex operator[](int k) const {
    return (k < 0 || k >= coeffs_.size()) ? Complex(0) : coeffs_[k];
  }

  Complex leading() const { return is_zero() ? Complex(0) : coeffs_[coeffs_.size() - 1]; }

  Complex operator()(Complex z) const {
    Complex acc(0);
    for (Eigen::Index k = coeffs_.size() - 1; k >= 0; --k) acc = acc * z + coeffs_[k];
    return acc;
  }

  Polynomial monic() const {
    if (is_zero()) throw Error(ErrorKind::ZeroPolynomial, "monic() of the zero polynomial");
    return Polynomial(Coeffs(coeffs_ / leading()));
  }

  Polynomial conjugated() const { return Polynomial(Coeffs(coeffs_.conjugate())); }

  Polynomial operator-() const { return Polynomial(Coeffs(-coeffs_)); }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    const Eigen::Index n = std::max(p.coeffs_.size(), q.coeffs_.size());
    Coeffs c = Coeffs::Zero(n);
    c.head(p.coeffs_.size()) += p.coeffs_;
    c.head(q.coeffs_.size()) += q.coeffs_;
    return Polynomial(std::move(c));
  }

  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + (-q); }

  friend Polynomial operator*(Complex s, const Polynomial& p) { return Polynomial(Coeffs(s * p.coeffs_)); }
  friend Polynomial operator*(const Polynomial& p, Complex s) { return s * p; }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return Polynomial();
    Coeffs c = Coeffs::Zero(p.coeffs_.size() + q.coeffs_.size() - 1);
    for (Eigen::Index i = 0; i < p.coeffs_.size(); ++i)
      for (Eigen::Index j = 0; j < q.coeffs_.size(); ++j) c[i + j] += p.coeffs_[i] * q.coeffs_[j];
    return Polynomial(std::move(c));
  }

 private:
  void trim() {
    Eigen::Index n = coeffs_.size();
    while (n > 0 && coeffs_[n - 1] == Complex(0)) --n;
    coeffs_.conservativeResize(n);
  }

  Coeffs coeffs_;
};

template <typename Real>
struct RootCluster {
  std::complex<Real> value;
  int multiplicity = 1;
};

template <typename Real>
Polynomial<Real> mul(const Polynomial<Real>& p, const Polynomial<Real>& q) {
  return p * q;
}

/// order-th formal derivative.
template <typename Real>
Polynomial<Real> derivative(const Polynomial<Real>& p, int order = 1) {
  if (order < 0) throw Error(ErrorKind::InvalidArgument, "derivative order must be non-negative");
  if (order == 0) return p;
  const int n = p.degree();
  if (n < order) return Polynomial<Real>();
  typename Polynomial<Real>::Coeffs c(n - order + 1);
  for (int k = order; k <= n; ++k) {
    Real falling = 1;
    for (int j = 0; j < order; ++j) falling *= static_cast<Real>(k - j);
    c[k - order] = falling * p[k];
  }
  return Polynomial<Real>(std::move(c));
}

/// Reversed coefficients: z^deg p(1/z).
template <typename Real>
Polynomial<Real> reversed(const Polynomial<Real>& p) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "reversed() of the zero polynomial");
  return Polynomial<Real>(typename Polynomial<Real>::Coeffs(p.coeffs().reverse()));
}

/// Reversed and conjugated coefficients, \f$ B^*(z) = z^r \overline{B(1/\bar z)} \f$.
template <typename Real>
Polynomial<Real> star(const Polynomial<Real>& p) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "star() of the zero polynomial");
  return Polynomial<Real>(typename Polynomial<Real>::Coeffs(p.coeffs().reverse().conjugate()));
}

template <typename Real>
Polynomial<Real> from_roots(const std::vector<RootCluster<Real>>& clusters) {
  Polynomial<Real> result{std::complex<Real>(1)};
  for (const auto& c : clusters) {
    const Polynomial<Real> factor{-c.value, std::complex<Real>(1)};
    for (int k = 0; k < c.multiplicity; ++k) result = result * factor;
  }
  return result;
}

template <typename Real>
Polynomial<Real> from_roots(const std::vector<std::complex<Real>>& roots) {
  std::vector<RootCluster<Real>> clusters;
  clusters.reserve(roots.size());
  for (const auto& r : roots) clusters.push_back({r, 1});
  return from_roots(clusters);
}

namespace detail {

/// Parlett-Reinsch balancing (radix 2) of a general complex matrix in place.
template <typename Real>
void balance(ComplexMatrix<Real>& a) {
  const Eigen::Index n = a.rows();
  const Real radix = 2;
  const Real radix2 = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      Real c = 0, r = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i).real()) + std::abs(a(j, i).imag());
        r += std::abs(a(i, j).real()) + std::abs(a(i, j).imag());
      }
      if (c == 0 || r == 0) continue;
      Real g = r / radix, f = 1;
      const Real s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < Real(0.95) * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

/// Agglomerative clustering of points. A group of m points is accepted when
/// every member lies within tol^(2/(m+1)) * max(1, |centroid|) of the centroid,
/// which reduces to the plain distance test for simple points and widens with
/// m the way rounding spreads an m-fold root.
template <typename Real>
std::vector<std::vector<std::size_t>> cluster_points(const std::vector<std::complex<Real>>& pts, Real tol) {
  using Complex = std::complex<Real>;
  std::vector<std::vector<std::size_t>> groups(pts.size());
  std::vector<Complex> centroid(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    groups[i] = {i};
    centroid[i] = pts[i];
  }
  auto radius = [tol](std::size_t m, Complex c) {
    return std::pow(tol, Real(2) / Real(m + 1)) * std::max(Real(1), std::abs(c));
  };
  for (;;) {
    Real best = std::numeric_limits<Real>::infinity();
    std::size_t bi = 0, bj = 0;
    Complex best_c;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        const Real dist = std::abs(centroid[i] - centroid[j]);
        if (dist >= best) continue;
        const std::size_t m = groups[i].size() + groups[j].size();
        const Complex c = (centroid[i] * Real(groups[i].size()) + centroid[j] * Real(groups[j].size())) / Real(m);
        const Real r = radius(m, c);
        if (dist > 2 * r) continue;
        bool ok = true;
        for (auto g : {i, j})
          for (std::size_t k : groups[g])
            if (std::abs(pts[k] - c) > r) ok = false;
        if (ok) {
          best = dist;
          bi = i;
          bj = j;
          best_c = c;
        }
      }
    }
    if (!std::isfinite(best)) break;
    groups[bi].insert(groups[bi].end(), groups[bj].begin(), groups[bj].end());
    centroid[bi] = best_c;
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(bj));
    centroid.erase(centroid.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return groups;
}

}  // namespace detail

///
/// All roots of p with repetition, from the eigenvalues of the balanced
/// companion matrix. The variable is rescaled to the geometric mean root
/// modulus first; without it, high degree polynomials whose roots sit on a
/// circle of radius far from one lose every digit.
///
template <typename Real>
std::vector<std::complex<Real>> raw_roots(const Polynomial<Real>& p) {
  using Complex = std::complex<Real>;
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "roots of the zero polynomial");
  if (p.degree() == 0) throw Error(ErrorKind::ConstantPolynomial, "roots of a constant polynomial");

  int zeros = 0;
  while (p[zeros] == Complex(0)) ++zeros;
  const int n = p.degree() - zeros;
  std::vector<Complex> out(static_cast<std::size_t>(zeros), Complex(0));
  if (n == 0) return out;

  ComplexVector<Real> q = p.coeffs().segment(zeros, n + 1) / p.leading();
  const Real log_scale = std::log(std::abs(q[0])) / static_cast<Real>(n);
  const Real scale = std::exp(log_scale);
  for (int k = 0; k < n; ++k) {
    const Real mag = std::abs(q[k]);
    if (mag == 0) continue;
    q[k] = (q[k] / mag) * std::exp(std::log(mag) + static_cast<Real>(k - n) * log_scale);
  }

  if (n == 1) {
    out.push_back(-q[0] * scale);
    return out;
  }
  ComplexMatrix<Real> companion = ComplexMatrix<Real>::Zero(n, n);
  for (int k = 1; k < n; ++k) companion(k, k - 1) = Complex(1);
  for (int k = 0; k < n; ++k) companion(k, n - 1) = -q[k];
  detail::balance<Real>(companion);
  Eigen::ComplexEigenSolver<ComplexMatrix<Real>> solver(companion, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "companion eigenvalue iteration failed");
  for (int k = 0; k < n; ++k) out.push_back(solver.eigenvalues()[k] * scale);
  return out;
}

template <typename Real>
std::vector<RootCluster<Real>> cluster_roots(const std::vector<std::complex<Real>>& roots, Real cluster_tol) {
  std::vector<RootCluster<Real>> out;
  for (const auto& group : detail::cluster_points(roots, cluster_tol)) {
    std::complex<Real> sum(0);
    for (auto k : group) sum += roots[k];
    out.push_back({sum / static_cast<Real>(group.size()), static_cast<int>(group.size())});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const Real ma = std::abs(a.value), mb = std::abs(b.value);
    if (ma != mb) return ma > mb;
    return std::arg(a.value) > std::arg(b.value);
  });
  return out;
}

/// Clustered roots, sorted by modulus then argument, descending.
template <typename Real>
std::vector<RootCluster<Real>> roots(const Polynomial<Real>& p, Real cluster_tol = Real(1e-6)) {
  return cluster_roots(raw_roots(p), cluster_tol);
}

///
/// Monic approximate GCD: roots of p and q are clustered jointly and every
/// cluster holding roots of both contributes its smaller count.
///
template <typename Real>
Polynomial<Real> gcd(const Polynomial<Real>& p, const Polynomial<Real>& q, Real tol = Real(1e-6)) {
  using Complex = std::complex<Real>;
  if (p.is_zero() && q.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "gcd of two zero polynomials");
  if (p.is_zero()) return q.monic();
  if (q.is_zero()) return p.monic();
  if (p.degree() == 0 || q.degree() == 0) return Polynomial<Real>{Complex(1)};

  std::vector<Complex> pts = raw_roots(p);
  const std::size_t from_p = pts.size();
  for (const auto& r : raw_roots(q)) pts.push_back(r);

  std::vector<RootCluster<Real>> common;
  for (const auto& group : detail::cluster_points(pts, tol)) {
    int np = 0, nq = 0;
    Complex sum(0);
    for (auto k : group) {
      (k < from_p ? np : nq) += 1;
      sum += pts[k];
    }
    const int m = std::min(np, nq);
    if (m > 0) common.push_back({sum / static_cast<Real>(group.size()), m});
  }
  return from_roots(common);
}

/// Hausdorff distance between two finite point sets in the plane.
template <typename Real>
Real hausdorff(const std::vector<std::complex<Real>>& a, const std::vector<std::complex<Real>>& b) {
  if (a.empty() && b.empty()) return 0;
  if (a.empty() || b.empty()) return std::numeric_limits<Real>::infinity();
  auto directed = [](const auto& x, const auto& y) {
    Real worst = 0;
    for (const auto& p : x) {
      Real best = std::numeric_limits<Real>::infinity();
      for (const auto& q : y) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

#ifndef SSAROOTS_NO_EXTERN_TEMPLATES
// Instantiated once in the compiled library (src/instantiate.cpp).
extern template std::vector<std::complex<double>> raw_roots<double>(const Polynomial<double>&);
#endif

}  // namespace ssaroots

#endif  // SSAROOTS_POLYNOMIAL_HPP
