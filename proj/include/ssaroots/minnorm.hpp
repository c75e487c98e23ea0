#ifndef SSAROOTS_MINNORM_HPP
#define SSAROOTS_MINNORM_HPP

///
/// \file minnorm.hpp
///
/// The SSA forecasting LRF (the Min-Norm vector) and its extraneous
/// polynomial.
///
/// For a subspace \f$\Lambda \subset \mathbb{C}^L\f$ with orthonormal basis
/// \f$U_k = (U^\nabla_k, \pi_k)\f$ the forecasting coefficients are
/// \f[
///   R = \frac{1}{1 - \nu^2} \sum_k \pi_k \overline{U^\nabla_k}, \qquad
///   \nu^2 = \sum_k |\pi_k|^2,
/// \f]
/// and \f$A = (-R^T, 1)^T\f$ equals \f$c\,\Pi e_L\f$ with \f$\Pi\f$ the
/// projector on the relations space and \f$c = (1-\nu^2)^{-1}\f$. In the
/// noise-free case \f$A(z)/c = P(z) H_n(z)\f$, where \f$H_n\f$ solves the
/// banded Hermitian Toeplitz system \f$T_n H_n = e_{n+1}\f$ with
/// \f$t_k = \sum_j \bar p_j p_{k+j}\f$. The \f$H_n\f$ are the orthogonal
/// polynomials on the unit circle for the weight \f$|P(z)|^2\f$.
///

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ssaroots/trajectory.hpp"

namespace ssaroots {

template <typename Real>
struct SsaLrf {
  ComplexVector<Real> R;  // a_0 .. a_{L-2}
  ComplexVector<Real> A;  // (-R, 1)
  Real c = 1;
  Real nu2 = 0;

  int window() const noexcept { return static_cast<int>(A.size()); }
  Lrf<Real> lrf() const { return Lrf<Real>{R}; }
  Polynomial<Real> polynomial() const { return Polynomial<Real>(A); }
};

template <typename Real>
SsaLrf<Real> ssa_lrf_from_subspace(const SubspaceBasis<Real>& basis) {
  const auto& u = basis.vectors;
  const Eigen::Index window = u.rows();
  if (window < 2) throw Error(ErrorKind::WindowOutOfRange, "window length must be at least 2");
  const ComplexVector<Real> pi = u.row(window - 1).transpose();
  const Real nu2 = pi.squaredNorm();
  if (nu2 >= Real(1) - Real(1e-10))
    throw Error(ErrorKind::Verticality, "e_L lies in the subspace; the forecasting LRF is undefined");
  SsaLrf<Real> out;
  out.nu2 = nu2;
  out.c = Real(1) / (Real(1) - nu2);
  out.R = out.c * (u.topRows(window - 1).conjugate() * pi);
  out.A.resize(window);
  out.A.head(window - 1) = -out.R;
  out.A[window - 1] = 1;
  return out;
}

///
/// Min-Norm vector of a series with characteristic polynomial P, obtained
/// by projecting e_L onto the column span of the banded relations basis
/// (Householder QR, independent of the Toeplitz route).
///
template <typename Real>
SsaLrf<Real> ssa_vector_by_projection(const Polynomial<Real>& p, int window) {
  const ComplexMatrix<Real> basis = relations_basis(p.monic(), window);
  const auto q = orthonormalize<Real>(basis).vectors;
  const ComplexVector<Real> proj = q * q.row(window - 1).adjoint();
  const Real inner = proj[window - 1].real();
  SsaLrf<Real> out;
  out.c = Real(1) / inner;
  out.nu2 = Real(1) - inner;
  out.A = out.c * proj;
  out.A[window - 1] = 1;
  out.R = -out.A.head(window - 1);
  return out;
}

/// Hermitian band t_{-d} .. t_d of the Toeplitz matrices T_n.
template <typename Real>
struct ToeplitzBand {
  std::vector<std::complex<Real>> t;  // t_0 .. t_d

  int bandwidth() const noexcept { return static_cast<int>(t.size()) - 1; }

  std::complex<Real> operator()(int k) const {
    const int a = k < 0 ? -k : k;
    if (a > bandwidth()) return std::complex<Real>(0);
    return k < 0 ? std::conj(t[static_cast<std::size_t>(a)]) : t[static_cast<std::size_t>(a)];
  }

  /// Laurent polynomial t(z) = sum_k t_k z^k; equals |P(z)|^2 on |z| = 1.
  std::complex<Real> symbol(std::complex<Real> z) const {
    std::complex<Real> acc(0);
    for (int k = -bandwidth(); k <= bandwidth(); ++k) acc += (*this)(k)*std::pow(z, static_cast<Real>(k));
    return acc;
  }

  ToeplitzBand scaled(Real alpha) const {
    ToeplitzBand out = *this;
    for (auto& v : out.t) v *= alpha;
    return out;
  }
};

template <typename Real>
ToeplitzBand<Real> toeplitz_coeffs(const Polynomial<Real>& p) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "toeplitz_coeffs of the zero polynomial");
  const int d = p.degree();
  ToeplitzBand<Real> band;
  band.t.resize(static_cast<std::size_t>(d + 1));
  for (int k = 0; k <= d; ++k) {
    std::complex<Real> acc(0);
    for (int j = 0; j <= d - k; ++j) acc += std::conj(p[j]) * p[k + j];
    band.t[static_cast<std::size_t>(k)] = acc;
  }
  return band;
}

/// Dense (n+1) x (n+1) matrix T(i, j) = t_{i-j}.
template <typename Real>
ComplexMatrix<Real> toeplitz_matrix(const ToeplitzBand<Real>& band, int n) {
  ComplexMatrix<Real> m(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) m(i, j) = band(i - j);
  return m;
}

enum class ToeplitzSolver { BandedLU, Levinson };

namespace detail {

/// Gaussian elimination with partial pivoting restricted to the band.
template <typename Real>
ComplexVector<Real> solve_banded(ComplexMatrix<Real> a, ComplexVector<Real> b, int lower, int upper) {
  const int n = static_cast<int>(a.rows());
  const int reach = lower + upper;
  for (int k = 0; k < n; ++k) {
    const int last_row = std::min(n - 1, k + lower);
    const int last_col = std::min(n - 1, k + reach);
    int piv = k;
    for (int i = k + 1; i <= last_row; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) == Real(0)) throw Error(ErrorKind::SingularSystem, "singular Toeplitz system");
    if (piv != k) {
      for (int j = k; j <= last_col; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i <= last_row; ++i) {
      const std::complex<Real> factor = a(i, k) / a(k, k);
      if (factor == std::complex<Real>(0)) continue;
      for (int j = k; j <= last_col; ++j) a(i, j) -= factor * a(k, j);
      b[i] -= factor * b[k];
    }
  }
  ComplexVector<Real> x(n);
  for (int i = n - 1; i >= 0; --i) {
    std::complex<Real> acc = b[i];
    for (int j = i + 1; j <= std::min(n - 1, i + reach); ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

}  // namespace detail

///
/// Orthogonal polynomials H_0 .. H_{n_max} for the band, via the Szego
/// recursion on monic Phi_k: Phi_{k+1} = z Phi_k - gamma_k Phi_k^*, with
/// gamma_k = <z Phi_k, 1> / ||Phi_k||^2, and H_k = Phi_k / ||Phi_k||^2.
/// This is the Levinson-Durbin solution of T_k H_k = e_{k+1} for all k.
///
template <typename Real>
std::vector<Polynomial<Real>> orthogonal_family(const ToeplitzBand<Real>& band, int n_max) {
  using Complex = std::complex<Real>;
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "negative degree");
  std::vector<Polynomial<Real>> out;
  ComplexVector<Real> phi = ComplexVector<Real>::Ones(1);
  Real norm2 = band(0).real();
  for (int k = 0;; ++k) {
    if (!(norm2 > 0)) throw Error(ErrorKind::SingularSystem, "non-positive Szego norm");
    out.emplace_back(ComplexVector<Real>(phi / norm2));
    if (k == n_max) break;
    // <z Phi_k, 1> = sum_j phi_j <z^{j+1}, 1> = sum_j phi_j t_{-(j+1)}
    Complex moment(0);
    for (int j = 0; j <= k; ++j) moment += phi[j] * band(-(j + 1));
    const Complex gamma = moment / norm2;
    ComplexVector<Real> next = ComplexVector<Real>::Zero(k + 2);
    next.tail(k + 1) = phi;
    next.head(k + 1) -= gamma * phi.reverse().conjugate();
    phi = next;
    norm2 *= (Real(1) - std::norm(gamma));
  }
  return out;
}

/// H_n with its defining degree (kept unnormalized; the leading coefficient is ||H_n||_t^2).
template <typename Real>
struct ExtraneousPoly {
  Polynomial<Real> H;
  int n = 0;

  Polynomial<Real> monic() const { return H.monic(); }

  /// H_n / ||H_n||_t, using ||H_n||_t^2 = h_n.
  Polynomial<Real> unit_norm() const { return (Real(1) / std::sqrt(H.leading().real())) * H; }
};

template <typename Real>
ExtraneousPoly<Real> extraneous_poly(const ToeplitzBand<Real>& band, int n,
                                     ToeplitzSolver solver = ToeplitzSolver::BandedLU) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "extraneous degree must be non-negative");
  if (solver == ToeplitzSolver::Levinson) return {orthogonal_family(band, n).back(), n};
  ComplexVector<Real> rhs = ComplexVector<Real>::Zero(n + 1);
  rhs[n] = 1;
  const int d = band.bandwidth();
  ComplexVector<Real> h = detail::solve_banded<Real>(toeplitz_matrix(band, n), rhs, d, d);
  return {Polynomial<Real>(std::move(h)), n};
}

/// H_n for the weight |P|^2; A(z)/c = P(z) H_n(z) at window L = n + deg P + 1.
template <typename Real>
ExtraneousPoly<Real> extraneous_poly(const Polynomial<Real>& p, int n,
                                     ToeplitzSolver solver = ToeplitzSolver::BandedLU) {
  return extraneous_poly(toeplitz_coeffs(p.monic()), n, solver);
}

///
/// Exact <p, q>_t = (1/2pi) int p(z) conj(q(z)) t(z) dtheta on the unit
/// circle, i.e. sum_{k,l} p_k conj(q_l) t_{l-k}.
///
template <typename Real>
std::complex<Real> weighted_inner_product(const Polynomial<Real>& p, const Polynomial<Real>& q,
                                          const ToeplitzBand<Real>& band) {
  std::complex<Real> acc(0);
  const int d = band.bandwidth();
  for (int k = 0; k <= p.degree(); ++k)
    for (int l = std::max(0, k - d); l <= std::min(q.degree(), k + d); ++l) acc += p[k] * std::conj(q[l]) * band(l - k);
  return acc;
}

template <typename Real>
struct OrthogonalityReport {
  Real max_cross = 0;          // max |<H_n, H_m>| / (||H_n|| ||H_m||), m < n
  Real max_norm_mismatch = 0;  // max | ||H_n||^2 - h_n | / h_n
  bool leading_positive = true;

  bool passed(Real tol) const { return leading_positive && max_cross < tol && max_norm_mismatch < tol; }
};

template <typename Real>
OrthogonalityReport<Real> verify_orthogonality(const Polynomial<Real>& p, int n_max) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be at least 1");
  const auto band = toeplitz_coeffs(p.monic());
  std::vector<Polynomial<Real>> family;
  for (int n = 0; n <= n_max; ++n) family.push_back(extraneous_poly(band, n).H);
  OrthogonalityReport<Real> report;
  std::vector<Real> norms;
  for (const auto& h : family) {
    const Real n2 = weighted_inner_product(h, h, band).real();
    const std::complex<Real> lead = h.leading();
    if (!(lead.real() > 0)) report.leading_positive = false;
    report.max_norm_mismatch = std::max(report.max_norm_mismatch, std::abs(n2 - lead) / std::abs(lead));
    norms.push_back(std::sqrt(n2));
  }
  for (int n = 0; n <= n_max; ++n)
    for (int m = 0; m < n; ++m) {
      const Real v = std::abs(weighted_inner_product(family[n], family[m], band)) / (norms[n] * norms[m]);
      report.max_cross = std::max(report.max_cross, v);
    }
  return report;
}

/// Convention for the backward LRF: as the plain SSA LRF of the reversed
/// series, or with conjugated coefficients (which makes its extraneous roots
/// coincide with the forward ones).
enum class BackwardConvention { Plain, Conjugated };

template <typename Real>
std::vector<std::complex<Real>> extraneous_roots(const Polynomial<Real>& p, int n) {
  if (n == 0) return {};
  return raw_roots(extraneous_poly(p, n).H);
}

///
/// Extraneous roots of the SSA LRF of the reversed series, whose
/// characteristic polynomial is p_0^{-1} times the reversed P.
///
template <typename Real>
std::vector<std::complex<Real>> backward_extraneous_roots(const Polynomial<Real>& p, int n,
                                                          BackwardConvention convention = BackwardConvention::Plain) {
  const Polynomial<Real> monic = p.monic();
  if (monic[0] == std::complex<Real>(0)) throw Error(ErrorKind::RootAtZero, "P(0) = 0 has no reversed series");
  auto out = extraneous_roots(reversed(monic), n);
  if (convention == BackwardConvention::Conjugated)
    for (auto& z : out) z = std::conj(z);
  return out;
}

///
/// Random check of the Min-Norm property: A + W, for W in the relations
/// space of P with zero last coordinate, never has a smaller norm than A.
///
template <typename Real>
bool min_norm_check(const ComplexVector<Real>& a, const Polynomial<Real>& p, int trials, std::uint64_t seed = 1) {
  const int window = static_cast<int>(a.size());
  if (std::abs(a[window - 1] - std::complex<Real>(1)) > Real(1e-12))
    throw Error(ErrorKind::InvalidArgument, "Min-Norm candidate must end with 1");
  const ComplexMatrix<Real> basis = relations_basis(p.monic(), window);
  const int free = static_cast<int>(basis.cols()) - 1;  // last column carries the last coordinate
  if (free == 0) return true;
  std::mt19937_64 gen(seed);
  std::normal_distribution<Real> normal;
  std::uniform_real_distribution<Real> exponent(-4, 1);
  const Real base = a.squaredNorm();
  for (int t = 0; t < trials; ++t) {
    ComplexVector<Real> x(free);
    for (int k = 0; k < free; ++k) x[k] = std::complex<Real>(normal(gen), normal(gen));
    x *= std::pow(Real(10), exponent(gen)) * std::sqrt(base) / x.norm();
    const ComplexVector<Real> v = a + basis.leftCols(free) * x;
    if (base > v.squaredNorm() + Real(1e-12)) return false;
  }
  return true;
}

#ifndef SSAROOTS_NO_EXTERN_TEMPLATES
// Instantiated once in the compiled library (src/instantiate.cpp).
extern template ComplexVector<double> detail::solve_banded<double>(ComplexMatrix<double>, ComplexVector<double>, int, int);
#endif

}  // namespace ssaroots

#endif  // SSAROOTS_MINNORM_HPP
