#ifndef SSAROOTS_SERIES_HPP
#define SSAROOTS_SERIES_HPP

///
/// \file series.hpp
///
/// Time series of finite difference dimension,
/// \f$ f_n = \sum_k P_k(n) \lambda_k^n \f$, and the linear recurrent
/// formulae (LRFs) they satisfy.
///

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ssaroots/polynomial.hpp"

namespace ssaroots {

template <typename Real>
using TimeSeries = ComplexVector<Real>;

enum class Direction { Forward, Backward };

/// One summand P(n) * root^n.
template <typename Real>
struct SignalTerm {
  std::complex<Real> root;
  Polynomial<Real> poly;
};

///
/// Sum of polynomially modulated exponentials. Roots are nonzero and
/// pairwise distinct, polynomials are nonzero, and terms are kept ordered
/// by (|root|, arg root) descending so that serialization is reproducible.
/// A model without terms is the identically zero series.
///
template <typename Real>
class SignalModel {
 public:
  using Complex = std::complex<Real>;

  SignalModel() = default;

  explicit SignalModel(std::vector<SignalTerm<Real>> terms) : terms_(std::move(terms)) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].root == Complex(0)) throw Error(ErrorKind::RootAtZero, "signal roots must be nonzero");
      if (terms_[i].poly.is_zero()) throw Error(ErrorKind::InvalidArgument, "signal term with zero polynomial");
      for (std::size_t j = 0; j < i; ++j)
        if (terms_[i].root == terms_[j].root)
          throw Error(ErrorKind::InvalidArgument, "signal roots must be pairwise distinct");
    }
    std::sort(terms_.begin(), terms_.end(), [](const auto& a, const auto& b) {
      const Real ma = std::abs(a.root), mb = std::abs(b.root);
      if (ma != mb) return ma > mb;
      return std::arg(a.root) > std::arg(b.root);
    });
  }

  /// Single exponential term c * root^n.
  static SignalModel exponential(Complex root, Complex c = Complex(1)) {
    return SignalModel({{root, Polynomial<Real>{c}}});
  }

  const std::vector<SignalTerm<Real>>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Sum of (deg P_k + 1).
  int difference_dimension() const {
    int d = 0;
    for (const auto& t : terms_) d += t.poly.degree() + 1;
    return d;
  }

  std::vector<RootCluster<Real>> root_clusters() const {
    std::vector<RootCluster<Real>> out;
    for (const auto& t : terms_) out.push_back({t.root, t.poly.degree() + 1});
    return out;
  }

  bool has_multiple_root() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.poly.degree() > 0; });
  }

 private:
  std::vector<SignalTerm<Real>> terms_;
};

/// Recursion f_{n+r} = sum_{k<r} a_k f_{n+k}.
template <typename Real>
struct Lrf {
  ComplexVector<Real> coeffs;

  int order() const noexcept { return static_cast<int>(coeffs.size()); }

  /// Characteristic polynomial z^r - a_{r-1} z^{r-1} - ... - a_0.
  Polynomial<Real> characteristic() const {
    ComplexVector<Real> c(coeffs.size() + 1);
    c.head(coeffs.size()) = -coeffs;
    c[coeffs.size()] = 1;
    return Polynomial<Real>(std::move(c));
  }
};

/// Monic prod (z - root_k)^(deg P_k + 1).
template <typename Real>
Polynomial<Real> char_poly(const SignalModel<Real>& m) {
  return from_roots(m.root_clusters());
}

template <typename Real>
TimeSeries<Real> generate(const SignalModel<Real>& m, int n_samples) {
  using Complex = std::complex<Real>;
  if (n_samples < 1) throw Error(ErrorKind::InvalidArgument, "series length must be positive");
  TimeSeries<Real> f = TimeSeries<Real>::Zero(n_samples);
  for (const auto& term : m.terms()) {
    for (int n = 0; n < n_samples; ++n) {
      const Complex arg(static_cast<Real>(n));
      f[n] += term.poly(arg) * std::pow(term.root, static_cast<Real>(n));
    }
  }
  return f;
}

/// The length-N requirement for a finite series to count as f.d.d. is d <= N/2;
/// generation does not enforce it, callers may check it here.
inline bool within_difference_bound(int d, int n_samples) { return 2 * d <= n_samples; }

/// LRF of order d whose characteristic polynomial is P.
template <typename Real>
Lrf<Real> minimal_lrf(const Polynomial<Real>& p) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "minimal_lrf of the zero polynomial");
  const Polynomial<Real> monic = p.monic();
  if (std::abs(monic[0]) == Real(0)) throw Error(ErrorKind::RootAtZero, "characteristic polynomial vanishes at zero");
  return Lrf<Real>{ComplexVector<Real>(-monic.coeffs().head(monic.degree()))};
}

/// Largest recursion residual relative to max |f|.
template <typename Real>
Real lrf_residual(const TimeSeries<Real>& f, const Lrf<Real>& lrf) {
  const int r = lrf.order();
  const int n = static_cast<int>(f.size());
  if (r >= n) throw Error(ErrorKind::InvalidArgument, "LRF order must be smaller than the series length");
  const Real scale = f.cwiseAbs().maxCoeff();
  if (scale == 0) return 0;
  Real worst = 0;
  for (int i = 0; i + r < n; ++i) {
    std::complex<Real> pred(0);
    for (int k = 0; k < r; ++k) pred += lrf.coeffs[k] * f[i + k];
    worst = std::max(worst, std::abs(f[i + r] - pred));
  }
  return worst / scale;
}

template <typename Real>
bool satisfies_lrf(const TimeSeries<Real>& f, const Lrf<Real>& lrf, Real tol) {
  return lrf_residual(f, lrf) < tol;
}

template <typename Real>
TimeSeries<Real> continue_series(const TimeSeries<Real>& f, const Lrf<Real>& lrf, int steps, Direction direction) {
  using Complex = std::complex<Real>;
  const int r = lrf.order();
  const int n = static_cast<int>(f.size());
  if (r > n) throw Error(ErrorKind::InvalidArgument, "LRF order exceeds the series length");
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "negative number of continuation steps");
  TimeSeries<Real> out(n + steps);
  if (direction == Direction::Forward) {
    out.head(n) = f;
    for (int i = n; i < n + steps; ++i) {
      Complex next(0);
      for (int k = 0; k < r; ++k) next += lrf.coeffs[k] * out[i - r + k];
      out[i] = next;
    }
    return out;
  }
  if (r == 0 || lrf.coeffs[0] == Complex(0))
    throw Error(ErrorKind::ZeroLeadCoefficient, "backward continuation needs a_0 != 0");
  out.tail(n) = f;
  for (int i = steps - 1; i >= 0; --i) {
    Complex acc = out[i + r];
    for (int k = 1; k < r; ++k) acc -= lrf.coeffs[k] * out[i + k];
    out[i] = acc / lrf.coeffs[0];
  }
  return out;
}

/// rho^n P(n) cos(2 pi omega n + phi) with a real polynomial P.
template <typename Real>
struct RealTerm {
  Real rho = 1;
  Real omega = 0;
  Real phi = 0;
  std::vector<Real> poly{Real(1)};
};

///
/// Complex form of a real-valued series. A term with omega != 0 becomes the
/// conjugate pair rho e^{+-2 pi i omega} with coefficient P e^{+-i phi}/2, a
/// term with omega = 0 stays a single real root with P cos(phi). Terms that
/// land on the same root are summed.
///
template <typename Real>
SignalModel<Real> real_to_complex(const std::vector<RealTerm<Real>>& terms) {
  using Complex = std::complex<Real>;
  std::vector<SignalTerm<Real>> out;
  auto add = [&out](Complex root, const Polynomial<Real>& p) {
    for (auto& t : out) {
      if (t.root == root) {
        t.poly = t.poly + p;
        return;
      }
    }
    out.push_back({root, p});
  };
  for (const auto& t : terms) {
    if (!(t.rho > 0)) throw Error(ErrorKind::InvalidArgument, "rho must be positive");
    if (std::abs(t.omega) >= Real(0.5)) throw Error(ErrorKind::InvalidFrequency, "|omega| must be below 0.5");
    ComplexVector<Real> c(static_cast<Eigen::Index>(t.poly.size()));
    for (std::size_t k = 0; k < t.poly.size(); ++k) c[static_cast<Eigen::Index>(k)] = t.poly[k];
    const Polynomial<Real> p(c);
    if (p.is_zero()) continue;
    if (t.omega == 0) {
      add(Complex(t.rho), Complex(std::cos(t.phi)) * p);
      continue;
    }
    const Real angle = 2 * std::numbers::pi_v<Real> * t.omega;
    add(std::polar(t.rho, angle), Complex(std::polar(Real(0.5), t.phi)) * p);
    add(std::polar(t.rho, -angle), Complex(std::polar(Real(0.5), -t.phi)) * p);
  }
  std::erase_if(out, [](const auto& t) { return t.poly.is_zero(); });
  return SignalModel<Real>(std::move(out));
}

}  // namespace ssaroots

#endif  // SSAROOTS_SERIES_HPP
