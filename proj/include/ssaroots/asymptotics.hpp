#ifndef SSAROOTS_ASYMPTOTICS_HPP
#define SSAROOTS_ASYMPTOTICS_HPP

///
/// \file asymptotics.hpp
///
/// Large-n diagnostics for the extraneous roots. The weight |P|^2 is first
/// replaced by c |C|^2 where C has every root of P reflected into the closed
/// unit disk; the largest root modulus of C is the critical radius rho and
/// the roots on that circle are the leading roots. General extraneous roots
/// accumulate on the critical circle with equal angular spacing, a bounded
/// number (the spurious roots) stay strictly inside.
///

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ssaroots/minnorm.hpp"

namespace ssaroots {

template <typename Real>
struct NormalizedWeight {
  Polynomial<Real> C;
  std::vector<RootCluster<Real>> clusters;  // leading roots first, highest multiplicity first among them
  Real rho = 0;
  int ell = 0;  // leading roots of the maximal multiplicity M
  int u = 0;    // all leading roots
  int M = 0;

  int degree() const { return C.degree(); }
  bool on_unit_circle(Real tol = Real(1e-9)) const { return std::abs(rho - Real(1)) < tol; }

  /// The leading roots that shape the asymptotics: a_1..a_ell when rho < 1, a_1..a_u when rho = 1.
  std::vector<RootCluster<Real>> active_roots() const {
    const int k = on_unit_circle() ? u : ell;
    return {clusters.begin(), clusters.begin() + k};
  }
};

/// Normalized weight from explicit root clusters (e.g. the roots of a SignalModel).
template <typename Real>
NormalizedWeight<Real> normalize_weight(const std::vector<RootCluster<Real>>& signal, Real cluster_tol = Real(1e-6),
                                        Real leading_tol = Real(1e-9)) {
  if (signal.empty()) throw Error(ErrorKind::ConstantPolynomial, "weight without roots");
  std::vector<std::complex<Real>> reflected;
  for (const auto& c : signal) {
    const auto z = std::abs(c.value) > Real(1) ? std::conj(Real(1) / c.value) : c.value;
    for (int k = 0; k < c.multiplicity; ++k) reflected.push_back(z);
  }
  NormalizedWeight<Real> w;
  w.clusters = cluster_roots(reflected, cluster_tol);
  for (const auto& c : w.clusters) w.rho = std::max(w.rho, std::abs(c.value));
  const Real rho = w.rho;
  auto leading = [rho, leading_tol](const RootCluster<Real>& c) { return std::abs(std::abs(c.value) - rho) < leading_tol; };
  std::stable_sort(w.clusters.begin(), w.clusters.end(), [&](const auto& a, const auto& b) {
    const bool la = leading(a), lb = leading(b);
    if (la != lb) return la;
    if (la && a.multiplicity != b.multiplicity) return a.multiplicity > b.multiplicity;
    return false;
  });
  for (const auto& c : w.clusters) {
    if (!leading(c)) break;
    ++w.u;
  }
  w.M = w.clusters.front().multiplicity;
  for (int k = 0; k < w.u && w.clusters[static_cast<std::size_t>(k)].multiplicity == w.M; ++k) ++w.ell;
  w.C = from_roots(w.clusters);
  return w;
}

template <typename Real>
NormalizedWeight<Real> normalize_weight(const Polynomial<Real>& p, Real cluster_tol = Real(1e-6)) {
  if (p.degree() < 1) throw Error(ErrorKind::ConstantPolynomial, "weight polynomial must have degree >= 1");
  return normalize_weight(roots(p, cluster_tol), cluster_tol);
}

template <typename Real>
struct RootDiagnostics {
  std::vector<std::complex<Real>> general;
  std::vector<std::complex<Real>> spurious;
  Real delta = 0;
  std::vector<Real> gap_stats;  // adjacent angular gaps of the general roots sorted by argument
  Real modulus_stats = 0;       // mean |z| of the general roots
};

/// Roots with |z| <= rho - delta are spurious, the others general.
template <typename Real>
RootDiagnostics<Real> classify_roots(const std::vector<std::complex<Real>>& roots, const NormalizedWeight<Real>& w,
                                     Real delta) {
  if (!(delta > 0 && delta < w.rho)) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, rho)");
  RootDiagnostics<Real> out;
  out.delta = delta;
  for (const auto& z : roots) (std::abs(z) <= w.rho - delta ? out.spurious : out.general).push_back(z);
  std::vector<Real> args;
  for (const auto& z : out.general) {
    args.push_back(std::arg(z));
    out.modulus_stats += std::abs(z);
  }
  if (!out.general.empty()) out.modulus_stats /= static_cast<Real>(out.general.size());
  std::sort(args.begin(), args.end());
  for (std::size_t k = 1; k < args.size(); ++k) out.gap_stats.push_back(args[k] - args[k - 1]);
  return out;
}

template <typename Real>
RootDiagnostics<Real> classify_roots(const std::vector<std::complex<Real>>& roots, const NormalizedWeight<Real>& w) {
  return classify_roots(roots, w, Real(0.15) * w.rho);
}

///
/// G_n(z), whose zeros the spurious roots follow for large n:
///   rho < 1:  sum_{k<=ell} a_k^{n-M+d+1} C*(a_k) / ((z - a_k) C^{(M)}(a_k))
///   rho = 1:  sum_{k<=u}   a_k^{n+d+1} (-1)^{m_k} m_k (C*)^{(m_k)}(a_k) / ((z - a_k) C^{(m_k)}(a_k))
///
template <typename Real>
std::complex<Real> g_function(const NormalizedWeight<Real>& w, int n, std::complex<Real> z) {
  using Complex = std::complex<Real>;
  const int d = w.degree();
  const Polynomial<Real> cstar = star(w.C);
  Complex acc(0);
  for (const auto& a : w.active_roots()) {
    if (std::abs(z - a.value) < Real(1e-12)) throw Error(ErrorKind::PoleEvaluation, "G_n evaluated at a leading root");
    if (!w.on_unit_circle()) {
      const Complex num = std::pow(a.value, static_cast<Real>(n - w.M + d + 1)) * cstar(a.value);
      acc += num / ((z - a.value) * derivative(w.C, w.M)(a.value));
    } else {
      const int m = a.multiplicity;
      const Real sign = (m % 2 == 0) ? Real(1) : Real(-1);
      const Complex num = std::pow(a.value, static_cast<Real>(n + d + 1)) * sign * static_cast<Real>(m) *
                          derivative(cstar, m)(a.value);
      acc += num / ((z - a.value) * derivative(w.C, m)(a.value));
    }
  }
  return acc;
}

/// Zeros of G_n: the roots of its numerator sum_k r_k prod_{j != k} (z - a_j).
template <typename Real>
std::vector<std::complex<Real>> g_function_zeros(const NormalizedWeight<Real>& w, int n) {
  using Complex = std::complex<Real>;
  const auto active = w.active_roots();
  if (active.size() < 2) return {};
  // residue r_k = lim (z - a_k) G_n(z), read off by evaluating next to the pole
  Polynomial<Real> numerator;
  for (std::size_t k = 0; k < active.size(); ++k) {
    const Real h = Real(1e-7) * std::max(Real(1), std::abs(active[k].value));
    const Complex probe = active[k].value + h;
    const Complex residue = g_function(w, n, probe) * h;
    Polynomial<Real> term{residue};
    for (std::size_t j = 0; j < active.size(); ++j)
      if (j != k) term = term * Polynomial<Real>{-active[j].value, Complex(1)};
    numerator = numerator + term;
  }
  if (numerator.degree() < 1) return {};
  return raw_roots(numerator);
}

template <typename Real>
struct ModulusLawPoint {
  int n = 0;
  Real mean_modulus = 0;
  Real predicted = 0;
  Real residual = 0;  // mean_modulus - predicted
  int spurious = 0;
};

///
/// Mean modulus of the general roots of H_n against
///   rho (1 + M log(n)/n)   (rho < 1)   or   1 + log(n)/n   (rho = 1).
///
template <typename Real>
std::vector<ModulusLawPoint<Real>> modulus_law_residual(const NormalizedWeight<Real>& w, const std::vector<int>& n_values,
                                                        Real delta_fraction = Real(0.15)) {
  std::vector<ModulusLawPoint<Real>> out;
  for (int n : n_values) {
    if (n < 4) throw Error(ErrorKind::InvalidArgument, "modulus law needs n >= 4");
    const auto diag = classify_roots(extraneous_roots(w.C, n), w, delta_fraction * w.rho);
    ModulusLawPoint<Real> pt;
    pt.n = n;
    pt.mean_modulus = diag.modulus_stats;
    const Real ln = std::log(static_cast<Real>(n)) / static_cast<Real>(n);
    pt.predicted = w.on_unit_circle() ? Real(1) + ln : w.rho * (Real(1) + static_cast<Real>(w.M) * ln);
    pt.residual = pt.mean_modulus - pt.predicted;
    pt.spurious = static_cast<int>(diag.spurious.size());
    out.push_back(pt);
  }
  return out;
}

///
/// max |gap - 2 pi / n| over angularly adjacent roots (including the pair
/// across +-pi). Gaps whose arc contains one of excluded_args (the
/// directions of the leading roots) are skipped.
///
template <typename Real>
Real angular_equidistribution(const std::vector<std::complex<Real>>& roots, int n,
                              const std::vector<Real>& excluded_args = {}) {
  constexpr Real two_pi = 2 * std::numbers::pi_v<Real>;
  if (roots.size() < 3) throw Error(ErrorKind::TooFewRoots, "angular statistics need at least 3 roots");
  std::vector<Real> args;
  for (const auto& z : roots) args.push_back(std::arg(z));
  std::sort(args.begin(), args.end());
  auto contains = [&](Real lo, Real hi) {
    for (Real e : excluded_args) {
      for (Real shift : {Real(0), two_pi, -two_pi})
        if (e + shift > lo && e + shift < hi) return true;
    }
    return false;
  };
  Real worst = 0;
  const Real expected = two_pi / static_cast<Real>(n);
  for (std::size_t k = 0; k < args.size(); ++k) {
    const Real lo = args[k];
    const Real hi = k + 1 < args.size() ? args[k + 1] : args.front() + two_pi;
    if (contains(lo, hi)) continue;
    worst = std::max(worst, std::abs((hi - lo) - expected));
  }
  return worst;
}

template <typename Real>
std::vector<Real> leading_arguments(const NormalizedWeight<Real>& w) {
  std::vector<Real> out;
  for (const auto& c : w.active_roots()) out.push_back(std::arg(c.value));
  return out;
}

}  // namespace ssaroots

#endif  // SSAROOTS_ASYMPTOTICS_HPP
