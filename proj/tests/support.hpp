// Shared helpers for the unit tests: random models and independent oracles.
#ifndef SSAROOTS_TESTS_SUPPORT_HPP
#define SSAROOTS_TESTS_SUPPORT_HPP

#include <algorithm>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "ssaroots/polynomial.hpp"
#include "ssaroots/series.hpp"

namespace testing {

using Complex = std::complex<double>;
using Poly = ssaroots::Polynomial<double>;
using Model = ssaroots::SignalModel<double>;
inline constexpr double pi = std::numbers::pi;

inline Complex polar_turns(double rho, double turns) { return std::polar(rho, 2 * pi * turns); }

inline Poly linear(Complex root) { return Poly{-root, Complex(1)}; }

/// Coefficients of (z^L - 1)/(z - 1).
inline Poly ones_poly(int window) {
  ssaroots::ComplexVector<double> c = ssaroots::ComplexVector<double>::Ones(window);
  return Poly(c);
}

/// Root with modulus in [lo, hi] and uniform argument.
inline Complex random_root(std::mt19937_64& gen, double lo, double hi) {
  std::uniform_real_distribution<double> mod(lo, hi), arg(-pi, pi);
  return std::polar(mod(gen), arg(gen));
}

/// Model with simple or multiple roots, total dimension d, pairwise well separated roots.
inline Model random_model(std::mt19937_64& gen, int d, double lo, double hi, bool allow_multiple = true) {
  std::uniform_int_distribution<int> mult(1, allow_multiple ? 2 : 1);
  std::normal_distribution<double> normal;
  std::vector<ssaroots::SignalTerm<double>> terms;
  std::vector<Complex> used;
  int left = d;
  while (left > 0) {
    Complex r;
    do {
      r = random_root(gen, lo, hi);
    } while (std::any_of(used.begin(), used.end(), [&](Complex u) { return std::abs(u - r) < 0.1; }));
    used.push_back(r);
    const int m = std::min(left, mult(gen));
    ssaroots::ComplexVector<double> c(m);
    for (int k = 0; k < m; ++k) c[k] = Complex(normal(gen), normal(gen));
    if (std::abs(c[m - 1]) < 0.2) c[m - 1] = 1;
    terms.push_back({r, Poly(c)});
    left -= m;
  }
  return Model(std::move(terms));
}

/// Naive O(N^2) polynomial product, used as an oracle for convolution.
inline std::vector<Complex> naive_product(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> out(a.size() + b.size() - 1, Complex(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline std::vector<Complex> to_vector(const Poly& p) {
  return std::vector<Complex>(p.coeffs().data(), p.coeffs().data() + p.coeffs().size());
}

inline double max_coeff_diff(const Poly& a, const Poly& b) {
  const Eigen::Index n = std::max(a.coeffs().size(), b.coeffs().size());
  double worst = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex x = k < a.coeffs().size() ? a.coeffs()[k] : Complex(0);
    const Complex y = k < b.coeffs().size() ? b.coeffs()[k] : Complex(0);
    worst = std::max(worst, std::abs(x - y));
  }
  return worst;
}

/// Roots of a multiset as a flat vector.
inline std::vector<Complex> flatten(const std::vector<ssaroots::RootCluster<double>>& clusters) {
  std::vector<Complex> out;
  for (const auto& c : clusters)
    for (int k = 0; k < c.multiplicity; ++k) out.push_back(c.value);
  return out;
}

}  // namespace testing

#endif  // SSAROOTS_TESTS_SUPPORT_HPP
