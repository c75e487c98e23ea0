// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "ssaroots/asymptotics.hpp"
#include "ssaroots/scenario.hpp"
#include "ssaroots/separability.hpp"
#include "support.hpp"

using namespace ssaroots;
using namespace testing;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

// roots separated by at least 0.1 with modulus in [0.8, 1.2]; keeps the exact-data SVD well conditioned up to L = 40
std::vector<Model> model_suite(int count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> dim(1, 5);
  std::vector<Model> out;
  for (int k = 0; k < count; ++k) out.push_back(random_model(gen, dim(gen), 0.8, 1.2));
  return out;
}

std::vector<int> suite_windows(const std::vector<Model>& models, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<int> out;
  for (const auto& m : models) {
    std::uniform_int_distribution<int> window(m.difference_dimension() + 2, 40);
    out.push_back(window(gen));
  }
  return out;
}

Outcome closed_form() {
  double worst = 0;
  for (Complex lambda : {Complex(1), Complex(2), Complex(0, 1), Complex(0.5, 0.5)}) {
    // hand-solved T_1 h = e_2 with T_1 = [[1+|l|^2, -l], [-conj(l), 1+|l|^2]]: h = (l, 1+|l|^2) / det
    const double s = 1 + std::norm(lambda);
    const Complex oracle = -lambda / s;
    const auto lrf = ssa_vector_by_projection(linear(lambda), 3);
    auto r = raw_roots(lrf.polynomial());
    const auto signal = match_roots(r, {lambda});
    r.erase(r.begin() + static_cast<std::ptrdiff_t>(signal[0]));
    worst = std::max(worst, std::abs(r.at(0) - oracle));
  }
  return {worst < 1e-10, "max error " + io::format_number(worst)};
}

Outcome constant_weight() {
  double worst = 0;
  for (int n = 0; n <= 50; ++n) {
    const auto h = extraneous_poly(linear(1), n).H;
    const Complex scale = h[n] / static_cast<double>(n + 1);
    for (int k = 0; k <= n; ++k) worst = std::max(worst, std::abs(h[k] / scale - static_cast<double>(k + 1)));
  }
  return {worst < 1e-9, "max deviation " + io::format_number(worst)};
}

Outcome containment() {
  std::mt19937_64 gen(301);
  std::uniform_int_distribution<int> deg(1, 5);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Complex> r;
    for (int k = deg(gen); k > 0; --k) r.push_back(random_root(gen, 0.3, 2.0));
    const Poly p = from_roots(r);
    const auto band = toeplitz_coeffs(p);
    const auto family = orthogonal_family(band, 60);
    for (int n = 1; n <= 60; ++n)
      for (auto z : raw_roots(family[static_cast<std::size_t>(n)])) worst = std::max(worst, std::abs(z));
  }
  return {worst < 1 - 1e-12, "max |z| " + io::format_number(worst)};
}

Outcome two_path(const std::vector<Model>& models, const std::vector<int>& windows) {
  double worst = 0;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const int d = models[k].difference_dimension();
    const int window = windows[k];
    const auto f = generate(models[k], 2 * window + d);
    const auto a = ssa_lrf_from_subspace(trajectory_basis(hankel(f, window), d)).A;
    const auto b = ssa_vector_by_projection(char_poly(models[k]), window).A;
    worst = std::max(worst, (a - b).norm() / b.norm());
  }
  return {worst < 1e-8, "max relative difference " + io::format_number(worst)};
}

Outcome conjugacy(const std::vector<Model>& models, const std::vector<int>& windows) {
  double worst = 0;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const Poly p = char_poly(models[k]);
    const int n = windows[k] - 1 - p.degree();
    std::vector<Complex> forward;
    for (auto z : extraneous_roots(p, n)) forward.push_back(std::conj(z));
    worst = std::max(worst, hausdorff(backward_extraneous_roots(p, n), forward));
  }
  return {worst < 1e-8, "max Hausdorff distance " + io::format_number(worst)};
}

Outcome orthogonality() {
  std::mt19937_64 gen(601);
  std::uniform_int_distribution<int> deg(1, 5);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> r;
    for (int k = deg(gen); k > 0; --k) r.push_back(random_root(gen, 0.3, 2.0));
    worst = std::max(worst, verify_orthogonality(from_roots(r), 20).max_cross);
  }
  return {worst < 1e-10, "max normalized cross product " + io::format_number(worst)};
}

Outcome rank_theorem() {
  std::mt19937_64 gen(701);
  std::uniform_int_distribution<int> dim(1, 5);
  double top_gap = 0, bottom = 1;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = dim(gen);
    const auto f = generate(random_model(gen, d, 0.7, 1.3), 40);
    for (int window = 2; window < 40; ++window) {
      const auto sv = singular_values(hankel(f, window));
      if (d <= sv.size()) bottom = std::min(bottom, sv[d - 1] / sv[0]);
      if (d < sv.size()) top_gap = std::max(top_gap, sv[d] / sv[0]);
    }
  }
  return {top_gap < 1e-10 && bottom > 1e-6,
          "max sigma_{d+1}/sigma_1 " + io::format_number(top_gap) + ", min sigma_d/sigma_1 " + io::format_number(bottom)};
}

Outcome separability_grid() {
  int agree = 0, disagree = 0;
  double sep_worst = 0, non_best = 1;
  for (int window = 3; window <= 8; ++window) {
    for (double rho : {1.0, 0.9}) {
      for (double omega : {0.0, 0.3 / window}) {
        // lattice candidates for each side plus one off-modulus and one off-angle root
        std::vector<Complex> left, right;
        for (int k = 0; k < window; ++k) {
          left.push_back(polar_turns(rho, omega + static_cast<double>(k) / window));
          right.push_back(polar_turns(1 / rho, omega + static_cast<double>(k) / window));
        }
        left.push_back(polar_turns(1.15 * rho, omega));
        right.push_back(polar_turns(1 / rho, omega + 0.41 / window));
        right.push_back(polar_turns(0.85 / rho, omega + 1.0 / window));
        auto subsets = [](const std::vector<Complex>& v) {
          std::vector<std::vector<Complex>> out;
          for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back({v[i]});
            for (std::size_t j = i + 1; j < v.size(); ++j) out.push_back({v[i], v[j]});
          }
          return out;
        };
        const auto ls = subsets(left), rs = subsets(right);
        for (const auto& a : ls) {
          if (a.size() == 2 && std::abs(a[0]) != std::abs(a[1])) continue;
          for (const auto& b : rs) {
            bool overlap = false;
            for (auto x : a)
              for (auto y : b) overlap = overlap || std::abs(x - y) < 1e-9;
            if (overlap) continue;
            std::vector<SignalTerm<double>> ta, tb;
            for (auto x : a) ta.push_back({x, Poly{Complex(1)}});
            for (auto y : b) tb.push_back({y, Poly{Complex(1)}});
            const Model m1(std::move(ta)), m2(std::move(tb));
            const bool verdict = check_left_separable(m1, m2, window).separable;
            const double numeric = numeric_separability(generate(m1, 3 * window), generate(m2, 3 * window), window);
            const bool ok = verdict ? numeric < 1e-10 : numeric > 1e-4;
            (ok ? agree : disagree)++;
            if (verdict) sep_worst = std::max(sep_worst, numeric);
            else non_best = std::min(non_best, numeric);
          }
        }
      }
    }
  }
  const Model c = Model::exponential(1), q = Model::exponential(Complex(0, 1));
  const bool yes = check_two_sided(c, q, 4, 11).separable &&
                   numeric_separability(generate(c, 11), generate(q, 11), 4) < 1e-10 &&
                   numeric_separability(generate(c, 11), generate(q, 11), 8) < 1e-10;
  const bool no = !check_two_sided(c, q, 4, 12).separable && numeric_separability(generate(c, 12), generate(q, 12), 9) > 1e-4;
  return {disagree == 0 && yes && no, std::to_string(agree) + " agree, " + std::to_string(disagree) +
                                          " disagree, worst separable " + io::format_number(sep_worst) +
                                          ", best non-separable " + io::format_number(non_best) +
                                          (yes && no ? ", gcd cases ok" : ", gcd cases wrong")};
}

Outcome spurious_bound() {
  auto cfg = default_config(ScenarioKind::Extsam);
  cfg.windows = {20, 30, 50};
  const auto report = run_scenario(cfg);
  std::string detail = "damped cosines spurious";
  bool cosines_ok = true;
  for (const auto& r : report.runs) {
    const int s = r.summary.at("spurious").get<int>();
    detail += " " + std::to_string(s);
    cosines_ok = cosines_ok && s <= 3;
  }
  const auto w = normalize_weight(linear(1));
  std::vector<int> bad;
  for (int n = 10; n <= 60; ++n)
    if (!classify_roots(extraneous_roots(w.C, n), w).spurious.empty()) bad.push_back(n);
  detail += "; z-1 weight spurious at " + std::to_string(bad.size()) + " of 51 degrees n in [10, 60]";
  if (!bad.empty()) detail += " (n = " + std::to_string(bad.front()) + ".." + std::to_string(bad.back()) + ")";
  return {cosines_ok && bad.empty(), detail};
}

Outcome angular() {
  const auto w = normalize_weight(linear(1));
  const double e64 = angular_equidistribution(extraneous_roots(w.C, 64), 64, leading_arguments(w));
  const double e128 = angular_equidistribution(extraneous_roots(w.C, 128), 128, leading_arguments(w));
  const double ratio = e64 / e128;
  return {ratio >= 2.5 && ratio <= 6, "ratio " + io::format_number(ratio)};
}

Outcome min_norm() {
  std::mt19937_64 gen(1101);
  std::uniform_int_distribution<int> deg(1, 5), extra(1, 10);
  int passed = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Complex> r;
    for (int k = deg(gen); k > 0; --k) r.push_back(random_root(gen, 0.3, 2.0));
    const Poly p = from_roots(r);
    const int window = p.degree() + 1 + extra(gen);
    passed += min_norm_check(ssa_vector_by_projection(p, window).A, p, 100, 5000 + trial);
  }
  return {passed == 50, std::to_string(passed) + "/50 weights"};
}

Outcome noise_experiment() {
  auto cfg = default_config(ScenarioKind::Noised);
  cfg.seed = 1;
  const auto report = run_scenario(cfg);
  int recovered = 0;
  double worst = 0;
  for (const auto& r : report.runs) {
    recovered += r.summary.at("recovered").get<bool>();
    worst = std::max(worst, r.summary.at("max_estimate_error").get<double>());
  }
  return {recovered >= 8, std::to_string(recovered) + "/10 seeds within 0.05, worst error " + io::format_number(worst)};
}

Outcome multiplicity() {
  auto cfg = default_config(ScenarioKind::Mult);
  cfg.seed = 1;
  const auto report = run_scenario(cfg);
  int kept = 0, noisy = 0;
  double lo = 1;
  for (const auto& r : report.runs) {
    if (!r.seed) continue;
    ++noisy;
    const double m = r.summary.at("min_extraneous_modulus").get<double>();
    lo = std::min(lo, m);
    kept += m > 0.8 * (1 - 0.15);
  }
  return {noisy == 10 && kept >= 8,
          std::to_string(kept) + "/" + std::to_string(noisy) + " seeds, min extraneous modulus " + io::format_number(lo)};
}

}  // namespace

int main() {
  const auto models = model_suite(100, 401);
  const auto windows = suite_windows(models, 402);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"closed-form extraneous root", closed_form},
      {"weight |z-1|^2", constant_weight},
      {"root containment", containment},
      {"two-path consistency", [&] { return two_path(models, windows); }},
      {"forward/backward conjugacy", [&] { return conjugacy(models, windows); }},
      {"orthogonality", orthogonality},
      {"rank theorem", rank_theorem},
      {"separability oracle", separability_grid},
      {"spurious-root bound", spurious_bound},
      {"angular equidistribution", angular},
      {"Min-Norm optimality", min_norm},
      {"noise experiment", noise_experiment},
      {"multiplicity robustness", multiplicity},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s %2zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
