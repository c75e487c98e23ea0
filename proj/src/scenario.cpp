#include "ssaroots/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "ssaroots/rng.hpp"
#include "ssaroots/separability.hpp"
#include "ssaroots/version.hpp"

namespace ssaroots {

using Complex = std::complex<double>;

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ConfigInvalid, field + ": " + what);
}

bool by_modulus_desc(Complex a, Complex b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  return std::arg(a) > std::arg(b);
}

std::vector<Complex> expanded_roots(const SignalModel<double>& m) {
  std::vector<Complex> out;
  for (const auto& c : m.root_clusters())
    for (int k = 0; k < c.multiplicity; ++k) out.push_back(c.value);
  return out;
}

}  // namespace

LrfRootSet lrf_roots(const TimeSeries<double>& f, int window, int d, Direction direction,
                     BackwardConvention convention) {
  TimeSeries<double> g = f;
  if (direction == Direction::Backward) g = f.reverse().eval();
  const auto basis = trajectory_basis(hankel(g, window), d, false);
  LrfRootSet out{ssa_lrf_from_subspace(basis), {}};
  out.roots = raw_roots(out.lrf.polynomial());
  if (direction == Direction::Backward && convention == BackwardConvention::Conjugated)
    for (auto& z : out.roots) z = std::conj(z);
  return out;
}

std::vector<std::size_t> match_roots(const std::vector<Complex>& roots, const std::vector<Complex>& targets) {
  if (targets.size() > roots.size()) throw Error(ErrorKind::InvalidArgument, "more targets than roots");
  struct Pair {
    double dist;
    std::size_t root, target;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t t = 0; t < targets.size(); ++t) pairs.push_back({std::abs(roots[i] - targets[t]), i, t});
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.dist < b.dist; });
  std::vector<std::size_t> out(targets.size(), roots.size());
  std::vector<bool> used(roots.size(), false);
  std::size_t assigned = 0;
  for (const auto& p : pairs) {
    if (assigned == targets.size()) break;
    if (used[p.root] || out[p.target] != roots.size()) continue;
    used[p.root] = true;
    out[p.target] = p.root;
    ++assigned;
  }
  return out;
}

SignalRootEstimate estimate_signal_roots(const TimeSeries<double>& f, int window, int d, double margin,
                                         double cluster_tol) {
  if (!(d >= 1 && d < window)) throw Error(ErrorKind::InvalidArgument, "need 1 <= d < L");
  if (2 * window > f.size()) throw Error(ErrorKind::WindowOutOfRange, "root-Min-Norm needs L <= N/2");
  auto all = lrf_roots(f, window, d).roots;
  std::sort(all.begin(), all.end(), by_modulus_desc);
  SignalRootEstimate out;
  const std::vector<Complex> top(all.begin(), all.begin() + d);
  out.signal = cluster_roots(top, cluster_tol);
  out.extraneous.assign(all.begin() + d, all.end());
  out.all_inside = std::all_of(top.begin(), top.end(), [margin](Complex z) { return std::abs(z) < 1 - margin; });
  if (out.all_inside)
    out.warning =
        "all selected roots lie inside the unit circle; extraneous roots may be larger than the signal roots "
        "and root-Min-Norm is unreliable (consider the backward LRF)";
  return out;
}

TimeSeries<double> add_noise(const TimeSeries<double>& f, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0)) throw Error(ErrorKind::InvalidArgument, "noise standard deviation must be non-negative");
  SplitMix64 gen(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  TimeSeries<double> out = f;
  if (sigma == 0) return out;
  for (Eigen::Index n = 0; n < out.size(); ++n) out[n] += normal(gen);
  return out;
}

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::SepConstant: return "sep_constant";
    case ScenarioKind::SepExponent: return "sep_exponent";
    case ScenarioKind::SepConjugate: return "sep_conjugate";
    case ScenarioKind::Extsam: return "extsam";
    case ScenarioKind::Noised: return "noised";
    case ScenarioKind::Mult: return "mult";
    case ScenarioKind::Custom: return "custom";
  }
  return "unknown";
}

ScenarioKind scenario_from_string(std::string_view name) {
  for (auto k : {ScenarioKind::SepConstant, ScenarioKind::SepExponent, ScenarioKind::SepConjugate,
                 ScenarioKind::Extsam, ScenarioKind::Noised, ScenarioKind::Mult, ScenarioKind::Custom})
    if (name == to_string(k)) return k;
  invalid("scenario", "unknown scenario '" + std::string(name) + "'");
}

ScenarioConfig default_config(ScenarioKind kind) {
  constexpr double pi = std::numbers::pi;
  ScenarioConfig cfg;
  cfg.scenario = kind;
  auto real = [](std::vector<RealTerm<double>> terms) { return io::ModelSpec{real_to_complex(terms), true}; };
  switch (kind) {
    case ScenarioKind::SepConstant:
      cfg.model = real({{1.0, 0.0, 0.0, {1.0}}});
      cfg.windows = {8};
      cfg.N = 16;
      break;
    case ScenarioKind::SepExponent:
      cfg.model = io::ModelSpec{SignalModel<double>::exponential(std::polar(1.2, 2 * pi * 0.05)), false};
      cfg.windows = {8};
      cfg.N = 16;
      break;
    case ScenarioKind::SepConjugate:
      // cosine with omega = m / (2L), m = 3, L = 8
      cfg.model = real({{1.0, 3.0 / 16.0, 0.0, {1.0}}});
      cfg.windows = {8};
      cfg.N = 16;
      break;
    case ScenarioKind::Extsam:
      cfg.model = real({{0.9, 1.0 / 8.0, 0.0, {1.0}}, {0.9, std::sin(0.25), 0.0, {1.0}}});
      cfg.windows = {10, 20, 30, 50};
      cfg.N = 100;
      cfg.d = 4;
      break;
    case ScenarioKind::Noised:
      cfg.model = real({{1.05, 0.0, 0.0, {1.0}}, {1.1, 0.5 / (2 * pi), 0.0, {0.1}}});
      cfg.N = 300;
      cfg.windows = {100};
      cfg.d = 3;
      cfg.noise_std = 50;
      cfg.runs = 10;
      break;
    case ScenarioKind::Mult:
      cfg.model = real({{0.8, 0.0, 0.0, {0.0, 0.0, 1.0}}});
      cfg.N = 150;
      cfg.windows = {50};
      cfg.d = 3;
      cfg.noise_std = 1.0;
      cfg.runs = 10;
      break;
    case ScenarioKind::Custom:
      break;
  }
  return cfg;
}

namespace {

int int_field(const io::json& v, const std::string& field) {
  if (!v.is_number_integer()) invalid(field, "expected an integer");
  return v.get<int>();
}

double real_field(const io::json& v, const std::string& field) {
  if (!v.is_number()) invalid(field, "expected a number");
  return v.get<double>();
}

}  // namespace

ScenarioConfig config_from_json(const io::json& j) {
  if (!j.is_object()) invalid("config", "expected a JSON object");
  if (!j.contains("scenario") || !j["scenario"].is_string()) invalid("scenario", "required string field");
  ScenarioConfig cfg = default_config(scenario_from_string(j["scenario"].get<std::string>()));
  for (const auto& [key, v] : j.items()) {
    if (key == "scenario") continue;
    if (key == "model") cfg.model = io::model_from_json(v, "model");
    else if (key == "N") cfg.N = int_field(v, "N");
    else if (key == "L") {
      cfg.windows.clear();
      if (v.is_array()) {
        for (std::size_t k = 0; k < v.size(); ++k) cfg.windows.push_back(int_field(v[k], "L[" + std::to_string(k) + "]"));
      } else {
        cfg.windows.push_back(int_field(v, "L"));
      }
    } else if (key == "d") cfg.d = int_field(v, "d");
    else if (key == "noise_std") cfg.noise_std = real_field(v, "noise_std");
    else if (key == "seed") {
      if (v.is_null()) cfg.seed.reset();
      else if (v.is_number_unsigned()) cfg.seed = v.get<std::uint64_t>();
      else invalid("seed", "expected a non-negative 64-bit integer");
    } else if (key == "runs") cfg.runs = int_field(v, "runs");
    else if (key == "delta") cfg.delta = real_field(v, "delta");
    else if (key == "margin") cfg.margin = real_field(v, "margin");
    else if (key == "backward") {
      if (!v.is_boolean()) invalid("backward", "expected a boolean");
      cfg.backward = v.get<bool>();
    } else if (key == "conjugated_backward") {
      if (!v.is_boolean()) invalid("conjugated_backward", "expected a boolean");
      cfg.conjugated_backward = v.get<bool>();
    } else if (key == "output_dir") {
      if (!v.is_string()) invalid("output_dir", "expected a string");
      cfg.output_dir = v.get<std::string>();
    } else {
      invalid(key, "unknown field");
    }
  }
  validate(cfg);
  return cfg;
}

io::json config_to_json(const ScenarioConfig& cfg) {
  io::json j;
  j["scenario"] = to_string(cfg.scenario);
  j["model"] = cfg.model ? io::model_to_json(cfg.model->model) : io::json(nullptr);
  j["real_form"] = cfg.model ? cfg.model->real_form : false;
  j["N"] = cfg.N;
  j["L"] = cfg.windows;
  j["d"] = cfg.d;
  j["noise_std"] = cfg.noise_std;
  j["seed"] = cfg.seed ? io::json(*cfg.seed) : io::json(nullptr);
  j["runs"] = cfg.runs;
  j["delta"] = cfg.delta;
  j["margin"] = cfg.margin;
  j["backward"] = cfg.backward;
  j["conjugated_backward"] = cfg.conjugated_backward;
  return j;
}

void validate(const ScenarioConfig& cfg) {
  if (!cfg.model) invalid("model", "required for this scenario");
  if (cfg.model->model.is_zero()) invalid("model", "the zero series has no roots");
  if (cfg.N < 4) invalid("N", "must be at least 4");
  if (cfg.windows.empty()) invalid("L", "at least one window length is required");
  const int dim = cfg.model->model.difference_dimension();
  const int d = cfg.d > 0 ? cfg.d : dim;
  if (cfg.d < 0) invalid("d", "must be positive");
  for (int window : cfg.windows) {
    if (window < 2) invalid("L", "window lengths must be at least 2");
    if (2 * window > cfg.N) invalid("L", "N >= 2L is required (L = " + std::to_string(window) + ")");
    if (d >= window) invalid("L", "d < L is required (L = " + std::to_string(window) + ")");
  }
  if (!(cfg.noise_std >= 0)) invalid("noise_std", "must be non-negative");
  if (cfg.noise_std > 0 && !cfg.seed) invalid("seed", "required when noise_std > 0");
  if (cfg.runs < 1) invalid("runs", "must be at least 1");
  if (!(cfg.delta > 0 && cfg.delta < 1)) invalid("delta", "must lie in (0, 1)");
  if (!(cfg.margin >= 0 && cfg.margin < 1)) invalid("margin", "must lie in [0, 1)");
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int thread_count() {
  if (const char* env = std::getenv("SSA_ROOTS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Task {
  int window;
  bool noisy;
  std::uint64_t seed;
};

std::string task_file(const ScenarioConfig& cfg, const Task& t) {
  std::string name = std::string(to_string(cfg.scenario)) + "_L" + std::to_string(t.window);
  if (t.noisy) name += "_seed" + std::to_string(t.seed);
  else if (cfg.noise_std > 0) name += "_clean";
  return name + ".csv";
}

void sort_rows(std::vector<io::RootRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const io::RootRow& a, const io::RootRow& b) {
    if (a.side != b.side) return a.side > b.side;  // forward first
    if (a.kind != b.kind) return a.kind > b.kind;  // signal, separable, extraneous
    return by_modulus_desc(a.z, b.z);
  });
}

RunResult run_separability(const ScenarioConfig& cfg, const Task& t) {
  const auto& model = cfg.model->model;
  RunResult r;
  r.window = t.window;
  for (const auto& c : model.root_clusters())
    for (int k = 0; k < c.multiplicity; ++k) r.rows.push_back({c.value, "signal", "forward", t.window});
  const auto family = separable_family<double>(vandermonde_basis(model, t.window));
  std::vector<SignalTerm<double>> terms;
  for (const auto& c : family.admissible_roots) {
    r.rows.push_back({c.value, "separable", "forward", t.window});
    terms.push_back({c.value, Polynomial<double>{Complex(1)}});
  }
  r.summary["separable_roots"] = family.admissible_roots.size();
  if (!terms.empty()) {
    const SignalModel<double> partner(std::move(terms));
    const auto verdict = check_left_separable(model, partner, t.window);
    r.summary["criterion_separable"] = verdict.separable;
    r.summary["numeric_separability"] = numeric_separability(generate(model, cfg.N), generate(partner, cfg.N), t.window);
  }
  if (cfg.scenario == ScenarioKind::SepConjugate) {
    io::json constraint = io::json::array();
    for (const auto& term : model.terms()) {
      if (term.root.imag() == 0) continue;
      const auto m = check_conjugate_pair_constraint(term.root, t.window);
      constraint.push_back(m ? io::json(*m) : io::json(nullptr));
    }
    r.summary["conjugate_pair_m"] = constraint;
  }
  return r;
}

RunResult run_roots(const ScenarioConfig& cfg, const Task& t) {
  const auto& spec = *cfg.model;
  const int d = cfg.d > 0 ? cfg.d : spec.model.difference_dimension();
  TimeSeries<double> f = generate(spec.model, cfg.N);
  if (spec.real_form) f = f.real().cast<Complex>();
  if (t.noisy) f = add_noise(f, cfg.noise_std, t.seed);

  RunResult r;
  r.window = t.window;
  if (t.noisy) r.seed = t.seed;
  const auto weight = normalize_weight(spec.model.root_clusters());
  const std::vector<Complex> truth = expanded_roots(spec.model);

  auto emit = [&](const std::vector<Complex>& roots, const std::vector<bool>& is_signal, const std::string& side) {
    for (std::size_t i = 0; i < roots.size(); ++i)
      r.rows.push_back({roots[i], is_signal[i] ? "signal" : "extraneous", side, t.window});
  };

  const auto forward = lrf_roots(f, t.window, d);
  std::vector<bool> is_signal(forward.roots.size(), false);
  if (cfg.scenario == ScenarioKind::Noised) {
    const auto est = estimate_signal_roots(f, t.window, d, cfg.margin);
    std::vector<Complex> sorted = forward.roots;
    std::sort(sorted.begin(), sorted.end(), by_modulus_desc);
    std::vector<Complex> top(sorted.begin(), sorted.begin() + d);
    std::vector<bool> flags(sorted.size(), false);
    std::fill(flags.begin(), flags.begin() + d, true);
    emit(sorted, flags, "forward");
    double worst = 0;
    const auto idx = match_roots(top, truth);
    for (std::size_t k = 0; k < truth.size(); ++k) worst = std::max(worst, std::abs(top[idx[k]] - truth[k]));
    r.summary["max_estimate_error"] = worst;
    r.summary["recovered"] = worst < 0.05;
    if (!est.warning.empty()) r.summary["warning"] = est.warning;
    std::vector<Complex> extraneous(sorted.begin() + d, sorted.end());
    r.summary["min_extraneous_modulus"] =
        extraneous.empty() ? 0.0 : std::abs(*std::min_element(extraneous.begin(), extraneous.end(), [](Complex a, Complex b) {
          return std::abs(a) < std::abs(b);
        }));
  } else {
    for (std::size_t k : match_roots(forward.roots, truth)) is_signal[k] = true;
    emit(forward.roots, is_signal, "forward");
    std::vector<Complex> signal, extraneous;
    for (std::size_t i = 0; i < forward.roots.size(); ++i) (is_signal[i] ? signal : extraneous).push_back(forward.roots[i]);
    double worst = 0;
    const auto idx = match_roots(signal, truth);
    for (std::size_t k = 0; k < truth.size(); ++k) worst = std::max(worst, std::abs(signal[idx[k]] - truth[k]));
    r.summary["max_signal_error"] = worst;
    if (!extraneous.empty()) {
      const auto diag = classify_roots(extraneous, weight, cfg.delta * weight.rho);
      r.summary["spurious"] = diag.spurious.size();
      r.summary["general"] = diag.general.size();
      r.summary["mean_general_modulus"] = diag.modulus_stats;
      double lo = std::abs(extraneous.front());
      for (auto z : extraneous) lo = std::min(lo, std::abs(z));
      r.summary["min_extraneous_modulus"] = lo;
    }
    std::vector<Complex> sorted = forward.roots;
    std::sort(sorted.begin(), sorted.end(), by_modulus_desc);
    r.summary["top_d_are_signal"] = std::all_of(sorted.begin(), sorted.begin() + d, [&](Complex z) {
      for (std::size_t i = 0; i < forward.roots.size(); ++i)
        if (forward.roots[i] == z) return static_cast<bool>(is_signal[i]);
      return false;
    });
  }
  r.summary["rho"] = weight.rho;
  r.summary["ell"] = weight.ell;
  r.summary["u"] = weight.u;
  r.summary["M"] = weight.M;
  r.summary["nu2"] = forward.lrf.nu2;

  if (cfg.backward) {
    const auto conv = cfg.conjugated_backward ? BackwardConvention::Conjugated : BackwardConvention::Plain;
    const auto backward = lrf_roots(f, t.window, d, Direction::Backward, conv);
    std::vector<Complex> targets;
    for (auto z : truth) targets.push_back(conv == BackwardConvention::Plain ? Complex(1) / z : std::conj(Complex(1) / z));
    std::vector<bool> flags(backward.roots.size(), false);
    for (std::size_t k : match_roots(backward.roots, targets)) flags[k] = true;
    emit(backward.roots, flags, "backward");
  }
  return r;
}

}  // namespace

ExperimentReport run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  std::vector<Task> tasks;
  const bool separability = cfg.scenario == ScenarioKind::SepConstant || cfg.scenario == ScenarioKind::SepExponent ||
                            cfg.scenario == ScenarioKind::SepConjugate;
  for (int window : cfg.windows) {
    if (cfg.noise_std == 0 || cfg.scenario == ScenarioKind::Mult || separability) tasks.push_back({window, false, 0});
    if (cfg.noise_std > 0 && !separability)
      for (int k = 0; k < cfg.runs; ++k) tasks.push_back({window, true, *cfg.seed + static_cast<std::uint64_t>(k)});
  }

  if (!cfg.output_dir.empty()) std::filesystem::create_directories(cfg.output_dir);

  ExperimentReport report;
  report.runs.resize(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        RunResult r = separability ? run_separability(cfg, tasks[i]) : run_roots(cfg, tasks[i]);
        r.file = task_file(cfg, tasks[i]);
        sort_rows(r.rows);
        if (!cfg.output_dir.empty()) {
          std::ofstream out(std::filesystem::path(cfg.output_dir) / r.file, std::ios::binary);
          io::write_roots_csv(out, r.rows);
          if (!out) throw Error(ErrorKind::ConfigInvalid, "output_dir: cannot write " + r.file);
        }
        report.runs[i] = std::move(r);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads = std::min<int>(thread_count(), static_cast<int>(tasks.size()));
  {
    std::vector<std::jthread> pool;
    for (int k = 1; k < n_threads; ++k) pool.emplace_back(worker);
    worker();
  }
  // first failure in task order, so the outcome does not depend on scheduling
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  const io::json echo = config_to_json(cfg);
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(echo.dump())));
  io::json runs = io::json::array();
  for (const auto& r : report.runs) {
    io::json entry = {{"file", r.file}, {"L", r.window}, {"seed", r.seed ? io::json(*r.seed) : io::json(nullptr)}};
    entry["summary"] = r.summary;
    runs.push_back(entry);
  }
  report.manifest = {{"version", version}, {"config", echo}, {"config_hash", hash}, {"runs", runs}};
  if (!cfg.output_dir.empty()) {
    std::ofstream out(std::filesystem::path(cfg.output_dir) / "manifest.json", std::ios::binary);
    out << report.manifest.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::ConfigInvalid, "output_dir: cannot write manifest.json");
  }
  return report;
}

}  // namespace ssaroots
