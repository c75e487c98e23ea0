// ssa-roots: command line front end.
//
// Every subcommand accepts --config <file.json> whose keys match the long
// flag names (with '-' replaced by '_'); flags given on the command line
// override the file. Exit codes: 0 success, 2 configuration error,
// 3 numerical failure, 1 anything unexpected.

#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "ssaroots/scenario.hpp"
#include "ssaroots/separability.hpp"
#include "ssaroots/version.hpp"

using namespace ssaroots;
using io::json;
using Complex = std::complex<double>;

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ConfigInvalid, field + ": " + what);
}

/// Merged view of the config file and the flags actually given.
class Params {
 public:
  Params(const std::string& config_path, std::set<std::string> allowed) : allowed_(std::move(allowed)) {
    if (config_path.empty()) return;
    j_ = io::load_json(config_path);
    if (!j_.is_object()) invalid(config_path, "expected a JSON object");
    for (const auto& [key, _] : j_.items())
      if (!allowed_.count(key)) invalid(key, "unknown field");
  }

  template <typename T>
  void flag(const CLI::Option* opt, const std::string& key, const T& value) {
    if (opt->count() > 0) j_[key] = value;
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_[key].is_null(); }
  const json& raw() const { return j_; }

  int integer(const std::string& key) const {
    if (!has(key)) invalid(key, "required");
    if (!j_[key].is_number_integer()) invalid(key, "expected an integer");
    return j_[key].get<int>();
  }
  int integer(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    if (!j_[key].is_number()) invalid(key, "expected a number");
    return j_[key].get<double>();
  }

  bool boolean(const std::string& key) const {
    if (!has(key)) return false;
    if (!j_[key].is_boolean()) invalid(key, "expected a boolean");
    return j_[key].get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback = "") const {
    if (!has(key)) return fallback;
    if (!j_[key].is_string()) invalid(key, "expected a string");
    return j_[key].get<std::string>();
  }

  /// A model given inline (object) or as a path to a JSON file (string).
  io::ModelSpec model(const std::string& key) const {
    if (!has(key)) invalid(key, "required");
    const json& v = j_[key];
    if (v.is_string()) return io::model_from_json(io::load_json(v.get<std::string>()), key);
    return io::model_from_json(v, key);
  }

 private:
  json j_ = json::object();
  std::set<std::string> allowed_;
};

/// Writes to the file named by "out", or stdout.
template <typename F>
void with_output(const std::string& path, F&& body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) invalid("out", "cannot open " + path);
  body(out);
}

TimeSeries<double> series_of(const io::ModelSpec& spec, int n) {
  TimeSeries<double> f = generate(spec.model, n);
  if (spec.real_form) f = f.real().cast<Complex>();
  return f;
}

std::vector<Complex> expanded_roots(const SignalModel<double>& m) {
  std::vector<Complex> out;
  for (const auto& c : m.root_clusters())
    for (int k = 0; k < c.multiplicity; ++k) out.push_back(c.value);
  return out;
}

std::vector<bool> top_by_modulus(const std::vector<Complex>& roots, int d) {
  std::vector<std::size_t> order(roots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(roots[a]) > std::abs(roots[b]); });
  std::vector<bool> flags(roots.size(), false);
  for (int k = 0; k < d && k < static_cast<int>(order.size()); ++k) flags[order[static_cast<std::size_t>(k)]] = true;
  return flags;
}

// ---- generate -------------------------------------------------------------

struct GenerateCmd {
  std::string config, model, out;
  int n = 0;
  double noise_std = 0;
  std::uint64_t seed = 0;
  CLI::Option *o_model, *o_n, *o_noise, *o_seed, *o_out;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("generate", "Sample a signal model into a CSV series (n,re,im)");
    sub->add_option("--config", config, "JSON file with the parameters below");
    o_model = sub->add_option("--model", model, "SignalModel JSON file");
    o_n = sub->add_option("-N,--N", n, "series length");
    o_noise = sub->add_option("--noise-std", noise_std, "standard deviation of additive real Gaussian noise");
    o_seed = sub->add_option("--seed", seed, "noise seed (required with noise)");
    o_out = sub->add_option("-o,--out", out, "output CSV (default stdout)");
    sub->callback([this] { run(); });
  }

  void run() {
    Params p(config, {"model", "N", "noise_std", "seed", "out"});
    p.flag(o_model, "model", model);
    p.flag(o_n, "N", n);
    p.flag(o_noise, "noise_std", noise_std);
    p.flag(o_seed, "seed", seed);
    p.flag(o_out, "out", out);
    const auto spec = p.model("model");
    const int length = p.integer("N");
    if (length < 1) invalid("N", "must be positive");
    TimeSeries<double> f = series_of(spec, length);
    const double sigma = p.real("noise_std", 0);
    if (sigma < 0) invalid("noise_std", "must be non-negative");
    if (sigma > 0) {
      if (!p.has("seed") || !p.raw()["seed"].is_number_unsigned()) invalid("seed", "required when noise_std > 0");
      f = add_noise(f, sigma, p.raw()["seed"].get<std::uint64_t>());
    }
    if (!within_difference_bound(spec.model.difference_dimension(), length))
      std::cerr << "warning: difference dimension exceeds N/2\n";
    with_output(p.string("out"), [&](std::ostream& os) { io::write_series_csv(os, f); });
  }
};

// ---- roots ----------------------------------------------------------------

struct RootsCmd {
  std::string config, model, series, out;
  int window = 0, d = 0, n = 0;
  bool backward = false, both = false, conjugated = false;
  CLI::Option *o_model, *o_series, *o_out, *o_window, *o_d, *o_n, *o_backward, *o_both, *o_conj;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("roots", "Signal and extraneous roots of the SSA forecasting LRF");
    sub->add_option("--config", config, "JSON file with the parameters below");
    o_model = sub->add_option("--model", model, "SignalModel JSON file");
    o_series = sub->add_option("--series", series, "series CSV (n,re,im); needs --d");
    o_window = sub->add_option("-L,--L", window, "window length");
    o_d = sub->add_option("-d,--d", d, "signal subspace dimension (default: from the model)");
    o_n = sub->add_option("-N,--N", n, "length of the series generated from --model (default 2L)");
    o_backward = sub->add_flag("--backward", backward, "backward LRF only");
    o_both = sub->add_flag("--both", both, "forward and backward LRFs");
    o_conj = sub->add_flag("--conjugated-backward", conjugated, "backward LRF with conjugated coefficients");
    o_out = sub->add_option("-o,--out", out, "output CSV (default stdout)");
    sub->callback([this] { run(); });
  }

  void run() {
    Params p(config, {"model", "series", "L", "d", "N", "backward", "both", "conjugated_backward", "out"});
    p.flag(o_model, "model", model);
    p.flag(o_series, "series", series);
    p.flag(o_window, "L", window);
    p.flag(o_d, "d", d);
    p.flag(o_n, "N", n);
    p.flag(o_backward, "backward", backward);
    p.flag(o_both, "both", both);
    p.flag(o_conj, "conjugated_backward", conjugated);
    p.flag(o_out, "out", out);

    if (p.has("model") == p.has("series")) invalid("model", "exactly one of model or series is required");
    const int L = p.integer("L");
    TimeSeries<double> f;
    std::optional<io::ModelSpec> spec;
    int dim = 0;
    if (p.has("model")) {
      spec = p.model("model");
      f = series_of(*spec, p.integer("N", 2 * L));
      dim = p.integer("d", spec->model.difference_dimension());
    } else {
      std::ifstream in(p.string("series"));
      if (!in) invalid("series", "cannot open " + p.string("series"));
      f = io::read_series_csv(in);
      dim = p.integer("d");
    }
    if (dim < 1 || dim >= L) invalid("d", "need 1 <= d < L");
    if (2 * L > f.size()) invalid("L", "N >= 2L is required");

    const bool want_backward = p.boolean("backward") || p.boolean("both");
    const bool want_forward = !p.boolean("backward") || p.boolean("both");
    const auto conv = p.boolean("conjugated_backward") ? BackwardConvention::Conjugated : BackwardConvention::Plain;

    std::vector<io::RootRow> rows;
    auto label = [&](Direction dir, const std::string& side) {
      const auto set = lrf_roots(f, L, dim, dir, conv);
      std::vector<bool> flags;
      if (spec) {
        std::vector<Complex> targets = expanded_roots(spec->model);
        if (dir == Direction::Backward)
          for (auto& z : targets) z = conv == BackwardConvention::Plain ? Complex(1) / z : std::conj(Complex(1) / z);
        flags.assign(set.roots.size(), false);
        for (std::size_t k : match_roots(set.roots, targets)) flags[k] = true;
      } else {
        flags = top_by_modulus(set.roots, dim);
      }
      for (std::size_t i = 0; i < set.roots.size(); ++i)
        rows.push_back({set.roots[i], flags[i] ? "signal" : "extraneous", side, L});
    };
    if (want_forward) label(Direction::Forward, "forward");
    if (want_backward) label(Direction::Backward, "backward");
    with_output(p.string("out"), [&](std::ostream& os) { io::write_roots_csv(os, rows); });
  }
};

// ---- separability ---------------------------------------------------------

struct SeparabilityCmd {
  std::string config, model1, model2, side = "left", out;
  int window = 0, n = 0;
  CLI::Option *o_m1, *o_m2, *o_window, *o_n, *o_side, *o_out;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("separability", "Exact weak separability verdict for two signal models");
    sub->add_option("--config", config, "JSON file with the parameters below");
    o_m1 = sub->add_option("--model1", model1, "first SignalModel JSON file");
    o_m2 = sub->add_option("--model2", model2, "second SignalModel JSON file");
    o_window = sub->add_option("-L,--L", window, "window length");
    o_n = sub->add_option("-N,--N", n, "series length");
    o_side = sub->add_option("--side", side, "left, right or two_sided");
    o_out = sub->add_option("-o,--out", out, "output JSON (default stdout)");
    sub->callback([this] { run(); });
  }

  void run() {
    Params p(config, {"model1", "model2", "L", "N", "side", "out"});
    p.flag(o_m1, "model1", model1);
    p.flag(o_m2, "model2", model2);
    p.flag(o_window, "L", window);
    p.flag(o_n, "N", n);
    p.flag(o_side, "side", side);
    p.flag(o_out, "out", out);
    const auto m1 = p.model("model1").model, m2 = p.model("model2").model;
    const int L = p.integer("L"), N = p.integer("N");
    if (L < 2 || L >= N) invalid("L", "need 1 < L < N");
    const std::string s = p.string("side", "left");

    SeparabilityVerdict<double> v;
    const auto f1 = generate(m1, N), f2 = generate(m2, N);
    double numeric = 0;
    if (s == "left") {
      v = check_left_separable(m1, m2, L);
      numeric = numeric_separability(f1, f2, L);
    } else if (s == "right") {
      v = check_right_separable(m1, m2, L, N);
      numeric = numeric_separability(f1, f2, N - L + 1);
    } else if (s == "two_sided") {
      v = check_two_sided(m1, m2, L, N);
      numeric = std::max(numeric_separability(f1, f2, L), numeric_separability(f1, f2, N - L + 1));
    } else {
      invalid("side", "expected left, right or two_sided");
    }

    json j = {{"separable", v.separable}, {"side", to_string(v.side)}, {"reason", to_string(v.reason)},
              {"numeric_separability", numeric}, {"diagnostic", v.diagnostic}};
    if (v.witness) {
      const auto& w = *v.witness;
      j["witness"] = {{"rho", w.rho}, {"omega", w.omega}, {"L", w.window}, {"m", w.m}, {"n", w.n},
                      {"real_compatible", w.real_compatible}};
    } else {
      j["witness"] = nullptr;
    }
    with_output(p.string("out"), [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }
};

// ---- sweep ----------------------------------------------------------------

struct SweepCmd {
  std::string config, poly, model, out;
  int n_min = 10, n_max = 100, step = 10;
  double delta = 0.15;
  CLI::Option *o_poly, *o_model, *o_min, *o_max, *o_step, *o_delta, *o_out;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("sweep", "Extraneous-root statistics of H_n over a range of n");
    sub->add_option("--config", config, "JSON file with the parameters below");
    o_poly = sub->add_option("--poly", poly, "weight polynomial P as inline JSON [[re,im],...] or a JSON file");
    o_model = sub->add_option("--model", model, "SignalModel JSON file (P is its characteristic polynomial)");
    o_min = sub->add_option("--n-min", n_min, "first n");
    o_max = sub->add_option("--n-max", n_max, "last n");
    o_step = sub->add_option("--step", step, "n increment");
    o_delta = sub->add_option("--delta", delta, "spurious annulus width relative to rho");
    o_out = sub->add_option("-o,--out", out, "output CSV (default stdout)");
    sub->callback([this] { run(); });
  }

  void run() {
    Params p(config, {"poly", "model", "n_min", "n_max", "step", "delta", "out"});
    p.flag(o_poly, "poly", poly);
    p.flag(o_model, "model", model);
    p.flag(o_min, "n_min", n_min);
    p.flag(o_max, "n_max", n_max);
    p.flag(o_step, "step", step);
    p.flag(o_delta, "delta", delta);
    p.flag(o_out, "out", out);

    if (p.has("poly") == p.has("model")) invalid("poly", "exactly one of poly or model is required");
    Polynomial<double> weight;
    if (p.has("poly")) {
      const json& v = p.raw()["poly"];
      json parsed = v;
      if (v.is_string()) {
        // inline JSON array, otherwise a path to a file holding one
        const std::string text = v.get<std::string>();
        if (text.find_first_not_of(" \t") != std::string::npos && text[text.find_first_not_of(" \t")] == '[') {
          parsed = json::parse(text, nullptr, false);
          if (parsed.is_discarded()) invalid("poly", "malformed JSON");
        } else {
          parsed = io::load_json(text);
        }
      }
      weight = io::poly_from_json(parsed, "poly");
    } else {
      weight = char_poly(p.model("model").model);
    }
    const int lo = p.integer("n_min", 10), hi = p.integer("n_max", 100), inc = p.integer("step", 10);
    const double frac = p.real("delta", 0.15);
    if (lo < 1 || hi < lo || inc < 1) invalid("n_min", "need 1 <= n_min <= n_max and step >= 1");
    if (!(frac > 0 && frac < 1)) invalid("delta", "must lie in (0, 1)");
    const auto w = normalize_weight(weight);
    const auto excluded = leading_arguments(w);

    with_output(p.string("out"), [&](std::ostream& os) {
      os << "n,mean_modulus,max_gap_error,spurious_count\n";
      for (int n = lo; n <= hi; n += inc) {
        const auto diag = classify_roots(extraneous_roots(weight, n), w, frac * w.rho);
        std::string gap = "nan";
        if (diag.general.size() >= 3) gap = io::format_number(angular_equidistribution(diag.general, n, excluded));
        const std::string mean = diag.general.empty() ? "nan" : io::format_number(diag.modulus_stats);
        os << n << ',' << mean << ',' << gap << ',' << diag.spurious.size() << '\n';
      }
    });
  }
};

// ---- scenario -------------------------------------------------------------

struct ScenarioCmd {
  std::string config, name, model, output_dir;
  int n = 0, d = 0, runs = 1;
  std::vector<int> windows;
  double noise_std = 0, delta = 0.15;
  std::uint64_t seed = 0;
  bool backward = false, conjugated = false;
  CLI::Option *o_name, *o_model, *o_dir, *o_n, *o_d, *o_runs, *o_windows, *o_noise, *o_delta, *o_seed, *o_backward,
      *o_conj;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("scenario", "Run a named experiment and write root tables plus a manifest");
    sub->add_option("--config", config, "scenario JSON (the \"scenario\" key selects the defaults)");
    o_name = sub->add_option("name", name,
                             "sep_constant, sep_exponent, sep_conjugate, extsam, noised, mult or custom");
    o_model = sub->add_option("--model", model, "SignalModel JSON file");
    o_dir = sub->add_option("--output-dir", output_dir, "directory for CSVs and manifest.json");
    o_n = sub->add_option("-N,--N", n, "series length");
    o_windows = sub->add_option("-L,--L", windows, "window length(s)");
    o_d = sub->add_option("-d,--d", d, "signal subspace dimension");
    o_noise = sub->add_option("--noise-std", noise_std, "noise standard deviation");
    o_seed = sub->add_option("--seed", seed, "first seed; run k uses seed + k");
    o_runs = sub->add_option("--runs", runs, "noisy runs per window");
    o_delta = sub->add_option("--delta", delta, "spurious annulus width relative to rho");
    o_backward = sub->add_flag("--backward", backward, "also emit backward LRF roots");
    o_conj = sub->add_flag("--conjugated-backward", conjugated, "backward LRF with conjugated coefficients");
    sub->callback([this] { run(); });
  }

  void run() {
    json j = json::object();
    if (!config.empty()) {
      j = io::load_json(config);
      if (!j.is_object()) invalid(config, "expected a JSON object");
    }
    auto set = [&j](const CLI::Option* opt, const std::string& key, const auto& value) {
      if (opt->count() > 0) j[key] = value;
    };
    set(o_name, "scenario", name);
    set(o_dir, "output_dir", output_dir);
    set(o_n, "N", n);
    set(o_windows, "L", windows);
    set(o_d, "d", d);
    set(o_noise, "noise_std", noise_std);
    set(o_seed, "seed", seed);
    set(o_runs, "runs", runs);
    set(o_delta, "delta", delta);
    set(o_backward, "backward", backward);
    set(o_conj, "conjugated_backward", conjugated);
    if (o_model->count() > 0) j["model"] = io::load_json(model);
    else if (j.contains("model") && j["model"].is_string()) j["model"] = io::load_json(j["model"].get<std::string>());

    const auto cfg = config_from_json(j);
    const auto report = run_scenario(cfg);
    if (cfg.output_dir.empty()) std::cout << report.manifest.dump(2) << '\n';
    else std::cerr << "wrote " << report.runs.size() << " run(s) to " << cfg.output_dir << '\n';
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Roots of SSA forecasting LRFs: separability, extraneous roots and their asymptotics"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);
  GenerateCmd generate_cmd;
  RootsCmd roots_cmd;
  SeparabilityCmd separability_cmd;
  SweepCmd sweep_cmd;
  ScenarioCmd scenario_cmd;
  generate_cmd.attach(app);
  roots_cmd.attach(app);
  separability_cmd.attach(app);
  sweep_cmd.attach(app);
  scenario_cmd.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_numerical() ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
