#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "ssaroots/scenario.hpp"
#include "ssaroots/version.hpp"
#include "support.hpp"

using namespace ssaroots;
using namespace testing;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("model JSON round trip") {
  const Model m({{Complex(0.9, 0.1), Poly{Complex(1), Complex(0, -2)}}, {Complex(1.2), Poly{Complex(0.25)}}});
  const auto back = io::model_from_json(io::model_to_json(m));
  CHECK_FALSE(back.real_form);
  REQUIRE(back.model.terms().size() == 2);
  CHECK((generate(back.model, 20) - generate(m, 20)).norm() == 0);

  const auto real = io::model_from_json(io::json::parse(R"({"real_terms": [{"rho": 0.9, "omega": 0.125, "phi": 0, "poly": [1]}]})"));
  CHECK(real.real_form);
  CHECK(generate(real.model, 30).imag().cwiseAbs().maxCoeff() < 1e-14);

  CHECK(kind_of([] { io::model_from_json(io::json::parse(R"({"terms": [], "extra": 1})")); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { io::model_from_json(io::json::parse(R"({"terms": [{"root": [0, 0], "poly": [1]}]})")); }) ==
        ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { io::model_from_json(io::json::parse(R"({"terms": [{"root": "x", "poly": [1]}]})")); }) ==
        ErrorKind::ConfigInvalid);
  CHECK(kind_of([] {
          io::model_from_json(io::json::parse(R"({"terms": [], "real_terms": []})"));
        }) == ErrorKind::ConfigInvalid);
}

TEST_CASE("series CSV round trip is exact") {
  std::mt19937_64 gen(73);
  const auto f = generate(random_model(gen, 3, 0.7, 1.3), 25);
  std::stringstream ss;
  io::write_series_csv(ss, f);
  const auto back = io::read_series_csv(ss);
  CHECK((back - f).norm() == 0);
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(-2) == "-2");
}

TEST_CASE("roots CSV layout") {
  std::stringstream ss;
  io::write_roots_csv(ss, {{Complex(0.5, -0.25), "signal", "forward", 8}});
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  CHECK(header == "re,im,kind,side,L");
  CHECK(row == "0.5,-0.25,signal,forward,8");
}

TEST_CASE("config validation") {
  CHECK(kind_of([] { config_from_json(io::json::parse(R"({"N": 10})")); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_from_json(io::json::parse(R"({"scenario": "nope"})")); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_from_json(io::json::parse(R"({"scenario": "extsam", "colour": 1})")); }) ==
        ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_from_json(io::json::parse(R"({"scenario": "extsam", "L": 60})")); }) ==
        ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_from_json(io::json::parse(R"({"scenario": "noised"})")); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_from_json(io::json::parse(R"({"scenario": "custom"})")); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { config_from_json(io::json::parse(R"({"scenario": "extsam", "delta": 1.5})")); }) ==
        ErrorKind::ConfigInvalid);

  const auto cfg = config_from_json(io::json::parse(R"({"scenario": "noised", "seed": 5, "L": [50, 100]})"));
  CHECK(cfg.windows == std::vector<int>{50, 100});
  CHECK(cfg.N == 300);
  CHECK(cfg.noise_std == 50);
  CHECK(*cfg.seed == 5);
  const auto single = config_from_json(io::json::parse(R"({"scenario": "extsam", "L": 20})"));
  CHECK(single.windows == std::vector<int>{20});

  for (auto k : {ScenarioKind::SepConstant, ScenarioKind::SepExponent, ScenarioKind::SepConjugate, ScenarioKind::Extsam})
    CHECK_NOTHROW(validate(default_config(k)));
  CHECK(kind_of([] { validate(default_config(ScenarioKind::Mult)); }) == ErrorKind::ConfigInvalid);
  CHECK(scenario_from_string(to_string(ScenarioKind::Mult)) == ScenarioKind::Mult);
}

TEST_CASE("fnv1a") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("add_noise is reproducible and touches only the real part") {
  const auto f = generate(Model::exponential(Complex(0.9, 0.3)), 50);
  const auto a = add_noise(f, 2.0, 11);
  const auto b = add_noise(f, 2.0, 11);
  const auto c = add_noise(f, 2.0, 12);
  CHECK((a - b).norm() == 0);
  CHECK((a - c).norm() > 0);
  CHECK((a.imag() - f.imag()).norm() == 0);
  CHECK((add_noise(f, 0.0, 1) - f).norm() == 0);
}

TEST_CASE("match_roots pairs each target with a distinct root") {
  const auto idx = match_roots({Complex(0), Complex(1), Complex(2)}, {Complex(1.9), Complex(1.1)});
  REQUIRE(idx.size() == 2);
  CHECK(idx[0] == 2);
  CHECK(idx[1] == 1);
}

TEST_CASE("root-Min-Norm on a clean exponential") {
  const auto f = generate(Model::exponential(1.05), 40);
  const auto est = estimate_signal_roots(f, 20, 1);
  REQUIRE(est.signal.size() == 1);
  CHECK(std::abs(est.signal[0].value - Complex(1.05)) < 1e-8);
  CHECK(est.extraneous.size() == 18);
  for (auto z : est.extraneous) CHECK(std::abs(z) < 1);
  CHECK_THROWS_AS(estimate_signal_roots(f, 21, 1), Error);
  CHECK_THROWS_AS(estimate_signal_roots(f, 20, 20), Error);
}

TEST_CASE("root-Min-Norm on n^2 0.8^n warns when extraneous roots are larger") {
  const Model m({{Complex(0.8), Poly{Complex(0), Complex(0), Complex(1)}}});
  const auto est = estimate_signal_roots(generate(m, 150), 50, 3);
  // the clean run has extraneous roots above 0.8, so the largest-modulus rule does not see the triple root
  CHECK(est.all_inside);
  CHECK_FALSE(est.warning.empty());
  const auto w = normalize_weight(std::vector<RootCluster<double>>{{Complex(0.8), 3}});
  const auto diag = classify_roots(extraneous_roots(w.C, 46), w);
  CHECK(diag.spurious.empty());
}

TEST_CASE("lrf_roots backward matches 1/lambda") {
  const Model m({{Complex(0.9, 0.2), Poly{Complex(1)}}, {Complex(1.1, -0.3), Poly{Complex(0.5)}}});
  const auto f = generate(m, 40);
  const auto back = lrf_roots(f, 10, 2, Direction::Backward);
  const auto idx = match_roots(back.roots, {Complex(1) / Complex(0.9, 0.2), Complex(1) / Complex(1.1, -0.3)});
  CHECK(std::abs(back.roots[idx[0]] - Complex(1) / Complex(0.9, 0.2)) < 1e-7);
  CHECK(std::abs(back.roots[idx[1]] - Complex(1) / Complex(1.1, -0.3)) < 1e-7);
}

TEST_CASE("extsam scenario counts and real series") {
  auto cfg = default_config(ScenarioKind::Extsam);
  cfg.windows = {20, 50};
  const auto report = run_scenario(cfg);
  REQUIRE(report.runs.size() == 2);
  for (const auto& r : report.runs) {
    CHECK(r.summary["max_signal_error"].get<double>() < 1e-10);
    // at L = 50 general extraneous roots already reach past rho near the signal arguments
    if (r.window == 20) CHECK(r.summary["top_d_are_signal"].get<bool>());
    CHECK(r.summary["spurious"].get<int>() <= 3);
    CHECK(r.summary["rho"].get<double>() == doctest::Approx(0.9));
    int signal = 0;
    for (const auto& row : r.rows) signal += row.kind == "signal";
    CHECK(signal == 4);
    CHECK(static_cast<int>(r.rows.size()) == r.window - 1);
  }
  CHECK(report.manifest["config_hash"].get<std::string>().size() == 16);
  CHECK(report.manifest["version"].get<std::string>() == version);
}

TEST_CASE("separability scenarios") {
  const auto c = run_scenario(default_config(ScenarioKind::SepConstant));
  CHECK(c.runs.at(0).summary["separable_roots"].get<int>() == 7);
  const auto q = run_scenario(default_config(ScenarioKind::SepConjugate));
  CHECK(q.runs.at(0).summary["conjugate_pair_m"].at(0).get<int>() == 3);
}

TEST_CASE("runs are deterministic across thread counts") {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "ssaroots_determinism";
  fs::remove_all(base);
  auto cfg = default_config(ScenarioKind::Mult);
  cfg.seed = 7;
  cfg.runs = 3;
  std::vector<std::string> snapshots;
  for (const char* threads : {"1", "3"}) {
    setenv("SSA_ROOTS_THREADS", threads, 1);
    cfg.output_dir = (base / threads).string();
    run_scenario(cfg);
    std::string all;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cfg.output_dir)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) all += p.filename().string() + "\n" + slurp(p);
    snapshots.push_back(all);
  }
  unsetenv("SSA_ROOTS_THREADS");
  CHECK(snapshots[0] == snapshots[1]);
  CHECK(snapshots[0].find("mult_L50_seed7.csv") != std::string::npos);
  CHECK(snapshots[0].find("mult_L50_seed9.csv") != std::string::npos);
  CHECK(snapshots[0].find("mult_L50_clean.csv") != std::string::npos);
  fs::remove_all(base);
}
