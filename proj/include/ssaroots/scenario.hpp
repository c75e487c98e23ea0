#ifndef SSAROOTS_SCENARIO_HPP
#define SSAROOTS_SCENARIO_HPP

///
/// \file scenario.hpp
///
/// Reproducible experiment runs: separable root families, extraneous roots
/// of the forecasting LRF for a list of windows, and noisy root-Min-Norm
/// estimation. Runs are independent tasks executed in parallel; each writes
/// its own CSV and a manifest is written after all of them finish.
///

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssaroots/asymptotics.hpp"
#include "ssaroots/io.hpp"

namespace ssaroots {

/// Roots of the SSA LRF built from the d leading left singular vectors.
struct LrfRootSet {
  SsaLrf<double> lrf;
  std::vector<std::complex<double>> roots;
};

LrfRootSet lrf_roots(const TimeSeries<double>& f, int window, int d, Direction direction = Direction::Forward,
                     BackwardConvention convention = BackwardConvention::Plain);

/// For every target, the index of a distinct root, chosen greedily by smallest distance.
std::vector<std::size_t> match_roots(const std::vector<std::complex<double>>& roots,
                                     const std::vector<std::complex<double>>& targets);

struct SignalRootEstimate {
  std::vector<RootCluster<double>> signal;
  std::vector<std::complex<double>> extraneous;
  bool all_inside = false;  // every top-d modulus below 1 - margin
  std::string warning;
};

///
/// Root-Min-Norm: the d largest-modulus roots of the SSA LRF are taken as
/// the signal roots. Requires d < L <= N/2.
///
SignalRootEstimate estimate_signal_roots(const TimeSeries<double>& f, int window, int d, double margin = 0.01,
                                         double cluster_tol = 1e-6);

/// Real i.i.d. N(0, sigma^2) added to the real part, drawn from SplitMix64(seed).
TimeSeries<double> add_noise(const TimeSeries<double>& f, double sigma, std::uint64_t seed);

enum class ScenarioKind { SepConstant, SepExponent, SepConjugate, Extsam, Noised, Mult, Custom };

const char* to_string(ScenarioKind kind);
ScenarioKind scenario_from_string(std::string_view name);

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::Custom;
  std::optional<io::ModelSpec> model;
  int N = 0;
  std::vector<int> windows;
  int d = 0;  // 0: the difference dimension of the model
  double noise_std = 0;
  std::optional<std::uint64_t> seed;
  int runs = 1;
  double delta = 0.15;  // spurious annulus width, relative to rho
  double margin = 0.01;
  bool backward = false;
  bool conjugated_backward = false;
  std::string output_dir;
};

/// Built-in parameterization of a scenario (no seed: it must be given whenever noise is on).
ScenarioConfig default_config(ScenarioKind kind);

/// Defaults of j["scenario"] overridden by the remaining fields; unknown fields are rejected.
ScenarioConfig config_from_json(const io::json& j);
io::json config_to_json(const ScenarioConfig& cfg);
void validate(const ScenarioConfig& cfg);

std::uint64_t fnv1a(std::string_view bytes);

/// SSA_ROOTS_THREADS if set and positive, else the hardware concurrency.
int thread_count();

struct RunResult {
  std::string file;
  int window = 0;
  std::optional<std::uint64_t> seed;
  std::vector<io::RootRow> rows;
  io::json summary;
};

struct ExperimentReport {
  std::vector<RunResult> runs;
  io::json manifest;
};

/// Runs every task; with a non-empty output_dir the CSVs and manifest.json are written there.
ExperimentReport run_scenario(const ScenarioConfig& cfg);

}  // namespace ssaroots

#endif  // SSAROOTS_SCENARIO_HPP
