// Benchmark harness: many (instance, solver, seed) runs from a shared warm
// start per instance, scored by primal gap and primal integral against the
// best objective seen on each instance.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spllns/destroy.hpp"
#include "spllns/engine.hpp"
#include "spllns/ilp.hpp"

namespace spllns {

// Applies the keys of a JSON object to `cfg`. Recognized keys: eta0, growth,
// cap_fraction, k, update, accept, tau_decay, tau0, sigma, include_incumbent,
// step_nodes, step_time_s, init_nodes, max_iterations, time_limit_s, clock,
// work_seconds_per_node, flip_window, seed. Unknown keys throw ParseError.
void apply_engine_overrides(std::string_view json_object, EngineConfig& cfg);

// kind: "random", "variable", "lb" or "learned" (needs weights).
std::unique_ptr<DestroyPolicy> make_policy(std::string_view kind,
                                           const EngineConfig& cfg,
                                           const Instance& inst,
                                           const PolicyWeights* weights);

struct SolverSpec {
  std::string name;
  std::string policy = "random";
  std::optional<std::filesystem::path> weights_path;
  EngineConfig engine;
};

struct BenchConfig {
  std::string instance_glob;
  std::vector<SolverSpec> solvers;
  std::vector<std::uint64_t> seeds;
  double cutoff_s = 0.0;
  std::vector<double> checkpoints;
  std::filesystem::path output_dir;
  std::size_t workers = 1;
  bool write_trajectories = false;
  SolveLimits init_limits = SolveLimits::Nodes(20000);
  // CSV with header "instance,objective"; overrides the in-report reference.
  std::optional<std::filesystem::path> optimum_table;

  // Throws std::invalid_argument.
  void validate() const;
};

// {"instances": glob, "solvers": [{"name", "policy", "weights", "engine":
// {...}}], "seeds": [...], "cutoff_s", "checkpoints", "output_dir",
// "workers", "write_trajectories", "init_nodes", "optimum_table"}. Relative
// paths are resolved against `base_dir`.
BenchConfig parse_bench_config(std::string_view json,
                               const std::filesystem::path& base_dir = {});

struct RunRow {
  std::string instance;
  std::string solver;
  std::uint64_t seed = 0;
  std::string status = "ok";  // "ok" or "error: <reason>"
  double initial_obj = 0.0;
  std::optional<double> best_obj;
  std::int64_t iterations = 0;
  double primal_gap = 1.0;
  double primal_integral = 0.0;
  std::vector<ObjectiveSample> improvements;
};

struct BestKnown {
  double objective = 0.0;
  std::string source;  // "report" or "table"
};

struct BenchReport {
  double cutoff_s = 0.0;
  std::vector<RunRow> rows;  // ordered by (instance, solver, seed) as configured
  std::map<std::string, BestKnown> best_known;
};

// Glob matches in lexicographic order. Throws when nothing matches.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

std::map<std::string, double> read_optimum_table(const std::filesystem::path& path);

// Fills best_known and every row's gap and integral. Failed rows get gap 1
// and integral cutoff_s.
void score_rows(BenchReport& report,
                const std::map<std::string, double>& external_optima);

// Executes the sweep and writes report.csv, runs.csv, best_known.csv,
// summary.csv, gap_series.csv (when checkpoints are set) and optionally one
// trajectory per run under trajectories/.
BenchReport run_benchmark(const BenchConfig& cfg);

enum class GroupBy { kSolver, kInstanceSolver };

struct SummaryRow {
  std::string instance;  // empty when grouped by solver only
  std::string solver;
  std::size_t runs = 0;
  double mean_gap = 0.0;
  double median_gap = 0.0;
  double mean_integral = 0.0;
  double median_integral = 0.0;
  // Fraction of (instance, seed) cells where this solver attains the minimal
  // gap of the cell; ties count as wins for every tied solver.
  double win_rate = 0.0;
};

std::vector<SummaryRow> aggregate(std::span<const RunRow> rows, GroupBy by);

struct GapSeriesRun {
  std::string instance;
  std::string solver;
  std::uint64_t seed = 0;
  std::vector<GapSample> series;
};

struct GapSeriesPoint {
  std::string instance;
  std::string solver;
  std::optional<std::uint64_t> seed;  // empty for the cross-seed mean
  double time_s = 0.0;
  double gap = 0.0;
};

// Per-run step-function values at each checkpoint, followed by the mean over
// seeds for every (instance, solver).
std::vector<GapSeriesPoint> emit_gap_series(std::span<const GapSeriesRun> runs,
                                            std::span<const double> checkpoints);

std::string report_csv(const BenchReport& report);
std::string runs_csv(const BenchReport& report);
std::string best_known_csv(const BenchReport& report);
std::string summary_csv(std::span<const SummaryRow> rows);
std::string gap_series_csv(std::span<const GapSeriesPoint> points);

}  // namespace spllns
