#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aitstar/baselines.hpp"
#include "aitstar/planner.hpp"
#include "aitstar/scenarios.hpp"

namespace aitstar::bench {

enum class PlannerKind { kAitStar, kBitStar, kRrt, kRrtStar, kRrtConnect };

std::string planner_kind_name(PlannerKind kind);
std::optional<PlannerKind> parse_planner_kind(const std::string& name);

struct PlannerSpec {
    PlannerKind kind = PlannerKind::kAitStar;
    PlannerConfig planner;  // batch planners; mode is derived from kind
    RrtConfig rrt;          // RRT family
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::string scenario = "wall_gap";  // built-in name
    std::string scenario_file;          // overrides scenario when non-empty
    std::size_t dimension = 4;
    std::size_t trials = 100;
    double budget_s = 0.0;              // 0: dimension-dependent default
    std::uint64_t budget_logical = 0;   // interpolated-state budget (logical mode)
    std::uint64_t base_seed = 1;
    double resolution = 1e-6;
    bool logical_time = false;
    bool stop_on_first_solution = false;
    std::string out_dir = "bench_out";
    std::vector<PlannerSpec> planners;
};

// Benchmark protocol default: 1 s in R^4, 10 s in R^8, 100 s in R^16.
double default_budget_s(std::size_t dimension);

ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig parse_experiment_config_file(const std::string& path);

// One seeded run of one planner. Event times carry wall seconds, or the
// interpolated-state count in logical mode.
struct TrialTrace {
    std::string planner;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::vector<TraceEvent> events;
    double final_cost = kInf;
    bool success = false;
    double terminal_time = 0.0;
    Counters final_counters;
};

struct MedianCi {
    double lower = kInf;
    double median = kInf;
    double upper = kInf;
};

// Order-statistic ranks (1-based, lower and upper) of the two-sided
// nonparametric confidence interval for the median at the given level,
// clamped to (1, n) when the sample is too small to reach the level.
std::pair<std::size_t, std::size_t> median_ci_ranks(std::size_t n, double level);

// Median (lower-middle order statistic) with the nonparametric CI. Samples
// may contain infinities; no arithmetic is performed on them.
MedianCi median_ci(std::vector<double> samples, double level = 0.99);

struct PlannerSummary {
    std::string planner;
    std::size_t trials = 0;
    double success_rate = 0.0;
    MedianCi initial_time;
    MedianCi initial_cost;
    MedianCi final_cost;
    std::vector<std::pair<double, double>> median_cost_over_time;
};

struct SummaryStats {
    std::vector<PlannerSummary> planners;
};

TrialTrace run_single_trial(const ExperimentConfig& config, const PlannerSpec& spec,
                            std::size_t trial);

void write_csv(std::ostream& out, const ExperimentConfig& config,
               const std::vector<TrialTrace>& traces);
std::vector<TrialTrace> read_csv(std::istream& in);

SummaryStats summarize(const std::vector<TrialTrace>& traces);
std::string format_summary(const SummaryStats& stats);

struct ExperimentResult {
    std::vector<TrialTrace> traces;
    SummaryStats stats;
    std::string csv_path;
    std::string summary_path;
};

// Runs trials (seed_i = base_seed + i) on BENCH_THREADS workers, writes
// results.csv and summary.txt under out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

Scenario load_scenario(const ExperimentConfig& config);

}  // namespace aitstar::bench
