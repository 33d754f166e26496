#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "aitstar/bench.hpp"
#include "aitstar/kernels.hpp"

using namespace aitstar;

namespace {

int cmd_run(const std::string& config_path, int trials, double budget, long long seed,
            bool logical_time, const std::string& out_dir, const std::string& dump_graph) {
    bench::ExperimentConfig config = bench::parse_experiment_config_file(config_path);
    if (trials > 0) {
        config.trials = static_cast<std::size_t>(trials);
    }
    if (budget > 0.0) {
        config.budget_s = budget;
    }
    if (seed >= 0) {
        config.base_seed = static_cast<std::uint64_t>(seed);
    }
    if (logical_time) {
        config.logical_time = true;
    }
    if (!out_dir.empty()) {
        config.out_dir = out_dir;
    }

    const bench::ExperimentResult result = bench::run_experiment(config);
    std::cout << bench::format_summary(result.stats);
    std::cout << "wrote " << result.csv_path << "\n";
    std::cout << "wrote " << result.summary_path << "\n";

    if (!dump_graph.empty()) {
        // Re-run the first trial of the first batch planner and dump its graph.
        for (const bench::PlannerSpec& spec : config.planners) {
            if (spec.kind != bench::PlannerKind::kAitStar &&
                spec.kind != bench::PlannerKind::kBitStar) {
                continue;
            }
            const Scenario scenario = bench::load_scenario(config);
            ValidityOracle oracle(scenario, config.resolution);
            const ProblemInstance problem(scenario.space, scenario.start, {scenario.goal},
                                          oracle);
            PlannerConfig pc = spec.planner;
            pc.seed = config.base_seed;
            pc.resolution = config.resolution;
            pc.mode = spec.kind == bench::PlannerKind::kAitStar
                          ? HeuristicMode::kAdaptive
                          : HeuristicMode::kStaticEuclidean;
            Planner planner(problem, oracle, pc);
            StopCondition stop;
            if (config.logical_time) {
                stop.logical = config.budget_logical;
            } else {
                stop.wall_s = config.budget_s > 0.0 ? config.budget_s
                                                    : bench::default_budget_s(config.dimension);
            }
            planner.solve(stop);
            std::ofstream out(dump_graph, std::ios::binary);
            planner.graph().dump(out);
            std::cout << "wrote " << dump_graph << "\n";
            break;
        }
    }
    return 0;
}

int cmd_summarize(const std::string& csv_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open " << csv_path << "\n";
        return 1;
    }
    const std::vector<bench::TrialTrace> traces = bench::read_csv(in);
    std::cout << bench::format_summary(bench::summarize(traces));
    return 0;
}

int cmd_scenarios() {
    for (const std::string& name : builtin_scenario_names()) {
        std::cout << name << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampling-based planning benchmark"};
    app.require_subcommand(1);

    std::string config_path, out_dir, csv_path, dump_graph;
    int trials = -1;
    double budget = -1.0;
    long long seed = -1;
    bool logical_time = false;

    CLI::App* run = app.add_subcommand("run", "run a benchmark experiment");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--trials", trials, "override trial count");
    run->add_option("--budget", budget, "override per-trial budget in seconds");
    run->add_option("--seed", seed, "override base seed");
    run->add_flag("--logical-time", logical_time,
                  "stop on evaluation counts for bit-reproducible output");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--dump-graph", dump_graph, "dump one planner graph to this file");

    CLI::App* summarize = app.add_subcommand("summarize", "recompute summary from a results CSV");
    summarize->add_option("--csv", csv_path, "results.csv path")->required();

    app.add_subcommand("scenarios", "list built-in scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(config_path, trials, budget, seed, logical_time, out_dir, dump_graph);
        }
        if (summarize->parsed()) {
            return cmd_summarize(csv_path);
        }
        return cmd_scenarios();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
