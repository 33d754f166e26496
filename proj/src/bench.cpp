#include "aitstar/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace aitstar::bench {

std::string planner_kind_name(PlannerKind kind) {
    switch (kind) {
        case PlannerKind::kAitStar:
            return "aitstar";
        case PlannerKind::kBitStar:
            return "bitstar";
        case PlannerKind::kRrt:
            return "rrt";
        case PlannerKind::kRrtStar:
            return "rrtstar";
        case PlannerKind::kRrtConnect:
            return "rrtconnect";
    }
    return "unknown";
}

std::optional<PlannerKind> parse_planner_kind(const std::string& name) {
    for (const PlannerKind kind :
         {PlannerKind::kAitStar, PlannerKind::kBitStar, PlannerKind::kRrt, PlannerKind::kRrtStar,
          PlannerKind::kRrtConnect}) {
        if (planner_kind_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

double default_budget_s(std::size_t dimension) {
    if (dimension <= 4) {
        return 1.0;
    }
    if (dimension <= 8) {
        return 10.0;
    }
    return 100.0;
}

namespace {

std::string trim(const std::string& s) {
    const std::size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const std::size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no" || value == "off") {
        return false;
    }
    throw std::runtime_error("experiment config: bad boolean '" + value + "'");
}

void apply_planner_key(PlannerSpec& spec, const std::string& key, const std::string& value) {
    if (key == "batch_size") {
        spec.planner.batch_size = std::stoul(value);
    } else if (key == "eta") {
        spec.planner.eta = std::stod(value);
        spec.rrt.eta = spec.planner.eta;
    } else if (key == "pruning") {
        spec.planner.pruning = parse_bool(value);
    } else if (key == "goal_bias") {
        spec.rrt.goal_bias = std::stod(value);
    } else if (key == "max_edge_length") {
        spec.rrt.max_edge_length = std::stod(value);
    } else {
        throw std::runtime_error("experiment config: unknown planner key '" + key + "'");
    }
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in) {
    ExperimentConfig config;
    config.planners.clear();
    std::vector<std::string> planner_names;
    std::vector<std::pair<std::string, std::pair<std::string, std::string>>> planner_keys;

    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("experiment config: expected 'key = value': " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "name") {
            config.name = value;
        } else if (key == "scenario") {
            config.scenario = value;
        } else if (key == "scenario_file") {
            config.scenario_file = value;
        } else if (key == "dimension") {
            config.dimension = std::stoul(value);
        } else if (key == "trials") {
            config.trials = std::stoul(value);
        } else if (key == "budget_s") {
            config.budget_s = std::stod(value);
        } else if (key == "budget_logical") {
            config.budget_logical = std::stoull(value);
        } else if (key == "base_seed") {
            config.base_seed = std::stoull(value);
        } else if (key == "resolution") {
            config.resolution = std::stod(value);
        } else if (key == "logical_time") {
            config.logical_time = parse_bool(value);
        } else if (key == "stop_on_first_solution") {
            config.stop_on_first_solution = parse_bool(value);
        } else if (key == "out_dir") {
            config.out_dir = value;
        } else if (key == "planners") {
            std::istringstream names(value);
            std::string name;
            while (std::getline(names, name, ',')) {
                planner_names.push_back(trim(name));
            }
        } else {
            const std::size_t dot = key.find('.');
            if (dot == std::string::npos) {
                throw std::runtime_error("experiment config: unknown key '" + key + "'");
            }
            planner_keys.push_back(
                {key.substr(0, dot), {key.substr(dot + 1), value}});
        }
    }

    if (planner_names.empty()) {
        planner_names = {"aitstar"};
    }
    for (const std::string& name : planner_names) {
        const auto kind = parse_planner_kind(name);
        if (!kind) {
            throw std::runtime_error("experiment config: unknown planner '" + name + "'");
        }
        PlannerSpec spec;
        spec.kind = *kind;
        config.planners.push_back(spec);
    }
    for (const auto& [planner_name, key_value] : planner_keys) {
        const auto kind = parse_planner_kind(planner_name);
        if (!kind) {
            throw std::runtime_error("experiment config: unknown planner '" + planner_name + "'");
        }
        bool applied = false;
        for (PlannerSpec& spec : config.planners) {
            if (spec.kind == *kind) {
                apply_planner_key(spec, key_value.first, key_value.second);
                applied = true;
            }
        }
        if (!applied) {
            throw std::runtime_error("experiment config: planner '" + planner_name +
                                     "' not listed in planners");
        }
    }
    if (config.trials < 1) {
        throw std::runtime_error("experiment config: trials must be >= 1");
    }
    return config;
}

ExperimentConfig parse_experiment_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open experiment config: " + path);
    }
    return parse_experiment_config(in);
}

Scenario load_scenario(const ExperimentConfig& config) {
    if (!config.scenario_file.empty()) {
        std::ifstream in(config.scenario_file);
        if (!in) {
            throw std::runtime_error("cannot open scenario file: " + config.scenario_file);
        }
        return scenario_from_config(in);
    }
    return make_builtin_scenario(config.scenario, config.dimension);
}

TrialTrace run_single_trial(const ExperimentConfig& config, const PlannerSpec& spec,
                            std::size_t trial) {
    const Scenario scenario = load_scenario(config);
    ValidityOracle oracle(scenario, config.resolution);
    const ProblemInstance problem(scenario.space, scenario.start, {scenario.goal}, oracle);

    const std::uint64_t seed = config.base_seed + trial;
    StopCondition stop;
    if (config.logical_time) {
        if (config.budget_logical == 0) {
            throw std::runtime_error("logical time mode requires budget_logical");
        }
        stop.logical = config.budget_logical;
    } else {
        stop.wall_s = config.budget_s > 0.0 ? config.budget_s
                                            : default_budget_s(config.dimension);
    }
    stop.first_solution = config.stop_on_first_solution;

    SolveResult solved;
    switch (spec.kind) {
        case PlannerKind::kAitStar:
        case PlannerKind::kBitStar: {
            PlannerConfig pc = spec.planner;
            pc.seed = seed;
            pc.resolution = config.resolution;
            pc.mode = spec.kind == PlannerKind::kAitStar ? HeuristicMode::kAdaptive
                                                         : HeuristicMode::kStaticEuclidean;
            Planner planner(problem, oracle, pc);
            solved = planner.solve(stop);
            break;
        }
        case PlannerKind::kRrt:
        case PlannerKind::kRrtStar:
        case PlannerKind::kRrtConnect: {
            RrtConfig rc = spec.rrt;
            rc.seed = seed;
            if (spec.kind == PlannerKind::kRrt) {
                solved = rrt_solve(problem, oracle, rc, stop);
            } else if (spec.kind == PlannerKind::kRrtStar) {
                solved = rrt_star_solve(problem, oracle, rc, stop);
            } else {
                solved = rrt_connect_solve(problem, oracle, rc, stop);
            }
            break;
        }
    }

    TrialTrace trace;
    trace.planner = planner_kind_name(spec.kind);
    trace.trial = trial;
    trace.seed = seed;
    trace.events = std::move(solved.events);
    if (config.logical_time) {
        for (TraceEvent& event : trace.events) {
            event.time_s = static_cast<double>(event.logical);
        }
        trace.terminal_time = static_cast<double>(solved.counters.num_interpolated_states);
    } else {
        trace.terminal_time = trace.events.empty() ? 0.0 : trace.events.back().time_s;
    }
    trace.final_cost = solved.best ? solved.best->cost : kInf;
    trace.success = std::isfinite(trace.final_cost);
    trace.final_counters = solved.counters;
    return trace;
}

std::pair<std::size_t, std::size_t> median_ci_ranks(std::size_t n, double level) {
    if (n == 0) {
        throw std::invalid_argument("median_ci_ranks: empty sample");
    }
    if (n == 1) {
        return {1, 1};
    }
    // Binomial(n, 1/2) pmf table.
    std::vector<long double> pmf(n + 1);
    const long double log_half = logl(0.5L);
    for (std::size_t k = 0; k <= n; ++k) {
        const long double log_pmf = lgammal(static_cast<long double>(n) + 1) -
                                    lgammal(static_cast<long double>(k) + 1) -
                                    lgammal(static_cast<long double>(n - k) + 1) +
                                    static_cast<long double>(n) * log_half;
        pmf[k] = expl(log_pmf);
    }
    // Symmetric expansion around the middle: coverage of [x_(l), x_(u)] as a
    // CI for the median is at least P(l <= B <= u - 1).
    std::size_t l = (n + 1) / 2;
    std::size_t u = n / 2 + 1;
    auto coverage = [&](std::size_t lo, std::size_t hi) {
        long double sum = 0.0L;
        for (std::size_t k = lo; k + 1 <= hi; ++k) {
            sum += pmf[k];
        }
        return sum;
    };
    while (coverage(l, u) < static_cast<long double>(level) && (l > 1 || u < n)) {
        if (l > 1) {
            --l;
        }
        if (u < n) {
            ++u;
        }
    }
    return {l, u};
}

MedianCi median_ci(std::vector<double> samples, double level) {
    if (samples.empty()) {
        throw std::invalid_argument("median_ci: empty sample");
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    MedianCi result;
    // Lower-middle order statistic, so infinities need no arithmetic.
    result.median = samples[(n + 1) / 2 - 1];
    const auto [l, u] = median_ci_ranks(n, level);
    result.lower = samples[l - 1];
    result.upper = samples[u - 1];
    return result;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& out, const ExperimentConfig& config,
               const std::vector<TrialTrace>& traces) {
    out << "experiment,scenario,dimension,planner,trial,seed,event_index,event_time_s,cost,"
        << "num_samples,num_motion_checks,num_interpolated_states,num_queue_pops,"
        << "num_reverse_expansions\n";
    const std::string scenario_name =
        config.scenario_file.empty() ? config.scenario : config.scenario_file;
    for (const TrialTrace& trace : traces) {
        auto write_row = [&](std::size_t index, double time, double cost, const Counters& c) {
            out << config.name << ',' << scenario_name << ',' << config.dimension << ','
                << trace.planner << ',' << trace.trial << ',' << trace.seed << ',' << index << ','
                << format_double(time) << ',' << format_double(cost) << ',' << c.num_samples
                << ',' << c.num_motion_checks << ',' << c.num_interpolated_states << ','
                << c.num_queue_pops << ',' << c.num_reverse_expansions << '\n';
        };
        for (std::size_t i = 0; i < trace.events.size(); ++i) {
            const TraceEvent& event = trace.events[i];
            write_row(i, event.time_s, event.cost, event.counters);
        }
        // Terminal row: final cost and counters at the stop condition.
        write_row(trace.events.size(), trace.terminal_time, trace.final_cost,
                  trace.final_counters);
    }
}

std::vector<TrialTrace> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("csv: missing header");
    }
    std::vector<TrialTrace> traces;
    auto find_trace = [&](const std::string& planner, std::size_t trial,
                          std::uint64_t seed) -> TrialTrace& {
        for (TrialTrace& trace : traces) {
            if (trace.planner == planner && trace.trial == trial) {
                return trace;
            }
        }
        traces.emplace_back();
        traces.back().planner = planner;
        traces.back().trial = trial;
        traces.back().seed = seed;
        return traces.back();
    };

    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() != 14) {
            throw std::runtime_error("csv: bad row: " + line);
        }
        const std::string& planner = fields[3];
        const std::size_t trial = std::stoul(fields[4]);
        const std::uint64_t seed = std::stoull(fields[5]);
        const std::size_t event_index = std::stoul(fields[6]);
        const double time = std::strtod(fields[7].c_str(), nullptr);
        const double cost = std::strtod(fields[8].c_str(), nullptr);
        Counters counters;
        counters.num_samples = std::stoull(fields[9]);
        counters.num_motion_checks = std::stoull(fields[10]);
        counters.num_interpolated_states = std::stoull(fields[11]);
        counters.num_queue_pops = std::stoull(fields[12]);
        counters.num_reverse_expansions = std::stoull(fields[13]);

        TrialTrace& trace = find_trace(planner, trial, seed);
        TraceEvent event;
        event.time_s = time;
        event.logical = counters.num_interpolated_states;
        event.cost = cost;
        event.counters = counters;
        // Rows arrive sorted by event_index; the largest index is terminal.
        trace.events.push_back(event);
        (void)event_index;
    }
    for (TrialTrace& trace : traces) {
        if (trace.events.empty()) {
            continue;
        }
        const TraceEvent terminal = trace.events.back();
        trace.events.pop_back();
        trace.final_cost = terminal.cost;
        trace.terminal_time = terminal.time_s;
        trace.final_counters = terminal.counters;
        trace.success = std::isfinite(trace.final_cost);
    }
    return traces;
}

SummaryStats summarize(const std::vector<TrialTrace>& traces) {
    std::vector<std::string> planner_names;
    for (const TrialTrace& trace : traces) {
        if (std::find(planner_names.begin(), planner_names.end(), trace.planner) ==
            planner_names.end()) {
            planner_names.push_back(trace.planner);
        }
    }
    std::sort(planner_names.begin(), planner_names.end());

    SummaryStats stats;
    for (const std::string& name : planner_names) {
        PlannerSummary summary;
        summary.planner = name;
        std::vector<double> initial_times, initial_costs, final_costs;
        std::vector<const TrialTrace*> members;
        for (const TrialTrace& trace : traces) {
            if (trace.planner != name) {
                continue;
            }
            members.push_back(&trace);
            initial_times.push_back(trace.events.empty() ? kInf : trace.events.front().time_s);
            initial_costs.push_back(trace.events.empty() ? kInf : trace.events.front().cost);
            final_costs.push_back(trace.final_cost);
        }
        summary.trials = members.size();
        std::size_t successes = 0;
        for (const double cost : final_costs) {
            if (std::isfinite(cost)) {
                ++successes;
            }
        }
        summary.success_rate =
            static_cast<double>(successes) / static_cast<double>(members.size());
        summary.initial_time = median_ci(initial_times, 0.99);
        summary.initial_cost = median_ci(initial_costs, 0.99);
        summary.final_cost = median_ci(final_costs, 0.99);

        double t_max = 0.0;
        for (const TrialTrace* trace : members) {
            t_max = std::max(t_max, trace->terminal_time);
        }
        if (t_max > 0.0) {
            constexpr int kGridPoints = 32;
            const double t_min = t_max / 1000.0;
            for (int i = 0; i < kGridPoints; ++i) {
                const double t =
                    t_min * std::pow(t_max / t_min,
                                     static_cast<double>(i) / (kGridPoints - 1));
                std::vector<double> costs_at_t;
                for (const TrialTrace* trace : members) {
                    double cost = kInf;
                    for (const TraceEvent& event : trace->events) {
                        if (event.time_s <= t) {
                            cost = event.cost;
                        } else {
                            break;
                        }
                    }
                    costs_at_t.push_back(cost);
                }
                summary.median_cost_over_time.push_back(
                    {t, median_ci(costs_at_t, 0.99).median});
            }
        }
        stats.planners.push_back(std::move(summary));
    }
    return stats;
}

std::string format_summary(const SummaryStats& stats) {
    std::ostringstream out;
    for (const PlannerSummary& p : stats.planners) {
        out << "planner " << p.planner << '\n';
        out << "  trials " << p.trials << '\n';
        out << "  success_rate " << format_double(p.success_rate) << '\n';
        auto line = [&](const char* label, const MedianCi& ci) {
            out << "  " << label << " median " << format_double(ci.median) << " ci99 ["
                << format_double(ci.lower) << ", " << format_double(ci.upper) << "]\n";
        };
        line("initial_time", p.initial_time);
        line("initial_cost", p.initial_cost);
        line("final_cost", p.final_cost);
        for (const auto& [t, cost] : p.median_cost_over_time) {
            out << "  median_cost_at " << format_double(t) << ' ' << format_double(cost) << '\n';
        }
    }
    return out.str();
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    std::vector<std::pair<std::size_t, std::size_t>> jobs;  // (planner index, trial)
    for (std::size_t p = 0; p < config.planners.size(); ++p) {
        for (std::size_t t = 0; t < config.trials; ++t) {
            jobs.push_back({p, t});
        }
    }
    std::vector<TrialTrace> traces(jobs.size());

    std::size_t num_threads = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("BENCH_THREADS")) {
        num_threads = std::strtoul(env, nullptr, 10);
    }
    num_threads = std::max<std::size_t>(1, std::min(num_threads, jobs.size()));

    std::mutex job_mutex;
    std::size_t next_job = 0;
    std::vector<std::string> errors;
    auto worker = [&] {
        while (true) {
            std::size_t job_index;
            {
                std::lock_guard<std::mutex> lock(job_mutex);
                if (next_job >= jobs.size()) {
                    return;
                }
                job_index = next_job++;
            }
            const auto [planner_index, trial] = jobs[job_index];
            try {
                traces[job_index] =
                    run_single_trial(config, config.planners[planner_index], trial);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(job_mutex);
                errors.push_back(e.what());
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < num_threads; ++i) {
        threads.emplace_back(worker);
    }
    for (std::thread& thread : threads) {
        thread.join();
    }
    if (!errors.empty()) {
        throw std::runtime_error("benchmark trial failed: " + errors.front());
    }

    std::sort(traces.begin(), traces.end(), [](const TrialTrace& a, const TrialTrace& b) {
        if (a.planner != b.planner) {
            return a.planner < b.planner;
        }
        return a.trial < b.trial;
    });

    ExperimentResult result;
    result.traces = std::move(traces);
    result.stats = summarize(result.traces);

    std::filesystem::create_directories(config.out_dir);
    result.csv_path = (std::filesystem::path(config.out_dir) / "results.csv").string();
    result.summary_path = (std::filesystem::path(config.out_dir) / "summary.txt").string();
    {
        std::ofstream csv(result.csv_path, std::ios::binary);
        write_csv(csv, config, result.traces);
    }
    {
        std::ofstream summary(result.summary_path, std::ios::binary);
        summary << format_summary(result.stats);
    }
    return result;
}

}  // namespace aitstar::bench
