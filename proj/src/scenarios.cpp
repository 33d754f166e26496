#include "aitstar/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "aitstar/kernels.hpp"

namespace aitstar {

bool AxisAlignedBox::contains(std::span<const double> x) const {
    for (std::size_t d = 0; d < lo.size(); ++d) {
        if (x[d] < lo[d] || x[d] > hi[d]) {
            return false;
        }
    }
    return true;
}

namespace {

State centered_state(std::size_t n, double first) {
    State x(n, 0.5);
    x[0] = first;
    return x;
}

void require_dimension(std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("built-in scenarios require dimension >= 2");
    }
}

}  // namespace

Scenario make_wall_gap(std::size_t n) {
    require_dimension(n);
    Scenario s{.name = "wall_gap",
               .space = StateSpace::unit_box(n),
               .start = centered_state(n, 0.1),
               .goal = centered_state(n, 0.9),
               .obstacles = {},
               .openings = {},
               .reference_cost = std::nullopt};
    AxisAlignedBox wall{std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
    wall.lo[0] = 0.45;
    wall.hi[0] = 0.55;
    wall.lo[1] = 0.08;
    s.obstacles.push_back(std::move(wall));
    // Taut path through the gap edge: two diagonals plus the wall crossing.
    s.reference_cost = 0.1 + 2.0 * std::sqrt(0.35 * 0.35 + 0.42 * 0.42);
    return s;
}

Scenario make_goal_enclosure(std::size_t n) {
    require_dimension(n);
    Scenario s{.name = "goal_enclosure",
               .space = StateSpace::unit_box(n),
               .start = centered_state(n, 0.1),
               .goal = centered_state(n, 0.75),
               .obstacles = {},
               .openings = {},
               .reference_cost = std::nullopt};

    // Shell walls, one slab pair per axis: outer extent [0.6, 0.9] along the
    // first axis and [0.35, 0.65] along the others, thickness 0.02.
    const double kThickness = 0.02;
    std::vector<double> outer_lo(n, 0.35);
    std::vector<double> outer_hi(n, 0.65);
    outer_lo[0] = 0.6;
    outer_hi[0] = 0.9;
    for (std::size_t axis = 0; axis < n; ++axis) {
        AxisAlignedBox near_wall{outer_lo, outer_hi};
        near_wall.hi[axis] = outer_lo[axis] + kThickness;
        AxisAlignedBox far_wall{outer_lo, outer_hi};
        far_wall.lo[axis] = outer_hi[axis] - kThickness;
        s.obstacles.push_back(std::move(near_wall));
        s.obstacles.push_back(std::move(far_wall));
    }
    // Opening over the full inner cross-section of the face farthest from
    // the start.
    AxisAlignedBox opening{outer_lo, outer_hi};
    opening.lo[0] = outer_hi[0] - kThickness;
    for (std::size_t d = 1; d < n; ++d) {
        opening.lo[d] += kThickness;
        opening.hi[d] -= kThickness;
    }
    s.openings.push_back(std::move(opening));
    return s;
}

Scenario make_free_space(std::size_t n) {
    require_dimension(n);
    Scenario s{.name = "free_space",
               .space = StateSpace::unit_box(n),
               .start = centered_state(n, 0.1),
               .goal = centered_state(n, 0.9),
               .obstacles = {},
               .openings = {},
               .reference_cost = 0.8};
    return s;
}

const std::vector<std::string>& builtin_scenario_names() {
    static const std::vector<std::string> names{"wall_gap", "goal_enclosure", "free_space"};
    return names;
}

Scenario make_builtin_scenario(const std::string& name, std::size_t n) {
    if (name == "wall_gap") {
        return make_wall_gap(n);
    }
    if (name == "goal_enclosure") {
        return make_goal_enclosure(n);
    }
    if (name == "free_space") {
        return make_free_space(n);
    }
    throw std::invalid_argument("unknown scenario: " + name);
}

namespace {

void write_values(std::ostream& out, std::span<const double> values) {
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        out << (i == 0 ? "" : " ") << buf;
    }
}

std::vector<double> parse_values(std::istringstream& line, std::size_t expected,
                                 const std::string& what) {
    std::vector<double> values;
    double v;
    while (line >> v) {
        values.push_back(v);
    }
    if (values.size() != expected) {
        throw std::runtime_error("scenario config: bad " + what + " entry");
    }
    return values;
}

}  // namespace

std::string scenario_to_config(const Scenario& scenario) {
    std::ostringstream out;
    const std::size_t n = scenario.dimension();
    out << "name " << scenario.name << "\n";
    out << "dimension " << n << "\n";
    out << "lower ";
    write_values(out, scenario.space.lower());
    out << "\nupper ";
    write_values(out, scenario.space.upper());
    out << "\nstart ";
    write_values(out, scenario.start);
    out << "\ngoal ";
    write_values(out, scenario.goal);
    out << "\n";
    if (scenario.reference_cost) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", *scenario.reference_cost);
        out << "reference_cost " << buf << "\n";
    }
    auto write_boxes = [&](const char* tag, const std::vector<AxisAlignedBox>& boxes) {
        for (const AxisAlignedBox& box : boxes) {
            out << tag << " ";
            write_values(out, box.lo);
            out << " ";
            write_values(out, box.hi);
            out << "\n";
        }
    };
    write_boxes("obstacle", scenario.obstacles);
    write_boxes("opening", scenario.openings);
    return out.str();
}

Scenario scenario_from_config(std::istream& in) {
    std::string name = "unnamed";
    std::size_t n = 0;
    std::vector<double> lower, upper, start, goal;
    std::optional<double> reference_cost;
    std::vector<AxisAlignedBox> obstacles, openings;

    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) {
            continue;
        }
        if (key == "name") {
            ls >> name;
        } else if (key == "dimension") {
            ls >> n;
        } else if (key == "lower") {
            lower = parse_values(ls, n, "lower");
        } else if (key == "upper") {
            upper = parse_values(ls, n, "upper");
        } else if (key == "start") {
            start = parse_values(ls, n, "start");
        } else if (key == "goal") {
            goal = parse_values(ls, n, "goal");
        } else if (key == "reference_cost") {
            double v;
            ls >> v;
            reference_cost = v;
        } else if (key == "obstacle" || key == "opening") {
            std::vector<double> values = parse_values(ls, 2 * n, key);
            AxisAlignedBox box{std::vector<double>(values.begin(), values.begin() + n),
                               std::vector<double>(values.begin() + n, values.end())};
            (key == "obstacle" ? obstacles : openings).push_back(std::move(box));
        } else {
            throw std::runtime_error("scenario config: unknown key '" + key + "'");
        }
    }
    if (n == 0 || start.size() != n || goal.size() != n) {
        throw std::runtime_error("scenario config: missing dimension/start/goal");
    }
    if (lower.empty()) {
        lower.assign(n, 0.0);
    }
    if (upper.empty()) {
        upper.assign(n, 1.0);
    }
    return Scenario{.name = std::move(name),
                    .space = StateSpace(std::move(lower), std::move(upper)),
                    .start = std::move(start),
                    .goal = std::move(goal),
                    .obstacles = std::move(obstacles),
                    .openings = std::move(openings),
                    .reference_cost = reference_cost};
}

Scenario scenario_from_config_string(const std::string& text) {
    std::istringstream in(text);
    return scenario_from_config(in);
}

ValidityOracle::ValidityOracle(const Scenario& scenario, double resolution)
    : scenario_(&scenario), resolution_(resolution) {
    if (!(resolution > 0.0)) {
        throw std::invalid_argument("collision resolution must be positive");
    }
    const std::size_t n = scenario.dimension();
    for (const AxisAlignedBox& box : scenario.obstacles) {
        box_lo_.insert(box_lo_.end(), box.lo.begin(), box.lo.end());
        box_hi_.insert(box_hi_.end(), box.hi.begin(), box.hi.end());
    }
    for (const AxisAlignedBox& box : scenario.openings) {
        open_lo_.insert(open_lo_.end(), box.lo.begin(), box.lo.end());
        open_hi_.insert(open_hi_.end(), box.hi.begin(), box.hi.end());
    }
    ts_.resize(1024);
    zero_dir_.resize(n, 0.0);
}

bool ValidityOracle::is_valid_state(std::span<const double> x) {
    ++num_state_checks_;
    const double t = 0.0;
    return kernels::ops().first_blocked_point(
               x.data(), zero_dir_.data(), &t, 1, scenario_->dimension(), box_lo_.data(),
               box_hi_.data(), scenario_->obstacles.size(), open_lo_.data(), open_hi_.data(),
               scenario_->openings.size()) == 1;
}

bool ValidityOracle::probe_chunk(std::span<const double> a, const double* dir, const double* ts,
                                 std::size_t count) {
    const std::size_t blocked = kernels::ops().first_blocked_point(
        a.data(), dir, ts, count, scenario_->dimension(), box_lo_.data(), box_hi_.data(),
        scenario_->obstacles.size(), open_lo_.data(), open_hi_.data(),
        scenario_->openings.size());
    if (blocked < count) {
        num_interpolated_states_ += blocked + 1;
        return false;
    }
    num_interpolated_states_ += count;
    return true;
}

bool ValidityOracle::is_valid_motion(std::span<const double> a, std::span<const double> b) {
    ++num_motion_checks_;
    const std::size_t n = scenario_->dimension();
    dir_.resize(n);
    for (std::size_t d = 0; d < n; ++d) {
        dir_[d] = b[d] - a[d];
    }

    // Endpoints first.
    const double endpoint_ts[2] = {0.0, 1.0};
    if (!probe_chunk(a, dir_.data(), endpoint_ts, 2)) {
        return false;
    }

    const double length = c_hat(a, b);
    const double target = resolution_ * scenario_->space.max_extent();
    if (length <= target) {
        return true;
    }

    // Dyadic subdivision, midpoints first, level by level. Grids nest as the
    // resolution shrinks, so an invalid verdict is stable under refinement.
    int levels = 0;
    double spacing = length;
    while (spacing > target) {
        spacing /= 2.0;
        ++levels;
    }
    for (int level = 1; level <= levels; ++level) {
        const double step = std::exp2(static_cast<double>(-level));
        const std::uint64_t num_points = 1ull << (level - 1);
        std::uint64_t emitted = 0;
        while (emitted < num_points) {
            const std::size_t chunk = static_cast<std::size_t>(
                std::min<std::uint64_t>(num_points - emitted, ts_.size()));
            for (std::size_t i = 0; i < chunk; ++i) {
                ts_[i] = static_cast<double>(2 * (emitted + i) + 1) * step;
            }
            if (!probe_chunk(a, dir_.data(), ts_.data(), chunk)) {
                return false;
            }
            emitted += chunk;
        }
    }
    return true;
}

}  // namespace aitstar
