#include "aitstar/space.hpp"

#include <algorithm>
#include <cmath>

#include "aitstar/kernels.hpp"

namespace aitstar {

StateSpace::StateSpace(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty() || lower_.size() != upper_.size()) {
        throw std::invalid_argument("state space bounds must be non-empty and equal-sized");
    }
    if (lower_.size() > 64) {
        throw std::invalid_argument("state space dimension is limited to 64");
    }
    double sq = 0.0;
    measure_ = 1.0;
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!(lower_[i] < upper_[i])) {
            throw std::invalid_argument("state space requires lower < upper per dimension");
        }
        const double w = upper_[i] - lower_[i];
        sq += w * w;
        measure_ *= w;
    }
    max_extent_ = std::sqrt(sq);
}

StateSpace StateSpace::unit_box(std::size_t dimension) {
    return StateSpace(std::vector<double>(dimension, 0.0), std::vector<double>(dimension, 1.0));
}

bool StateSpace::contains(std::span<const double> x) const {
    if (x.size() != lower_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lower_[i] || x[i] > upper_[i]) {
            return false;
        }
    }
    return true;
}

ProblemInstance::ProblemInstance(StateSpace space_in, State start_in, std::vector<State> goals_in,
                                 StateValidator& validator_in)
    : space(std::move(space_in)),
      start(std::move(start_in)),
      goals(std::move(goals_in)),
      validator(&validator_in) {
    if (goals.empty()) {
        throw std::invalid_argument("goal set must be non-empty");
    }
    if (!space.contains(start) || !validator->is_valid_state(start)) {
        throw std::invalid_argument("start state is invalid");
    }
    for (const State& goal : goals) {
        if (!space.contains(goal) || !validator->is_valid_state(goal)) {
            throw std::invalid_argument("goal state is invalid");
        }
    }
}

double c_hat(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(kernels::ops().squared_distance(a.data(), b.data(), a.size()));
}

double g_hat(const ProblemInstance& problem, std::span<const double> x) {
    return c_hat(problem.start, x);
}

double h_hat_apriori(const ProblemInstance& problem, std::span<const double> x) {
    double best = kInf;
    for (const State& goal : problem.goals) {
        best = std::min(best, c_hat(x, goal));
    }
    return best;
}

double f_hat(const ProblemInstance& problem, std::span<const double> x) {
    return g_hat(problem, x) + h_hat_apriori(problem, x);
}

double lebesgue_unit_ball(std::size_t n) {
    const double half = static_cast<double>(n) / 2.0;
    return std::pow(M_PI, half) / std::tgamma(half + 1.0);
}

double hyperspheroid_measure(double c, double c_min, std::size_t n) {
    if (c < c_min) {
        return 0.0;
    }
    if (n == 1) {
        return c;
    }
    const double conjugate = std::sqrt(c * c - c_min * c_min) / 2.0;
    return lebesgue_unit_ball(n) * (c / 2.0) *
           std::pow(conjugate, static_cast<double>(n - 1));
}

double informed_measure(const ProblemInstance& problem, double c_current) {
    if (!std::isfinite(c_current)) {
        return problem.space.measure();
    }
    double total = 0.0;
    for (const State& goal : problem.goals) {
        total += hyperspheroid_measure(c_current, g_hat(problem, goal), problem.space.dimension());
    }
    return std::min(total, problem.space.measure());
}

double rgg_radius(std::size_t n, std::size_t q, double informed_set_measure, double eta) {
    const double nd = static_cast<double>(n);
    const double qd = static_cast<double>(q);
    const double term = 2.0 * (1.0 + 1.0 / nd) * (informed_set_measure / lebesgue_unit_ball(n)) *
                        (std::log(qd) / qd);
    return eta * std::pow(term, 1.0 / nd);
}

bool InformedSet::contains(std::span<const double> x) const {
    return f_hat(*problem, x) <= c_current;
}

InformedSampler::InformedSampler(const ProblemInstance& problem, std::uint64_t seed)
    : problem_(&problem), rng_(seed) {}

State InformedSampler::sample_uniform() {
    const StateSpace& space = problem_->space;
    State x(space.dimension());
    for (std::size_t d = 0; d < x.size(); ++d) {
        x[d] = rng_.uniform(space.lower()[d], space.upper()[d]);
    }
    return x;
}

State InformedSampler::sample_spheroid(std::size_t goal_index, double c_current) {
    const std::size_t n = problem_->space.dimension();
    const State& goal = problem_->goals[goal_index];
    const double c_min = g_hat(*problem_, goal);

    // Uniform point in the unit ball: normalized Gaussian direction scaled by
    // U^(1/n).
    State x(n);
    double norm_sq = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        x[d] = rng_.normal();
        norm_sq += x[d] * x[d];
    }
    const double norm = std::sqrt(norm_sq);
    const double radial = std::pow(rng_.uniform01(), 1.0 / static_cast<double>(n));
    for (std::size_t d = 0; d < n; ++d) {
        x[d] = x[d] / norm * radial;
    }

    // Stretch onto the spheroid axes: transverse along the focal axis,
    // conjugate across it.
    const double transverse = c_current / 2.0;
    const double conjugate = std::sqrt(c_current * c_current - c_min * c_min) / 2.0;
    x[0] *= transverse;
    for (std::size_t d = 1; d < n; ++d) {
        x[d] *= conjugate;
    }

    // Householder reflection mapping e1 to the focal direction, then a
    // translation to the spheroid center. Reflections are orthogonal, so the
    // ball sample stays uniform.
    if (c_min > 0.0 && n > 1) {
        State axis(n);
        for (std::size_t d = 0; d < n; ++d) {
            axis[d] = (goal[d] - problem_->start[d]) / c_min;
        }
        State v = axis;
        v[0] -= 1.0;
        double v_sq = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            v_sq += v[d] * v[d];
        }
        if (v_sq > 1e-30) {
            double dot = 0.0;
            for (std::size_t d = 0; d < n; ++d) {
                dot += v[d] * x[d];
            }
            const double scale = 2.0 * dot / v_sq;
            for (std::size_t d = 0; d < n; ++d) {
                x[d] -= scale * v[d];
            }
        }
    }
    for (std::size_t d = 0; d < n; ++d) {
        x[d] += (problem_->start[d] + goal[d]) / 2.0;
    }
    return x;
}

std::vector<State> InformedSampler::sample(std::size_t count, double c_current) {
    std::vector<State> result;
    result.reserve(count);
    if (!std::isfinite(c_current)) {
        for (std::size_t i = 0; i < count; ++i) {
            result.push_back(sample_uniform());
        }
        return result;
    }

    const std::size_t n = problem_->space.dimension();
    std::vector<double> weights(problem_->goals.size());
    double total_weight = 0.0;
    for (std::size_t g = 0; g < problem_->goals.size(); ++g) {
        weights[g] = hyperspheroid_measure(c_current, g_hat(*problem_, problem_->goals[g]), n);
        total_weight += weights[g];
    }
    if (total_weight <= 0.0) {
        throw DegenerateInformedSetError("informed set has zero measure");
    }

    auto spheroid_contains = [&](std::size_t g, std::span<const double> x) {
        return g_hat(*problem_, x) + c_hat(x, problem_->goals[g]) <= c_current;
    };

    while (result.size() < count) {
        double pick = rng_.uniform01() * total_weight;
        std::size_t goal_index = 0;
        for (; goal_index + 1 < weights.size(); ++goal_index) {
            if (pick < weights[goal_index]) {
                break;
            }
            pick -= weights[goal_index];
        }
        State x = sample_spheroid(goal_index, c_current);
        if (!problem_->space.contains(x)) {
            continue;
        }
        // Drop the rare over-the-boundary numerical escapee, and samples
        // covered by an earlier goal's spheroid (union sampling).
        if (!spheroid_contains(goal_index, x)) {
            continue;
        }
        bool covered_earlier = false;
        for (std::size_t g = 0; g < goal_index; ++g) {
            if (weights[g] > 0.0 && spheroid_contains(g, x)) {
                covered_earlier = true;
                break;
            }
        }
        if (covered_earlier) {
            continue;
        }
        result.push_back(std::move(x));
    }
    return result;
}

}  // namespace aitstar
