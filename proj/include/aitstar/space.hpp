#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "aitstar/rng.hpp"

namespace aitstar {

using State = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Validity interface implemented by the collision machinery in scenarios.hpp.
// Methods are non-const: oracles keep evaluation counters.
class StateValidator {
  public:
    virtual ~StateValidator() = default;
    virtual bool is_valid_state(std::span<const double> x) = 0;
    virtual bool is_valid_motion(std::span<const double> a, std::span<const double> b) = 0;
};

// Axis-aligned bounded subset of R^n.
class StateSpace {
  public:
    StateSpace(std::vector<double> lower, std::vector<double> upper);
    static StateSpace unit_box(std::size_t dimension);

    std::size_t dimension() const { return lower_.size(); }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    double max_extent() const { return max_extent_; }
    double measure() const { return measure_; }
    bool contains(std::span<const double> x) const;

  private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    double max_extent_ = 0.0;
    double measure_ = 0.0;
};

struct ProblemInstance {
    // Validates start and goals against the oracle; throws std::invalid_argument
    // when any of them is out of bounds or in collision, or when goals is empty.
    ProblemInstance(StateSpace space, State start, std::vector<State> goals,
                    StateValidator& validator);

    StateSpace space;
    State start;
    std::vector<State> goals;
    StateValidator* validator;
};

// Admissible cost-to-come estimate: straight-line distance from the start.
double g_hat(const ProblemInstance& problem, std::span<const double> x);

// Admissible a-priori cost-to-go estimate: distance to the nearest goal.
double h_hat_apriori(const ProblemInstance& problem, std::span<const double> x);

// Admissible edge cost estimate and, for the path-length objective, also the
// true edge cost of a collision-free motion.
double c_hat(std::span<const double> a, std::span<const double> b);

double f_hat(const ProblemInstance& problem, std::span<const double> x);

// Lebesgue measure of the n-dimensional unit ball.
double lebesgue_unit_ball(std::size_t n);

// Measure of the prolate hyperspheroid with focal distance c_min and
// transverse diameter c. Zero when degenerate (c <= c_min in n >= 2).
double hyperspheroid_measure(double c, double c_min, std::size_t n);

// Measure of the set that could improve a solution of cost c_current,
// clamped to the measure of the bounded space.
double informed_measure(const ProblemInstance& problem, double c_current);

// RGG connection radius for q informed samples.
double rgg_radius(std::size_t n, std::size_t q, double informed_set_measure, double eta);

struct InformedSet {
    const ProblemInstance* problem;
    double c_current = kInf;
    bool contains(std::span<const double> x) const;
};

class DegenerateInformedSetError : public std::runtime_error {
  public:
    explicit DegenerateInformedSetError(const std::string& what) : std::runtime_error(what) {}
};

// Uniform sampler over the informed set. Owns its random stream; confined to
// one logical thread.
class InformedSampler {
  public:
    InformedSampler(const ProblemInstance& problem, std::uint64_t seed);

    // Draws `count` states with f_hat <= c_current. Uniform over the bounded
    // space when c_current is infinite. Throws DegenerateInformedSetError when
    // the informed set has zero measure.
    std::vector<State> sample(std::size_t count, double c_current);

  private:
    State sample_uniform();
    State sample_spheroid(std::size_t goal_index, double c_current);

    const ProblemInstance* problem_;
    Rng rng_;
};

}  // namespace aitstar
