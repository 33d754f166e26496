#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aitstar/space.hpp"

namespace aitstar {

// Closed axis-aligned box; used both for invalid regions and for carve-out
// openings in them.
struct AxisAlignedBox {
    std::vector<double> lo;
    std::vector<double> hi;

    bool contains(std::span<const double> x) const;
};

// An obstacle world. A state is invalid when it lies in some obstacle box
// and in no opening box.
struct Scenario {
    std::string name;
    StateSpace space;
    State start;
    State goal;
    std::vector<AxisAlignedBox> obstacles;
    std::vector<AxisAlignedBox> openings;
    std::optional<double> reference_cost;  // known-optimum annotation, when available

    std::size_t dimension() const { return space.dimension(); }
};

// Axis-aligned wall across the space with a narrow gap at the bottom of the
// second coordinate; two homotopy classes in every dimension.
Scenario make_wall_gap(std::size_t n);

// Hollow box around the goal, open only on the face farthest from the start.
Scenario make_goal_enclosure(std::size_t n);

// No obstacles; straight line is optimal.
Scenario make_free_space(std::size_t n);

const std::vector<std::string>& builtin_scenario_names();
Scenario make_builtin_scenario(const std::string& name, std::size_t n);

// Flat key-value text round-trip (schema in the README).
std::string scenario_to_config(const Scenario& scenario);
Scenario scenario_from_config(std::istream& in);
Scenario scenario_from_config_string(const std::string& text);

// Resolution-parameterized collision checking with evaluation counters.
// One oracle per planner instance; not thread-safe.
class ValidityOracle final : public StateValidator {
  public:
    // resolution is a fraction of the space's maximum extent.
    ValidityOracle(const Scenario& scenario, double resolution = 1e-6);

    bool is_valid_state(std::span<const double> x) override;

    // Checks interpolated states along [a, b] at arc-length spacing no larger
    // than resolution * max_extent, endpoints included, midpoints first.
    // Short-circuits on the first collision.
    bool is_valid_motion(std::span<const double> a, std::span<const double> b) override;

    const Scenario& scenario() const { return *scenario_; }
    double resolution() const { return resolution_; }

    std::uint64_t num_state_checks() const { return num_state_checks_; }
    std::uint64_t num_motion_checks() const { return num_motion_checks_; }
    std::uint64_t num_interpolated_states() const { return num_interpolated_states_; }

  private:
    bool probe_chunk(std::span<const double> a, const double* dir, const double* ts,
                     std::size_t count);

    const Scenario* scenario_;
    double resolution_;
    std::vector<double> box_lo_;
    std::vector<double> box_hi_;
    std::vector<double> open_lo_;
    std::vector<double> open_hi_;
    std::vector<double> ts_;
    std::vector<double> zero_dir_;
    std::vector<double> dir_;
    std::uint64_t num_state_checks_ = 0;
    std::uint64_t num_motion_checks_ = 0;
    std::uint64_t num_interpolated_states_ = 0;
};

}  // namespace aitstar
