#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stlplan/dynamics/kinematics.hpp"
#include "stlplan/policy/costmap.hpp"
#include "stlplan/scenario/airspace.hpp"

namespace stlplan::scenario {

/// Style of a synthetic landing demonstration. Real pilots only partly follow
/// the published pattern, so the demonstration set mixes all three.
enum class ApproachStyle { Pattern, BaseEntry, StraightIn, Departure };

const char* to_string(ApproachStyle style);

struct DemoConfig {
  std::size_t per_pair = 4;         // demonstrations per (start, goal) pair
  double pattern_fraction = 0.3;    // landing demos flying downwind-base-final
  double base_entry_fraction = 0.2; // landing demos joining at base
  double jitter_m = 250.0;          // waypoint perturbation, uniform +-
  double noise = 0.15;              // chance of taking the runner-up primitive
  std::size_t max_steps = 40;
  std::uint64_t seed = 7;
};

struct Demonstration {
  std::string start;
  std::string goal;
  ApproachStyle style = ApproachStyle::Departure;
  bool reached_goal = false;
  std::vector<AircraftState> steps;    // primitive granularity
  std::vector<AircraftState> samples;  // every segment sample
};

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Waypoints a demonstration pilot flies from `start` to `goal`.
std::vector<Waypoint> reference_waypoints(const Airspace& airspace, const AircraftState& start,
                                          const std::string& goal, ApproachStyle style);

/// Flies every ordered (start, goal) pair of the goal set `per_pair` times
/// with a noisy waypoint follower over the primitive library. Landing pairs
/// draw their approach style from the configured fractions.
std::vector<Demonstration> generate_demonstrations(const Airspace& airspace, const dynamics::PrimitiveLibrary& library,
                                                   const DemoConfig& config);

/// Covers the airspace bounding box at the given cell size.
policy::GridSpec default_grid(const Airspace& airspace, double xy_m = 250.0, double z_m = 100.0);

/// Frequency costmap per goal from the demonstrations that target it.
policy::CostmapSet goal_costmaps(const Airspace& airspace, const std::vector<Demonstration>& demos,
                                 const policy::GridSpec& grid);

}  // namespace stlplan::scenario
