#pragma once

#include <string>
#include <vector>

#include "stlplan/common/random.hpp"
#include "stlplan/scenario/airspace.hpp"
#include "stlplan/scenario/specs.hpp"
#include "stlplan/stl/formula.hpp"

namespace stlplan::scenario {

struct Episode {
  std::string start_region;
  std::string goal_region;
  AircraftState start_state;
  stl::Formula spec = stl::Formula::truth();
  SpecKind spec_kind = SpecKind::Takeoff;
};

/// Restricts sampling to the listed start/goal names; empty means the whole
/// goal set.
struct EpisodeConstraints {
  std::vector<std::string> starts;
  std::vector<std::string> goals;
};

/// Landing spec for runway goals, takeoff spec otherwise.
stl::Formula spec_for_goal(const Airspace& airspace, const std::string& goal, SpecKind& kind);

/// Start state inside `region`: uniform over the box footprint. Compass
/// starts fly at the pattern altitude band (+-30 m) heading inbound to
/// midfield, snapped to 45 deg; runway starts sit on the ground band heading
/// outbound, opposite the runway's landing direction.
AircraftState sample_start_state(const Airspace& airspace, const std::string& region, Rng& rng);

/// Uniform over ordered (start, goal) pairs allowed by the constraints with
/// start != goal. Throws InvalidArgument when no pair remains.
Episode sample_episode(const Airspace& airspace, Rng& rng, const EpisodeConstraints& constraints = {});

/// Builds the episode for a fixed start/goal pair.
Episode make_episode(const Airspace& airspace, const std::string& start, const std::string& goal, Rng& rng);

}  // namespace stlplan::scenario
