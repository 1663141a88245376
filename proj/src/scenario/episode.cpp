#include "stlplan/scenario/episode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stlplan/common/error.hpp"

namespace stlplan::scenario {

stl::Formula spec_for_goal(const Airspace& airspace, const std::string& goal, SpecKind& kind) {
  if (airspace.is_runway(goal)) {
    kind = SpecKind::Landing;
    return build_landing_spec(airspace, goal);
  }
  kind = SpecKind::Takeoff;
  return build_takeoff_spec(airspace, goal);
}

AircraftState sample_start_state(const Airspace& airspace, const std::string& region, Rng& rng) {
  const Box& box = airspace.region(region).box;
  AircraftState s;
  s.x = rng.uniform(box.x_min, box.x_max);
  s.y = rng.uniform(box.y_min, box.y_max);
  if (airspace.is_runway(region)) {
    const double lo = std::max(box.z_min, 0.0);
    const double hi = std::max(lo, std::min(box.z_max, airspace.landing_max_altitude()));
    s.z = rng.uniform(lo, hi);
    // Depart outbound, away from the opposite runway end.
    s.chi = dynamics::wrap_angle(dynamics::units::deg_to_rad(airspace.runway(region).heading_deg + 180.0));
    return s;
  }
  const double lo = std::max(box.z_min, airspace.pattern_altitude() - 30.0);
  const double hi = std::min(box.z_max, airspace.pattern_altitude() + 30.0);
  s.z = lo < hi ? rng.uniform(lo, hi) : box.center_z();
  // Inbound toward the middle of the runway ends.
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& rw : airspace.runways()) {
    cx += airspace.region(rw.name).box.center_x();
    cy += airspace.region(rw.name).box.center_y();
  }
  if (!airspace.runways().empty()) {
    cx /= static_cast<double>(airspace.runways().size());
    cy /= static_cast<double>(airspace.runways().size());
  }
  const double bearing = std::atan2(cy - s.y, cx - s.x);
  const double step = std::numbers::pi / 4.0;
  s.chi = dynamics::wrap_angle(std::round(bearing / step) * step);
  return s;
}

Episode make_episode(const Airspace& airspace, const std::string& start, const std::string& goal, Rng& rng) {
  airspace.goal_index(start);
  airspace.goal_index(goal);
  if (start == goal) throw InvalidArgument("episode start and goal must differ ('" + start + "')");
  Episode ep;
  ep.start_region = start;
  ep.goal_region = goal;
  ep.start_state = sample_start_state(airspace, start, rng);
  ep.spec = spec_for_goal(airspace, goal, ep.spec_kind);
  return ep;
}

Episode sample_episode(const Airspace& airspace, Rng& rng, const EpisodeConstraints& constraints) {
  const auto& all = airspace.goal_set();
  auto allowed = [&all](const std::vector<std::string>& subset) {
    if (subset.empty()) return all;
    for (const auto& s : subset) {
      if (std::find(all.begin(), all.end(), s) == all.end()) {
        throw InvalidArgument("'" + s + "' is not in the goal set");
      }
    }
    return subset;
  };
  const auto starts = allowed(constraints.starts);
  const auto goals = allowed(constraints.goals);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& s : starts) {
    for (const auto& g : goals) {
      if (s != g) pairs.emplace_back(s, g);
    }
  }
  if (pairs.empty()) throw InvalidArgument("episode constraints leave no start/goal pair with start != goal");
  const auto& [start, goal] = pairs[rng.index(pairs.size())];
  return make_episode(airspace, start, goal, rng);
}

}  // namespace stlplan::scenario
