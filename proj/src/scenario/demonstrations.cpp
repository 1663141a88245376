#include "stlplan/scenario/demonstrations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stlplan/common/error.hpp"
#include "stlplan/common/random.hpp"
#include "stlplan/scenario/episode.hpp"

namespace stlplan::scenario {

namespace {

constexpr double kCaptureRadius = 400.0;

struct Frame {
  double ux, uy;  // landing direction
  double tx, ty;  // touchdown point
};

Frame runway_frame(const Airspace& airspace, const std::string& runway) {
  const Runway& rw = airspace.runway(runway);
  const double h = dynamics::units::deg_to_rad(rw.heading_deg);
  const Box& box = airspace.region(rw.name).box;
  return Frame{std::cos(h), std::sin(h), box.center_x(), box.center_y()};
}

// Extent of a box along unit direction (ux, uy).
double extent_along(const Box& b, double ux, double uy) {
  return std::abs(ux) * (b.x_max - b.x_min) + std::abs(uy) * (b.y_max - b.y_min);
}

Demonstration fly(const Airspace& airspace, const dynamics::PrimitiveLibrary& library, const AircraftState& start,
                  std::size_t goal, std::vector<Waypoint> waypoints, const DemoConfig& cfg, Rng& rng) {
  Demonstration demo;
  demo.steps.push_back(start);
  demo.samples.push_back(start);
  AircraftState state = start;
  std::size_t wp = 0;
  std::vector<std::pair<double, std::size_t>> ranked(library.size());
  for (std::size_t step = 0; step < cfg.max_steps && wp < waypoints.size(); ++step) {
    const Waypoint& target = waypoints[wp];
    const double dist_now = std::hypot(target.x - state.x, target.y - state.y);
    for (std::size_t a = 0; a < library.size(); ++a) {
      const auto& p = library[a];
      const auto seg = dynamics::integrate(state, p, library.horizon(), library.sample_period());
      const auto& end = seg.end();
      const double reach = p.horizontal_speed() * library.horizon();
      const double frac = std::min(1.0, reach / std::max(dist_now, 1.0));
      const double z_wanted = state.z + (target.z - state.z) * frac;
      const double cost = std::hypot(end.x - target.x, end.y - target.y) + 2.0 * std::abs(end.z - z_wanted);
      ranked[a] = {cost, a};
    }
    std::sort(ranked.begin(), ranked.end());
    const std::size_t choice = rng.uniform01() < cfg.noise ? ranked[1].second : ranked[0].second;
    auto seg = dynamics::integrate(state, library[choice], library.horizon(), library.sample_period());
    const auto entry = airspace.first_goal_entry(seg.states);
    if (entry && entry->goal == goal) {
      seg.states.resize(entry->sample + 1);
      demo.reached_goal = true;
    }
    demo.samples.insert(demo.samples.end(), seg.states.begin() + 1, seg.states.end());
    state = seg.end();
    demo.steps.push_back(state);
    if (demo.reached_goal) break;
    double closest = std::numeric_limits<double>::infinity();
    for (const auto& s : seg.states) closest = std::min(closest, std::hypot(s.x - target.x, s.y - target.y));
    if (closest < kCaptureRadius) ++wp;
  }
  return demo;
}

}  // namespace

const char* to_string(ApproachStyle style) {
  switch (style) {
    case ApproachStyle::Pattern: return "pattern";
    case ApproachStyle::BaseEntry: return "base_entry";
    case ApproachStyle::StraightIn: return "straight_in";
    case ApproachStyle::Departure: return "departure";
  }
  return "unknown";
}

std::vector<Waypoint> reference_waypoints(const Airspace& airspace, const AircraftState& start,
                                          const std::string& goal, ApproachStyle style) {
  const double pa = airspace.pattern_altitude();
  if (!airspace.is_runway(goal)) {
    const Box& g = airspace.region(goal).box;
    std::vector<Waypoint> wps;
    if (style == ApproachStyle::Departure) {
      // Climb out along the current heading before turning on course.
      wps.push_back({start.x + 1500.0 * std::cos(start.chi), start.y + 1500.0 * std::sin(start.chi), 150.0});
    }
    wps.push_back({g.center_x(), g.center_y(), pa + 150.0});
    return wps;
  }
  const Runway& rw = airspace.runway(goal);
  const Frame f = runway_frame(airspace, goal);
  const Box& dw = airspace.region(rw.downwind_region).box;
  const Box& base = airspace.region(rw.base_region).box;
  const double dw_half = 0.3 * extent_along(dw, f.ux, f.uy);
  const Waypoint final_join{f.tx - 2200.0 * f.ux, f.ty - 2200.0 * f.uy, 140.0};
  const Waypoint short_final{f.tx - 600.0 * f.ux, f.ty - 600.0 * f.uy, 30.0};
  const Waypoint touchdown{f.tx, f.ty, 0.0};
  std::vector<Waypoint> wps;
  switch (style) {
    case ApproachStyle::Pattern:
      // Downwind is flown against the landing direction.
      wps.push_back({dw.center_x() + dw_half * f.ux, dw.center_y() + dw_half * f.uy, pa});
      wps.push_back({dw.center_x() - dw_half * f.ux, dw.center_y() - dw_half * f.uy, pa});
      [[fallthrough]];
    case ApproachStyle::BaseEntry:
      wps.push_back({base.center_x(), base.center_y(), pa - 80.0});
      break;
    case ApproachStyle::StraightIn:
    case ApproachStyle::Departure:
      wps.push_back({f.tx - 3500.0 * f.ux, f.ty - 3500.0 * f.uy, 200.0});
      break;
  }
  wps.push_back(final_join);
  wps.push_back(short_final);
  wps.push_back(touchdown);
  return wps;
}

std::vector<Demonstration> generate_demonstrations(const Airspace& airspace, const dynamics::PrimitiveLibrary& library,
                                                   const DemoConfig& config) {
  if (config.pattern_fraction < 0.0 || config.base_entry_fraction < 0.0 ||
      config.pattern_fraction + config.base_entry_fraction > 1.0) {
    throw InvalidArgument("demonstration style fractions must be non-negative and sum to at most 1");
  }
  Rng rng(config.seed);
  std::vector<Demonstration> out;
  const auto& goals = airspace.goal_set();
  for (const auto& start : goals) {
    for (const auto& goal : goals) {
      if (start == goal) continue;
      const std::size_t goal_idx = airspace.goal_index(goal);
      for (std::size_t k = 0; k < config.per_pair; ++k) {
        const AircraftState s0 = sample_start_state(airspace, start, rng);
        ApproachStyle style = ApproachStyle::Departure;
        if (airspace.is_runway(goal)) {
          const double u = rng.uniform01();
          style = u < config.pattern_fraction                                ? ApproachStyle::Pattern
                  : u < config.pattern_fraction + config.base_entry_fraction ? ApproachStyle::BaseEntry
                                                                             : ApproachStyle::StraightIn;
        }
        auto wps = reference_waypoints(airspace, s0, goal, style);
        // The touchdown point stays fixed; everything else is jittered.
        const std::size_t jittered = airspace.is_runway(goal) ? wps.size() - 1 : wps.size();
        for (std::size_t i = 0; i < jittered; ++i) {
          wps[i].x += rng.uniform(-config.jitter_m, config.jitter_m);
          wps[i].y += rng.uniform(-config.jitter_m, config.jitter_m);
        }
        Demonstration d = fly(airspace, library, s0, goal_idx, std::move(wps), config, rng);
        d.start = start;
        d.goal = goal;
        d.style = style;
        out.push_back(std::move(d));
      }
    }
  }
  return out;
}

policy::GridSpec default_grid(const Airspace& airspace, double xy_m, double z_m) {
  const Box& b = airspace.bounds();
  policy::GridSpec g;
  g.origin = {b.x_min, b.y_min, b.z_min};
  g.resolution = {xy_m, xy_m, z_m};
  g.dims = {static_cast<std::size_t>(std::ceil((b.x_max - b.x_min) / xy_m)),
            static_cast<std::size_t>(std::ceil((b.y_max - b.y_min) / xy_m)),
            static_cast<std::size_t>(std::ceil((b.z_max - b.z_min) / z_m))};
  g.validate();
  return g;
}

policy::CostmapSet goal_costmaps(const Airspace& airspace, const std::vector<Demonstration>& demos,
                                 const policy::GridSpec& grid) {
  policy::CostmapSet set;
  std::vector<std::vector<AircraftState>> all;
  for (std::size_t g = 0; g < airspace.goal_set().size(); ++g) {
    std::vector<std::vector<AircraftState>> mine;
    for (const auto& d : demos) {
      if (d.goal == airspace.goal_name(g)) mine.push_back(d.samples);
    }
    if (!mine.empty()) set.set_goal_map(g, policy::build_costmap_from_traces(mine, grid));
  }
  for (const auto& d : demos) all.push_back(d.samples);
  if (!all.empty()) set.set_shared(policy::build_costmap_from_traces(all, grid));
  return set;
}

}  // namespace stlplan::scenario
