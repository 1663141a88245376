#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stlplan/dynamics/kinematics.hpp"

namespace stlplan::scenario {

using dynamics::AircraftState;

/// Axis-aligned box in meters.
struct Box {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  double z_min = 0.0, z_max = 0.0;

  void validate(const std::string& what) const;
  bool contains(double x, double y, double z) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max && z >= z_min && z <= z_max;
  }
  bool contains(const AircraftState& s) const { return contains(s.x, s.y, s.z); }
  bool contains(const Box& other) const;
  bool intersects(const Box& other) const;
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }
  double center_z() const { return 0.5 * (z_min + z_max); }

  bool operator==(const Box&) const = default;
};

/// Distance to the nearest face when inside (positive), minus the Euclidean
/// distance to the box when outside, zero on the boundary.
double signed_distance(const Box& box, const AircraftState& s);

struct Region {
  std::string name;
  Box box;

  bool operator==(const Region&) const = default;
};

double signed_distance(const Region& region, const AircraftState& s);

/// Runway end with the traffic-pattern regions flown before landing on it.
/// `heading_deg` is the landing direction in the state's heading convention
/// (counter-clockwise from east).
struct Runway {
  std::string name;
  double heading_deg = 0.0;
  std::string final_region;
  std::string base_region;
  std::string downwind_region;

  bool operator==(const Runway&) const = default;
};

/// First sample of a segment that moves into a goal region.
struct GoalEntry {
  std::size_t goal = 0;    // index into the goal set
  std::size_t sample = 0;  // index into the segment
};

class Airspace {
 public:
  Airspace(Box bounds, std::vector<Region> regions, std::vector<Runway> runways, std::vector<std::string> goal_set,
           double pattern_altitude_m, double landing_max_altitude_m = 30.0);

  const Box& bounds() const { return bounds_; }
  const std::vector<Region>& regions() const { return regions_; }
  const std::vector<Runway>& runways() const { return runways_; }
  const std::vector<std::string>& goal_set() const { return goal_set_; }
  double pattern_altitude() const { return pattern_altitude_; }
  double landing_max_altitude() const { return landing_max_altitude_; }

  /// Throws InvalidArgument for an unknown name.
  const Region& region(const std::string& name) const;
  bool has_region(const std::string& name) const;
  std::size_t goal_index(const std::string& name) const;
  const std::string& goal_name(std::size_t index) const { return goal_set_.at(index); }
  bool is_runway(const std::string& name) const;
  const Runway& runway(const std::string& name) const;

  /// Inside the goal's box; runway goals also need z <= landing_max_altitude.
  bool in_goal(std::size_t goal, const AircraftState& s) const;
  /// Scans samples 1..n-1 for the first one inside a goal region that the
  /// previous sample was not inside.
  std::optional<GoalEntry> first_goal_entry(std::span<const AircraftState> samples) const;

  double half_diagonal() const;

 private:
  Box bounds_;
  std::vector<Region> regions_;
  std::vector<Runway> runways_;
  std::vector<std::string> goal_set_;
  std::vector<std::size_t> goal_region_;  // goal index -> region index
  std::vector<bool> goal_is_runway_;
  double pattern_altitude_;
  double landing_max_altitude_;
};

/// Synthetic single-runway field: a 1.5 km runway along +x with the R08
/// threshold at the origin, left-hand patterns for both ends, eight 2 km
/// compass goal boxes about 6 km out, and a touchdown box per runway end.
Airspace default_airspace();

/// JSON {bounding_box, regions: [{name, box}], runways: [{name, heading_deg,
/// final, base, downwind}], goal_set, pattern_altitude_m,
/// landing_max_altitude_m?}. A box is {x: [min,max], y: [min,max], z: [min,max]}.
Airspace airspace_from_json(const std::string& text);
std::string airspace_to_json(const Airspace& a);
Airspace load_airspace(const std::string& path);

}  // namespace stlplan::scenario
