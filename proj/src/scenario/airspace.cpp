#include "stlplan/scenario/airspace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "stlplan/common/error.hpp"

namespace stlplan::scenario {

void Box::validate(const std::string& what) const {
  const double v[] = {x_min, x_max, y_min, y_max, z_min, z_max};
  for (double d : v) {
    if (!std::isfinite(d)) throw InvalidArgument(what + ": box bounds must be finite");
  }
  if (!(x_min < x_max) || !(y_min < y_max) || !(z_min < z_max)) {
    throw InvalidArgument(what + ": box needs min < max on every axis");
  }
}

bool Box::contains(const Box& o) const {
  return o.x_min >= x_min && o.x_max <= x_max && o.y_min >= y_min && o.y_max <= y_max && o.z_min >= z_min &&
         o.z_max <= z_max;
}

bool Box::intersects(const Box& o) const {
  return x_min < o.x_max && o.x_min < x_max && y_min < o.y_max && o.y_min < y_max && z_min < o.z_max &&
         o.z_min < z_max;
}

double signed_distance(const Box& b, const AircraftState& s) {
  if (b.contains(s)) {
    return std::min({s.x - b.x_min, b.x_max - s.x, s.y - b.y_min, b.y_max - s.y, s.z - b.z_min, b.z_max - s.z});
  }
  const double dx = std::max({b.x_min - s.x, 0.0, s.x - b.x_max});
  const double dy = std::max({b.y_min - s.y, 0.0, s.y - b.y_max});
  const double dz = std::max({b.z_min - s.z, 0.0, s.z - b.z_max});
  return -std::sqrt(dx * dx + dy * dy + dz * dz);
}

double signed_distance(const Region& region, const AircraftState& s) { return signed_distance(region.box, s); }

Airspace::Airspace(Box bounds, std::vector<Region> regions, std::vector<Runway> runways,
                   std::vector<std::string> goal_set, double pattern_altitude_m, double landing_max_altitude_m)
    : bounds_(bounds),
      regions_(std::move(regions)),
      runways_(std::move(runways)),
      goal_set_(std::move(goal_set)),
      pattern_altitude_(pattern_altitude_m),
      landing_max_altitude_(landing_max_altitude_m) {
  bounds_.validate("bounding box");
  if (!std::isfinite(pattern_altitude_) || !std::isfinite(landing_max_altitude_)) {
    throw InvalidArgument("airspace altitudes must be finite");
  }
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    const auto& r = regions_[i];
    if (r.name.empty()) throw InvalidArgument("region names must not be empty");
    r.box.validate("region '" + r.name + "'");
    if (!bounds_.contains(r.box)) throw InvalidArgument("region '" + r.name + "' leaves the bounding box");
    for (std::size_t j = 0; j < i; ++j) {
      if (regions_[j].name == r.name) throw InvalidArgument("duplicate region '" + r.name + "'");
    }
  }
  for (const auto& rw : runways_) {
    if (!has_region(rw.name)) throw InvalidArgument("runway '" + rw.name + "' has no region of the same name");
    for (const auto* leg : {&rw.final_region, &rw.base_region, &rw.downwind_region}) {
      if (!has_region(*leg)) {
        throw InvalidArgument("runway '" + rw.name + "' references unknown region '" + *leg + "'");
      }
    }
  }
  if (goal_set_.empty()) throw InvalidArgument("goal set must not be empty");
  for (const auto& g : goal_set_) {
    const auto it = std::find_if(regions_.begin(), regions_.end(), [&](const Region& r) { return r.name == g; });
    if (it == regions_.end()) throw InvalidArgument("goal '" + g + "' has no region");
    goal_region_.push_back(static_cast<std::size_t>(it - regions_.begin()));
    goal_is_runway_.push_back(is_runway(g));
  }
  for (std::size_t i = 0; i < goal_set_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (goal_set_[i] == goal_set_[j]) throw InvalidArgument("duplicate goal '" + goal_set_[i] + "'");
      if (regions_[goal_region_[i]].box.intersects(regions_[goal_region_[j]].box)) {
        throw InvalidArgument("goal regions '" + goal_set_[i] + "' and '" + goal_set_[j] + "' overlap");
      }
    }
  }
}

const Region& Airspace::region(const std::string& name) const {
  for (const auto& r : regions_) {
    if (r.name == name) return r;
  }
  throw InvalidArgument("unknown region '" + name + "'");
}

bool Airspace::has_region(const std::string& name) const {
  return std::any_of(regions_.begin(), regions_.end(), [&](const Region& r) { return r.name == name; });
}

std::size_t Airspace::goal_index(const std::string& name) const {
  for (std::size_t i = 0; i < goal_set_.size(); ++i) {
    if (goal_set_[i] == name) return i;
  }
  throw InvalidArgument("'" + name + "' is not in the goal set");
}

bool Airspace::is_runway(const std::string& name) const {
  return std::any_of(runways_.begin(), runways_.end(), [&](const Runway& r) { return r.name == name; });
}

const Runway& Airspace::runway(const std::string& name) const {
  for (const auto& r : runways_) {
    if (r.name == name) return r;
  }
  throw InvalidArgument("unknown runway '" + name + "'");
}

bool Airspace::in_goal(std::size_t goal, const AircraftState& s) const {
  if (!regions_[goal_region_.at(goal)].box.contains(s)) return false;
  return !goal_is_runway_[goal] || s.z <= landing_max_altitude_;
}

std::optional<GoalEntry> Airspace::first_goal_entry(std::span<const AircraftState> samples) const {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    for (std::size_t g = 0; g < goal_set_.size(); ++g) {
      if (in_goal(g, samples[i]) && !in_goal(g, samples[i - 1])) return GoalEntry{g, i};
    }
  }
  return std::nullopt;
}

double Airspace::half_diagonal() const {
  const double dx = bounds_.x_max - bounds_.x_min;
  const double dy = bounds_.y_max - bounds_.y_min;
  const double dz = bounds_.z_max - bounds_.z_min;
  return 0.5 * std::sqrt(dx * dx + dy * dy + dz * dz);
}

Airspace default_airspace() {
  constexpr double kMidfield = 750.0;
  constexpr double kGoalRadius = 6000.0;
  constexpr double kGoalHalf = 1000.0;
  const Box bounds{-8500.0, 10000.0, -8000.0, 8000.0, -500.0, 2500.0};

  std::vector<Region> regions;
  const char* compass[] = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
  // Bearings counter-clockwise from east.
  const double bearing_deg[] = {90.0, 45.0, 0.0, -45.0, -90.0, -135.0, 180.0, 135.0};
  for (std::size_t i = 0; i < 8; ++i) {
    const double b = bearing_deg[i] * std::numbers::pi / 180.0;
    const double cx = std::round(kMidfield + kGoalRadius * std::cos(b));
    const double cy = std::round(kGoalRadius * std::sin(b));
    regions.push_back({compass[i], Box{cx - kGoalHalf, cx + kGoalHalf, cy - kGoalHalf, cy + kGoalHalf, -200.0, 1500.0}});
  }
  // Touchdown boxes either side of midfield.
  regions.push_back({"R08", Box{-600.0, 740.0, -250.0, 250.0, -300.0, 150.0}});
  regions.push_back({"R26", Box{760.0, 2100.0, -250.0, 250.0, -300.0, 150.0}});
  // Left-hand pattern for R08 (landing east) lies north of the runway.
  regions.push_back({"downwind_R08", Box{-2000.0, 2500.0, 1000.0, 2200.0, 150.0, 500.0}});
  regions.push_back({"base_R08", Box{-3500.0, -1500.0, 300.0, 2200.0, 50.0, 450.0}});
  regions.push_back({"final_R08", Box{-4000.0, 800.0, -350.0, 350.0, -300.0, 400.0}});
  // R26 (landing west) mirrors it south of the runway.
  regions.push_back({"downwind_R26", Box{-1000.0, 3500.0, -2200.0, -1000.0, 150.0, 500.0}});
  regions.push_back({"base_R26", Box{3000.0, 5000.0, -2200.0, -300.0, 50.0, 450.0}});
  regions.push_back({"final_R26", Box{700.0, 5500.0, -350.0, 350.0, -300.0, 400.0}});

  std::vector<Runway> runways{
      {"R08", 0.0, "final_R08", "base_R08", "downwind_R08"},
      {"R26", 180.0, "final_R26", "base_R26", "downwind_R26"},
  };
  std::vector<std::string> goals{"N", "NE", "E", "SE", "S", "SW", "W", "NW", "R08", "R26"};
  return Airspace(bounds, std::move(regions), std::move(runways), std::move(goals), 1000.0 * dynamics::units::kFoot);
}

namespace {

nlohmann::json box_json(const Box& b) {
  return {{"x", {b.x_min, b.x_max}}, {"y", {b.y_min, b.y_max}}, {"z", {b.z_min, b.z_max}}};
}

Box box_from(const nlohmann::json& j) {
  const auto x = j.at("x").get<std::array<double, 2>>();
  const auto y = j.at("y").get<std::array<double, 2>>();
  const auto z = j.at("z").get<std::array<double, 2>>();
  return Box{x[0], x[1], y[0], y[1], z[0], z[1]};
}

}  // namespace

std::string airspace_to_json(const Airspace& a) {
  nlohmann::json j;
  j["bounding_box"] = box_json(a.bounds());
  j["regions"] = nlohmann::json::array();
  for (const auto& r : a.regions()) j["regions"].push_back({{"name", r.name}, {"box", box_json(r.box)}});
  j["runways"] = nlohmann::json::array();
  for (const auto& r : a.runways()) {
    j["runways"].push_back({{"name", r.name},
                            {"heading_deg", r.heading_deg},
                            {"final", r.final_region},
                            {"base", r.base_region},
                            {"downwind", r.downwind_region}});
  }
  j["goal_set"] = a.goal_set();
  j["pattern_altitude_m"] = a.pattern_altitude();
  j["landing_max_altitude_m"] = a.landing_max_altitude();
  return j.dump(2);
}

Airspace airspace_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<Region> regions;
    for (const auto& r : j.at("regions")) regions.push_back({r.at("name").get<std::string>(), box_from(r.at("box"))});
    std::vector<Runway> runways;
    for (const auto& r : j.at("runways")) {
      runways.push_back({r.at("name").get<std::string>(), r.at("heading_deg").get<double>(),
                         r.at("final").get<std::string>(), r.at("base").get<std::string>(),
                         r.at("downwind").get<std::string>()});
    }
    return Airspace(box_from(j.at("bounding_box")), std::move(regions), std::move(runways),
                    j.at("goal_set").get<std::vector<std::string>>(), j.at("pattern_altitude_m").get<double>(),
                    j.value("landing_max_altitude_m", 30.0));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed scenario JSON: ") + e.what());
  }
}

Airspace load_airspace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return airspace_from_json(ss.str());
}

}  // namespace stlplan::scenario
