#include "stlplan/policy/costmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "stlplan/common/error.hpp"

namespace stlplan::policy {

void GridSpec::validate() const {
  for (std::size_t a = 0; a < 3; ++a) {
    if (!std::isfinite(origin[a])) throw InvalidArgument("grid origin must be finite");
    if (!(resolution[a] > 0.0) || !std::isfinite(resolution[a])) {
      throw InvalidArgument("grid resolution must be positive on every axis");
    }
    if (dims[a] == 0) throw InvalidArgument("grid dims must be at least 1 on every axis");
  }
}

std::optional<std::size_t> GridSpec::cell_of(double x, double y, double z) const {
  const double p[3] = {x, y, z};
  std::size_t idx[3];
  for (std::size_t a = 0; a < 3; ++a) {
    const double f = std::floor((p[a] - origin[a]) / resolution[a]);
    if (!(f >= 0.0) || f >= static_cast<double>(dims[a])) return std::nullopt;
    idx[a] = static_cast<std::size_t>(f);
  }
  return flat(idx[0], idx[1], idx[2]);
}

Costmap::Costmap(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.cell_count()) {
    throw InvalidArgument("costmap has " + std::to_string(values_.size()) + " values for " +
                          std::to_string(grid_.cell_count()) + " cells");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("costmap values must lie in [0, 1]");
  }
}

double Costmap::lookup(double x, double y, double z) const {
  const auto cell = grid_.cell_of(x, y, z);
  return cell ? values_[*cell] : 0.0;
}

Costmap build_costmap_from_traces(std::span<const std::vector<AircraftState>> traces, const GridSpec& grid) {
  grid.validate();
  if (traces.empty()) throw InvalidArgument("costmap needs at least one trajectory");
  std::vector<double> counts(grid.cell_count(), 0.0);
  for (const auto& trace : traces) {
    for (const auto& s : trace) {
      if (const auto cell = grid.cell_of(s.x, s.y, s.z)) counts[*cell] += 1.0;
    }
  }
  const double peak = *std::max_element(counts.begin(), counts.end());
  if (peak > 0.0) {
    for (auto& c : counts) c /= peak;
  }
  return Costmap(grid, std::move(counts));
}

namespace {

nlohmann::json grid_json(const GridSpec& g) {
  return {{"origin", g.origin}, {"resolution", g.resolution}, {"dims", g.dims}};
}

GridSpec grid_from(const nlohmann::json& j) {
  GridSpec g;
  g.origin = j.at("origin").get<std::array<double, 3>>();
  g.resolution = j.at("resolution").get<std::array<double, 3>>();
  g.dims = j.at("dims").get<std::array<std::size_t, 3>>();
  g.validate();
  return g;
}

}  // namespace

GridSpec grid_from_json(const std::string& text) {
  try {
    return grid_from(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed grid JSON: ") + e.what());
  }
}

std::string costmap_to_json(const Costmap& c) {
  nlohmann::json j = grid_json(c.grid());
  j["values"] = c.values();
  return j.dump();
}

Costmap costmap_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return Costmap(grid_from(j), j.at("values").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed costmap JSON: ") + e.what());
  }
}

Costmap load_costmap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open costmap '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return costmap_from_json(ss.str());
}

void save_costmap(const Costmap& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write costmap '" + path + "'");
  out << costmap_to_json(c) << '\n';
  if (!out) throw IoError("failed writing costmap '" + path + "'");
}

const Costmap& CostmapSet::for_goal(std::size_t goal) const {
  if (const auto it = per_goal_.find(goal); it != per_goal_.end()) return it->second;
  if (shared_) return *shared_;
  throw InvalidArgument("no costmap available for goal index " + std::to_string(goal));
}

}  // namespace stlplan::policy
