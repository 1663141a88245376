#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stlplan/dynamics/kinematics.hpp"

namespace stlplan::policy {

using dynamics::AircraftState;

/// Axis-aligned voxel grid: cell (i,j,k) spans origin + [i,i+1) * resolution
/// along each axis.
struct GridSpec {
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  std::array<double, 3> resolution{1.0, 1.0, 1.0};
  std::array<std::size_t, 3> dims{1, 1, 1};

  /// Throws InvalidArgument on non-positive resolution, zero dims or
  /// non-finite origin.
  void validate() const;
  std::size_t cell_count() const { return dims[0] * dims[1] * dims[2]; }
  /// Flat row-major index with x fastest, or nullopt outside the grid.
  std::optional<std::size_t> cell_of(double x, double y, double z) const;
  std::size_t flat(std::size_t i, std::size_t j, std::size_t k) const { return i + dims[0] * (j + dims[1] * k); }

  bool operator==(const GridSpec&) const = default;
};

/// Normalized visit-frequency grid used as the state value v(s).
class Costmap {
 public:
  Costmap(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  /// Value of the cell containing the point (floor convention); 0 outside.
  double lookup(double x, double y, double z) const;
  double lookup(const AircraftState& s) const { return lookup(s.x, s.y, s.z); }

  bool operator==(const Costmap&) const = default;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Counts samples per cell over every trajectory and divides by the largest
/// count. Samples outside the grid are ignored.
Costmap build_costmap_from_traces(std::span<const std::vector<AircraftState>> traces, const GridSpec& grid);

/// JSON {origin: [x,y,z], resolution: [dx,dy,dz], dims: [nx,ny,nz], values: [...]}.
std::string costmap_to_json(const Costmap& c);
Costmap costmap_from_json(const std::string& text);
Costmap load_costmap(const std::string& path);
void save_costmap(const Costmap& c, const std::string& path);
GridSpec grid_from_json(const std::string& text);

/// One value map per goal index with an optional shared fallback.
class CostmapSet {
 public:
  CostmapSet() = default;
  explicit CostmapSet(Costmap shared) : shared_(std::move(shared)) {}

  void set_goal_map(std::size_t goal, Costmap map) { per_goal_.insert_or_assign(goal, std::move(map)); }
  void set_shared(Costmap map) { shared_ = std::move(map); }

  /// The goal's own map, else the shared one. Throws if neither exists.
  const Costmap& for_goal(std::size_t goal) const;
  double value(std::size_t goal, const AircraftState& s) const { return for_goal(goal).lookup(s); }
  bool empty() const { return !shared_ && per_goal_.empty(); }

 private:
  std::optional<Costmap> shared_;
  std::map<std::size_t, Costmap> per_goal_;
};

}  // namespace stlplan::policy
