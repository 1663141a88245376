#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stlplan/scenario/airspace.hpp"
#include "stlplan/stl/formula.hpp"
#include "stlplan/stl/trace.hpp"

namespace stlplan::scenario {

enum class SpecKind { Landing, Takeoff };

const char* to_string(SpecKind kind);

/// Channel carrying the signed distance to a region: `d_<region>`.
std::string distance_channel(const std::string& region);
/// Signed distance to the episode's goal region.
inline constexpr const char* kGoalChannel = "in_goal";

/// F ((d_downwind > 0) & F ((d_base > 0) & F G (d_final > 0)))
stl::Formula build_landing_spec(const Airspace& airspace, const std::string& runway);

/// Nested eventually-prefixes of the landing spec: downwind reached, then
/// base after it, then the full specification.
std::array<stl::Formula, 3> landing_stage_specs(const Airspace& airspace, const std::string& runway);

/// F (d_goal > 0)
stl::Formula build_takeoff_spec(const Airspace& airspace, const std::string& goal);

/// Maps a specification's signal names onto per-state values. Accepts
/// `d_<region>` for any airspace region and `in_goal`.
class ChannelSet {
 public:
  ChannelSet(const Airspace& airspace, std::size_t goal, const std::vector<std::string>& names);
  /// Channels for every signal the formula references.
  static ChannelSet for_formula(const Airspace& airspace, std::size_t goal, const stl::Formula& f);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  void evaluate(const AircraftState& s, std::span<double> out) const;
  std::vector<double> evaluate(const AircraftState& s) const;

  /// Builds a trace from rows produced by evaluate(); row i is stamped
  /// i * period.
  stl::Trace trace_from_rows(std::span<const std::vector<double>* const> rows, double period) const;

 private:
  std::vector<std::string> names_;
  std::vector<Box> boxes_;
};

/// Trace with timestamps i * step_seconds and one `d_<region>` channel per
/// listed region plus `in_goal`.
stl::Trace derive_channels(const Airspace& airspace, std::span<const AircraftState> states, std::size_t goal,
                           std::span<const std::string> regions, double step_seconds);

/// As above with explicit timestamps (must match states in length).
stl::Trace derive_channels(const Airspace& airspace, std::span<const AircraftState> states, std::size_t goal,
                           std::span<const std::string> regions, std::span<const double> timestamps);

}  // namespace stlplan::scenario
