#include "stlplan/scenario/specs.hpp"

#include "stlplan/common/error.hpp"

namespace stlplan::scenario {

using stl::Comparison;
using stl::Formula;

const char* to_string(SpecKind kind) { return kind == SpecKind::Landing ? "landing" : "takeoff"; }

std::string distance_channel(const std::string& region) { return "d_" + region; }

namespace {

Formula inside(const Airspace& airspace, const std::string& region) {
  airspace.region(region);
  return Formula::predicate(distance_channel(region), Comparison::Greater, 0.0);
}

}  // namespace

Formula build_landing_spec(const Airspace& airspace, const std::string& runway) {
  return landing_stage_specs(airspace, runway)[2];
}

std::array<Formula, 3> landing_stage_specs(const Airspace& airspace, const std::string& runway) {
  const Runway& rw = airspace.runway(runway);
  const Formula downwind = inside(airspace, rw.downwind_region);
  const Formula base = inside(airspace, rw.base_region);
  const Formula final_leg = inside(airspace, rw.final_region);
  return {
      Formula::eventually(downwind),
      Formula::eventually(Formula::conjunction(downwind, Formula::eventually(base))),
      Formula::eventually(
          Formula::conjunction(downwind, Formula::eventually(Formula::conjunction(
                                             base, Formula::eventually(Formula::always(final_leg)))))),
  };
}

Formula build_takeoff_spec(const Airspace& airspace, const std::string& goal) {
  airspace.goal_index(goal);
  return Formula::eventually(inside(airspace, goal));
}

ChannelSet::ChannelSet(const Airspace& airspace, std::size_t goal, const std::vector<std::string>& names)
    : names_(names) {
  const Box& goal_box = airspace.region(airspace.goal_name(goal)).box;
  for (const auto& n : names_) {
    if (n == kGoalChannel) {
      boxes_.push_back(goal_box);
    } else if (n.rfind("d_", 0) == 0 && airspace.has_region(n.substr(2))) {
      boxes_.push_back(airspace.region(n.substr(2)).box);
    } else {
      throw InvalidArgument("signal '" + n + "' cannot be derived from aircraft states");
    }
  }
}

ChannelSet ChannelSet::for_formula(const Airspace& airspace, std::size_t goal, const Formula& f) {
  const auto sig = f.signals();
  return ChannelSet(airspace, goal, std::vector<std::string>(sig.begin(), sig.end()));
}

void ChannelSet::evaluate(const AircraftState& s, std::span<double> out) const {
  for (std::size_t i = 0; i < boxes_.size(); ++i) out[i] = signed_distance(boxes_[i], s);
}

std::vector<double> ChannelSet::evaluate(const AircraftState& s) const {
  std::vector<double> out(boxes_.size());
  evaluate(s, out);
  return out;
}

stl::Trace ChannelSet::trace_from_rows(std::span<const std::vector<double>* const> rows, double period) const {
  std::vector<double> ts(rows.size());
  std::vector<stl::Trace::Channel> channels;
  channels.reserve(names_.size());
  for (const auto& n : names_) channels.emplace_back(n, std::vector<double>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ts[i] = static_cast<double>(i) * period;
    for (std::size_t c = 0; c < names_.size(); ++c) channels[c].second[i] = (*rows[i])[c];
  }
  return stl::Trace(std::move(ts), std::move(channels));
}

stl::Trace derive_channels(const Airspace& airspace, std::span<const AircraftState> states, std::size_t goal,
                           std::span<const std::string> regions, std::span<const double> timestamps) {
  if (timestamps.size() != states.size()) throw InvalidArgument("derive_channels: timestamps/states size mismatch");
  std::vector<std::string> names;
  for (const auto& r : regions) names.push_back(distance_channel(r));
  names.emplace_back(kGoalChannel);
  const ChannelSet set(airspace, goal, names);
  std::vector<stl::Trace::Channel> channels;
  for (const auto& n : names) channels.emplace_back(n, std::vector<double>(states.size()));
  std::vector<double> row(names.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    set.evaluate(states[i], row);
    for (std::size_t c = 0; c < names.size(); ++c) channels[c].second[i] = row[c];
  }
  return stl::Trace(std::vector<double>(timestamps.begin(), timestamps.end()), std::move(channels));
}

stl::Trace derive_channels(const Airspace& airspace, std::span<const AircraftState> states, std::size_t goal,
                           std::span<const std::string> regions, double step_seconds) {
  std::vector<double> ts(states.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<double>(i) * step_seconds;
  return derive_channels(airspace, states, goal, regions, ts);
}

}  // namespace stlplan::scenario
