#include "stlplan/policy/prior.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <sstream>

#include "stlplan/common/error.hpp"

namespace stlplan::policy {

GoalVector::GoalVector(std::size_t size, std::size_t hot) : size_(size), hot_(hot) {
  if (hot >= size) throw InvalidArgument("goal index " + std::to_string(hot) + " outside goal set of " +
                                         std::to_string(size));
}

std::vector<double> GoalVector::values() const {
  std::vector<double> v(size_, 0.0);
  v[hot_] = 1.0;
  return v;
}

std::vector<double> softmax(std::span<const double> scores, double temperature) {
  if (!(temperature > 0.0)) throw InvalidArgument("softmax temperature must be positive");
  if (scores.empty()) return {};
  const double peak = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp((scores[i] - peak) / temperature);
    total += out[i];
  }
  for (auto& p : out) p /= total;
  return out;
}

UniformPrior::UniformPrior(std::size_t actions) : actions_(actions) {
  if (actions == 0) throw InvalidArgument("prior needs at least one action");
}

std::vector<double> UniformPrior::distribution(std::span<const AircraftState>, const GoalVector&) const {
  return std::vector<double>(actions_, 1.0 / static_cast<double>(actions_));
}

CostmapPrior::CostmapPrior(CostmapSet maps, const PrimitiveLibrary& library, double temperature)
    : maps_(std::move(maps)), temperature_(temperature) {
  if (!(temperature > 0.0)) throw InvalidArgument("costmap prior temperature must be positive");
  if (maps_.empty()) throw InvalidArgument("costmap prior needs at least one costmap");
  const AircraftState origin{};
  offsets_.reserve(library.size());
  for (const auto& p : library.primitives()) {
    const auto seg = dynamics::integrate(origin, p, library.horizon(), library.sample_period());
    std::vector<std::array<double, 3>> rel;
    rel.reserve(seg.states.size());
    for (const auto& s : seg.states) rel.push_back({s.x, s.y, s.z});
    offsets_.push_back(std::move(rel));
  }
}

std::vector<double> CostmapPrior::scores(const AircraftState& state, std::size_t goal) const {
  const Costmap& map = maps_.for_goal(goal);
  const double c = std::cos(state.chi);
  const double s = std::sin(state.chi);
  std::vector<double> out(offsets_.size());
  for (std::size_t a = 0; a < offsets_.size(); ++a) {
    double sum = 0.0;
    for (const auto& [fwd, left, up] : offsets_[a]) {
      sum += map.lookup(state.x + c * fwd - s * left, state.y + s * fwd + c * left, state.z + up);
    }
    out[a] = sum / static_cast<double>(offsets_[a].size());
  }
  return out;
}

std::vector<double> CostmapPrior::distribution(std::span<const AircraftState> history,
                                               const GoalVector& goal) const {
  if (history.empty()) throw InvalidArgument("prior needs a non-empty history");
  const auto sc = scores(history.back(), goal.index());
  return softmax(sc, temperature_);
}

std::string replay_key(const AircraftState& s, std::size_t goal, const ReplayQuantum& q) {
  const double chi_q = q.chi_deg * std::numbers::pi / 180.0;
  const auto ix = static_cast<long long>(std::floor(s.x / q.xy_m));
  const auto iy = static_cast<long long>(std::floor(s.y / q.xy_m));
  const auto iz = static_cast<long long>(std::floor(s.z / q.z_m));
  const auto ichi = static_cast<long long>(std::floor((dynamics::wrap_angle(s.chi) + std::numbers::pi) / chi_q));
  return std::to_string(ix) + "," + std::to_string(iy) + "," + std::to_string(iz) + "," + std::to_string(ichi) +
         "," + std::to_string(goal);
}

ReplayPrior::ReplayPrior(std::size_t actions, ReplayQuantum quantum,
                         std::map<std::string, std::vector<double>> entries)
    : actions_(actions), quantum_(quantum), entries_(std::move(entries)) {
  if (actions == 0) throw InvalidArgument("prior needs at least one action");
  if (!(quantum_.xy_m > 0.0) || !(quantum_.z_m > 0.0) || !(quantum_.chi_deg > 0.0)) {
    throw InvalidArgument("replay quantum must be positive");
  }
  for (auto& [key, probs] : entries_) {
    if (probs.size() != actions_) {
      throw InvalidArgument("replay entry '" + key + "' has " + std::to_string(probs.size()) +
                            " probabilities, library has " + std::to_string(actions_));
    }
    double total = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidArgument("replay entry '" + key + "' has a negative value");
      total += p;
    }
    if (!(total > 0.0)) throw InvalidArgument("replay entry '" + key + "' sums to zero");
    for (auto& p : probs) p /= total;
  }
}

std::vector<double> ReplayPrior::distribution(std::span<const AircraftState> history, const GoalVector& goal) const {
  if (history.empty()) throw InvalidArgument("prior needs a non-empty history");
  const auto it = entries_.find(replay_key(history.back(), goal.index(), quantum_));
  if (it == entries_.end()) return std::vector<double>(actions_, 1.0 / static_cast<double>(actions_));
  return it->second;
}

ReplayPrior replay_prior_from_json(const std::string& text, std::size_t actions) {
  try {
    const auto j = nlohmann::json::parse(text);
    ReplayQuantum q;
    if (j.contains("quantum")) {
      const auto& jq = j.at("quantum");
      q.xy_m = jq.value("xy_m", q.xy_m);
      q.z_m = jq.value("z_m", q.z_m);
      q.chi_deg = jq.value("chi_deg", q.chi_deg);
    }
    auto entries = j.at("entries").get<std::map<std::string, std::vector<double>>>();
    return ReplayPrior(actions, q, std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed replay prior JSON: ") + e.what());
  }
}

ReplayPrior load_replay_prior(const std::string& path, std::size_t actions) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open replay prior '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return replay_prior_from_json(ss.str(), actions);
}

std::unique_ptr<PolicyPrior> uniform_prior(const PrimitiveLibrary& library) {
  return std::make_unique<UniformPrior>(library.size());
}

std::unique_ptr<PolicyPrior> costmap_prior(const Costmap& costmap, const PrimitiveLibrary& library,
                                           double temperature) {
  return std::make_unique<CostmapPrior>(CostmapSet(costmap), library, temperature);
}

PrimitiveMatch match_primitive(std::span<const AircraftState> target, const PrimitiveLibrary& library,
                               const AircraftState& start, const std::array<double, 3>& weights) {
  if (target.size() != library.samples_per_segment()) {
    throw InvalidArgument("target has " + std::to_string(target.size()) + " points, segments have " +
                          std::to_string(library.samples_per_segment()));
  }
  PrimitiveMatch best{0, std::numeric_limits<double>::infinity()};
  for (const auto& p : library.primitives()) {
    const auto seg = dynamics::integrate(start, p, library.horizon(), library.sample_period());
    double d = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
      const double dx = target[i].x - seg.states[i].x;
      const double dy = target[i].y - seg.states[i].y;
      const double dz = target[i].z - seg.states[i].z;
      d += weights[0] * dx * dx + weights[1] * dy * dy + weights[2] * dz * dz;
    }
    if (d < best.distance) best = PrimitiveMatch{p.id, d};
  }
  return best;
}

}  // namespace stlplan::policy
