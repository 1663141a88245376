#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "stlplan/dynamics/kinematics.hpp"
#include "stlplan/policy/costmap.hpp"

namespace stlplan::policy {

using dynamics::PrimitiveLibrary;

/// One-hot goal selector over the configured goal set.
class GoalVector {
 public:
  GoalVector(std::size_t size, std::size_t hot);

  std::size_t size() const { return size_; }
  std::size_t index() const { return hot_; }
  double operator[](std::size_t i) const { return i == hot_ ? 1.0 : 0.0; }
  std::vector<double> values() const;

  bool operator==(const GoalVector&) const = default;

 private:
  std::size_t size_;
  std::size_t hot_;
};

/// Prior action distribution P(s, .) conditioned on the flown history (last
/// element is the current state) and the goal. This is the seam where a
/// learned model plugs in.
class PolicyPrior {
 public:
  virtual ~PolicyPrior() = default;

  virtual std::size_t action_count() const = 0;
  /// Non-negative, sums to 1, length action_count(). `history` is non-empty.
  virtual std::vector<double> distribution(std::span<const AircraftState> history, const GoalVector& goal) const = 0;
};

/// exp(score / temperature), normalized. Shifted by the max score, so the
/// temperature -> 0 limit concentrates on the best score.
std::vector<double> softmax(std::span<const double> scores, double temperature);

class UniformPrior final : public PolicyPrior {
 public:
  explicit UniformPrior(std::size_t actions);

  std::size_t action_count() const override { return actions_; }
  std::vector<double> distribution(std::span<const AircraftState> history, const GoalVector& goal) const override;

 private:
  std::size_t actions_;
};

/// Scores each primitive by the mean costmap value over the samples of its
/// segment from the current state, then applies softmax(score / temperature).
/// The map is picked per goal from the CostmapSet.
class CostmapPrior final : public PolicyPrior {
 public:
  CostmapPrior(CostmapSet maps, const PrimitiveLibrary& library, double temperature);

  std::size_t action_count() const override { return offsets_.size(); }
  std::vector<double> distribution(std::span<const AircraftState> history, const GoalVector& goal) const override;

  /// Mean costmap value along every primitive's segment from `state`.
  std::vector<double> scores(const AircraftState& state, std::size_t goal) const;
  double temperature() const { return temperature_; }

 private:
  CostmapSet maps_;
  double temperature_;
  // Per primitive, sample offsets (forward, left, up) from a start at the
  // origin heading east. Segments elsewhere are rigid transforms of these.
  std::vector<std::vector<std::array<double, 3>>> offsets_;
};

/// Discretization used to key replayed distributions.
struct ReplayQuantum {
  double xy_m = 500.0;
  double z_m = 100.0;
  double chi_deg = 45.0;
};

std::string replay_key(const AircraftState& s, std::size_t goal, const ReplayQuantum& q);

/// File-backed table from quantized (state, goal) to a distribution, so tests
/// and experiments can inject arbitrary priors. Unknown keys fall back to
/// uniform.
///
/// JSON: {"quantum": {"xy_m", "z_m", "chi_deg"}, "entries": {"ix,iy,iz,ichi,goal": [p0, ...]}}
class ReplayPrior final : public PolicyPrior {
 public:
  ReplayPrior(std::size_t actions, ReplayQuantum quantum, std::map<std::string, std::vector<double>> entries);

  std::size_t action_count() const override { return actions_; }
  std::vector<double> distribution(std::span<const AircraftState> history, const GoalVector& goal) const override;
  const ReplayQuantum& quantum() const { return quantum_; }

 private:
  std::size_t actions_;
  ReplayQuantum quantum_;
  std::map<std::string, std::vector<double>> entries_;
};

ReplayPrior replay_prior_from_json(const std::string& text, std::size_t actions);
ReplayPrior load_replay_prior(const std::string& path, std::size_t actions);

std::unique_ptr<PolicyPrior> uniform_prior(const PrimitiveLibrary& library);
std::unique_ptr<PolicyPrior> costmap_prior(const Costmap& costmap, const PrimitiveLibrary& library,
                                           double temperature);

struct PrimitiveMatch {
  std::size_t id = 0;
  double distance = 0.0;
};

/// Library primitive whose segment from `start` is nearest to `target` under
/// sum_i wx dx_i^2 + wy dy_i^2 + wz dz_i^2. Ties go to the lowest id.
PrimitiveMatch match_primitive(std::span<const AircraftState> target, const PrimitiveLibrary& library,
                               const AircraftState& start, const std::array<double, 3>& weights);

}  // namespace stlplan::policy
