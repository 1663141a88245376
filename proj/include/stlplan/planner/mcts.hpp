#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stlplan/common/random.hpp"
#include "stlplan/dynamics/kinematics.hpp"
#include "stlplan/policy/costmap.hpp"
#include "stlplan/policy/prior.hpp"
#include "stlplan/scenario/airspace.hpp"
#include "stlplan/scenario/specs.hpp"
#include "stlplan/stl/formula.hpp"

namespace stlplan::planner {

using dynamics::AircraftState;

struct EdgeStats {
  double Q = 0.0;
  std::uint64_t N = 0;
  double P = 0.0;
  double H = 0.0;
};

/// Q + c1 P sqrt(n_parent) / (1 + N) + c2 H
double uct_score(const EdgeStats& e, std::uint64_t n_parent, double c1, double c2);

enum class BackupRule {
  Literal,  // N += 1, then Q <- (N Q + v) / (1 + N)
  Mean,     // Q <- Q + (v - Q) / N after the increment
};

const char* to_string(BackupRule rule);
BackupRule backup_rule_from_string(const std::string& name);

/// Applies one backup of (v, h) to the edge.
void backup(EdgeStats& e, double v, double h, BackupRule rule);

struct Budget {
  std::uint64_t simulations = 0;  // used when > 0
  double milliseconds = 0.0;      // otherwise
};

struct PlannerConfig {
  double c1 = 1.0;
  double c2 = 1.0;
  Budget budget{200, 0.0};
  std::size_t max_steps = 40;
  std::size_t max_depth = 40;
  double rho_scale = 0.0;  // 0 picks the airspace half-diagonal
  std::uint64_t rng_seed = 0;
  BackupRule backup = BackupRule::Literal;
  bool record_tree = false;

  /// Throws InvalidArgument on c1 <= 0, an empty budget, rho_scale < 0 or
  /// zero step/depth caps.
  void validate() const;
};

/// Everything a simulation reads besides the tree.
struct PlanningContext {
  const scenario::Airspace& airspace;
  const dynamics::PrimitiveLibrary& library;
  const policy::PolicyPrior& prior;
  const policy::CostmapSet& values;
};

struct TreeNode {
  AircraftState state;
  std::size_t depth = 0;
  std::size_t parent = 0;        // index in the tree; the root is its own parent
  std::size_t parent_action = 0;
  bool expanded = false;
  bool terminal = false;
  double terminal_value = 0.0;
  double value = 0.0;  // v(s)
  double h_stl = 0.0;  // normalized robustness of the trace ending here
  std::vector<double> channels;  // per segment sample after the parent's state, row-major
  std::vector<EdgeStats> edges;
  std::vector<std::size_t> children;  // kNoChild when unexpanded

  static constexpr std::size_t kNoChild = static_cast<std::size_t>(-1);

  std::uint64_t visits() const;
};

/// One planning tree rooted at the current executed state. `history` holds
/// every executed segment sample, ending with the root state; the STL trace
/// of a node is the history followed by the segment samples down to it.
class SearchTree {
 public:
  SearchTree(const PlanningContext& ctx, const PlannerConfig& cfg, std::size_t goal, const stl::Formula& spec,
             std::vector<AircraftState> history);

  /// One recursive descent from the root. Returns the backed-up (v, h).
  std::pair<double, double> simulate();
  /// Runs simulations until the budget is spent; returns how many ran.
  std::uint64_t run(const Budget& budget);

  const TreeNode& root() const { return nodes_.front(); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  double rho_scale() const { return rho_scale_; }

 private:
  std::pair<double, double> simulate(std::size_t index);
  void expand(TreeNode& node);
  std::size_t make_child(std::size_t parent, std::size_t action);
  double normalized_robustness(std::size_t index) const;

  const PlanningContext& ctx_;
  const PlannerConfig& cfg_;
  std::size_t goal_;
  stl::Formula spec_;
  scenario::ChannelSet channel_set_;
  std::size_t history_size_;
  std::vector<double> history_channels_;
  double rho_scale_;
  std::vector<TreeNode> nodes_;
};

/// Samples an action with probability N(root, a) / N(root). Throws
/// InvalidArgument when the root has no visits.
std::size_t select_action(const TreeNode& root, Rng& rng);

struct TreeEdge {
  std::size_t step = 0;
  double parent_x = 0.0, parent_y = 0.0;
  double child_x = 0.0, child_y = 0.0;
  std::uint64_t N = 0;
};

struct EpisodeResult {
  std::vector<AircraftState> steps;    // executed states at primitive granularity
  std::vector<std::size_t> actions;
  std::vector<AircraftState> samples;  // every executed segment sample
  std::vector<double> sample_times;
  bool reached_goal = false;
  double stl_score = 0.0;
  double final_robustness = 0.0;  // raw robustness of the spec on the samples
  std::uint64_t simulations = 0;
  std::vector<TreeEdge> tree;  // filled when record_tree is set

  std::size_t step_count() const { return actions.size(); }
};

/// Score of a flown trajectory against the spec: the staged landing score
/// when `spec` is the goal's landing spec, otherwise 1 when the robustness
/// is non-negative and 0 when it is not.
struct SpecScore {
  double score = 0.0;
  double robustness = 0.0;
};
SpecScore score_trajectory(const scenario::Airspace& airspace, std::size_t goal, const stl::Formula& spec,
                           std::span<const AircraftState> samples, std::span<const double> times);

/// Plans and flies one episode: a fresh tree per executed step, until the
/// goal region is entered or max_steps primitives have been flown.
EpisodeResult plan_episode(const AircraftState& start, const policy::GoalVector& goal, const stl::Formula& spec,
                           const PlannerConfig& cfg, const PlanningContext& ctx);

}  // namespace stlplan::planner
