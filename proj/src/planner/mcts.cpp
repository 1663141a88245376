#include "stlplan/planner/mcts.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "stlplan/common/error.hpp"
#include "stlplan/stl/robustness.hpp"

namespace stlplan::planner {

double uct_score(const EdgeStats& e, std::uint64_t n_parent, double c1, double c2) {
  return e.Q + c1 * e.P * std::sqrt(static_cast<double>(n_parent)) / (1.0 + static_cast<double>(e.N)) + c2 * e.H;
}

const char* to_string(BackupRule rule) { return rule == BackupRule::Literal ? "literal" : "mean"; }

BackupRule backup_rule_from_string(const std::string& name) {
  if (name == "literal") return BackupRule::Literal;
  if (name == "mean") return BackupRule::Mean;
  throw InvalidArgument("unknown backup rule '" + name + "' (expected literal or mean)");
}

void backup(EdgeStats& e, double v, double h, BackupRule rule) {
  e.N += 1;
  const double n = static_cast<double>(e.N);
  if (rule == BackupRule::Literal) {
    e.Q = (n * e.Q + v) / (1.0 + n);
    e.H = (n * e.H + h) / (1.0 + n);
  } else {
    e.Q += (v - e.Q) / n;
    e.H += (h - e.H) / n;
  }
}

void PlannerConfig::validate() const {
  if (!(c1 > 0.0) || !std::isfinite(c1)) throw InvalidArgument("c1 must be positive");
  if (!std::isfinite(c2)) throw InvalidArgument("c2 must be finite");
  if (budget.simulations == 0 && !(budget.milliseconds > 0.0)) {
    throw InvalidArgument("planning budget must be a positive simulation count or duration");
  }
  if (!(rho_scale >= 0.0) || !std::isfinite(rho_scale)) throw InvalidArgument("rho_scale must be >= 0");
  if (max_steps == 0) throw InvalidArgument("max_steps must be positive");
  if (max_depth == 0) throw InvalidArgument("max_depth must be positive");
}

std::uint64_t TreeNode::visits() const {
  std::uint64_t n = 0;
  for (const auto& e : edges) n += e.N;
  return n;
}

SearchTree::SearchTree(const PlanningContext& ctx, const PlannerConfig& cfg, std::size_t goal,
                       const stl::Formula& spec, std::vector<AircraftState> history)
    : ctx_(ctx),
      cfg_(cfg),
      goal_(goal),
      spec_(spec),
      channel_set_(scenario::ChannelSet::for_formula(ctx.airspace, goal, spec)),
      history_size_(history.size()),
      rho_scale_(cfg.rho_scale > 0.0 ? cfg.rho_scale : ctx.airspace.half_diagonal()) {
  if (history.empty()) throw InvalidArgument("planning history must contain the current state");
  if (ctx.prior.action_count() != ctx.library.size()) {
    throw InvalidArgument("prior action count does not match the primitive library");
  }
  const std::size_t c = channel_set_.size();
  history_channels_.resize(history.size() * c);
  for (std::size_t i = 0; i < history.size(); ++i) {
    channel_set_.evaluate(history[i], std::span<double>(history_channels_.data() + i * c, c));
  }
  TreeNode root;
  root.state = history.back();
  root.parent = 0;
  root.terminal = ctx.airspace.in_goal(goal_, root.state);
  root.terminal_value = root.terminal ? 1.0 : 0.0;
  root.value = ctx.values.value(goal_, root.state);
  nodes_.push_back(std::move(root));
  nodes_.front().h_stl = normalized_robustness(0);
}

double SearchTree::normalized_robustness(std::size_t index) const {
  std::vector<const std::vector<double>*> path;
  for (std::size_t i = index; i != 0; i = nodes_[i].parent) path.push_back(&nodes_[i].channels);
  const std::size_t c = channel_set_.size();
  std::size_t n = history_size_;
  for (const auto* rows : path) n += rows->size() / c;
  std::vector<stl::Trace::Channel> channels;
  channels.reserve(c);
  for (const auto& name : channel_set_.names()) channels.emplace_back(name, std::vector<double>(n));
  auto append = [&](const std::vector<double>& rows, std::size_t at) {
    const std::size_t k = rows.size() / c;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < c; ++j) channels[j].second[at + i] = rows[i * c + j];
    }
    return at + k;
  };
  std::size_t at = append(history_channels_, 0);
  for (auto it = path.rbegin(); it != path.rend(); ++it) at = append(**it, at);
  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = static_cast<double>(i) * ctx_.library.sample_period();
  const stl::Trace trace(std::move(ts), std::move(channels));
  const double rho = stl::robustness_prefix(spec_, trace);
  return std::clamp(rho / rho_scale_, -1.0, 1.0);
}

void SearchTree::expand(TreeNode& node) {
  const std::span<const AircraftState> current(&node.state, 1);
  const auto p = ctx_.prior.distribution(current, policy::GoalVector(ctx_.airspace.goal_set().size(), goal_));
  node.edges.assign(p.size(), EdgeStats{});
  for (std::size_t a = 0; a < p.size(); ++a) node.edges[a].P = p[a];
  node.children.assign(p.size(), TreeNode::kNoChild);
  node.expanded = true;
}

std::size_t SearchTree::make_child(std::size_t parent, std::size_t action) {
  const AircraftState from = nodes_[parent].state;
  auto seg = dynamics::integrate(from, ctx_.library[action], ctx_.library.horizon(), ctx_.library.sample_period());
  TreeNode child;
  if (const auto entry = ctx_.airspace.first_goal_entry(seg.states)) {
    seg.states.resize(entry->sample + 1);
    child.terminal = true;
    child.terminal_value = entry->goal == goal_ ? 1.0 : 0.0;
  } else {
    const auto& bounds = ctx_.airspace.bounds();
    for (const auto& s : seg.states) {
      if (!bounds.contains(s)) {
        child.terminal = true;
        child.terminal_value = 0.0;
        break;
      }
    }
  }
  child.state = seg.end();
  child.depth = nodes_[parent].depth + 1;
  child.parent = parent;
  child.parent_action = action;
  const std::size_t c = channel_set_.size();
  child.channels.resize((seg.states.size() - 1) * c);
  for (std::size_t i = 1; i < seg.states.size(); ++i) {
    channel_set_.evaluate(seg.states[i], std::span<double>(child.channels.data() + (i - 1) * c, c));
  }
  child.value = ctx_.values.value(goal_, child.state);
  const std::size_t index = nodes_.size();
  nodes_.push_back(std::move(child));
  nodes_[index].h_stl = normalized_robustness(index);
  nodes_[parent].children[action] = index;
  return index;
}

std::pair<double, double> SearchTree::simulate() { return simulate(0); }

std::pair<double, double> SearchTree::simulate(std::size_t index) {
  {
    TreeNode& node = nodes_[index];
    if (node.terminal) return {node.terminal_value, node.h_stl};
    if (!node.expanded) {
      expand(node);
      return {node.value, node.h_stl};
    }
    if (node.depth >= cfg_.max_depth) return {node.value, node.h_stl};
  }
  std::size_t best = 0;
  {
    const TreeNode& node = nodes_[index];
    const std::uint64_t n_parent = node.visits();
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < node.edges.size(); ++a) {
      const double u = uct_score(node.edges[a], n_parent, cfg_.c1, cfg_.c2);
      if (u > best_score) {
        best_score = u;
        best = a;
      }
    }
  }
  std::size_t child = nodes_[index].children[best];
  if (child == TreeNode::kNoChild) child = make_child(index, best);
  const auto [v, h] = simulate(child);
  backup(nodes_[index].edges[best], v, h, cfg_.backup);
  return {v, h};
}

std::uint64_t SearchTree::run(const Budget& budget) {
  std::uint64_t count = 0;
  if (budget.simulations > 0) {
    for (; count < budget.simulations; ++count) simulate();
    return count;
  }
  using clock = std::chrono::steady_clock;
  const auto deadline =
      clock::now() + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double, std::milli>(budget.milliseconds));
  do {
    simulate();
    ++count;
  } while (clock::now() < deadline);
  return count;
}

std::size_t select_action(const TreeNode& root, Rng& rng) {
  const std::uint64_t total = root.visits();
  if (total == 0) throw InvalidArgument("root has no visits; the planning budget is too small");
  std::uint64_t r = rng.index(total);
  for (std::size_t a = 0; a < root.edges.size(); ++a) {
    if (r < root.edges[a].N) return a;
    r -= root.edges[a].N;
  }
  return root.edges.size() - 1;
}

SpecScore score_trajectory(const scenario::Airspace& airspace, std::size_t goal, const stl::Formula& spec,
                           std::span<const AircraftState> samples, std::span<const double> times) {
  if (samples.size() != times.size()) throw InvalidArgument("score_trajectory: samples/times size mismatch");
  const auto set = scenario::ChannelSet::for_formula(airspace, goal, spec);
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back(set.evaluate(s));
  std::vector<stl::Trace::Channel> channels;
  for (std::size_t c = 0; c < set.size(); ++c) {
    std::vector<double> values(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) values[i] = rows[i][c];
    channels.emplace_back(set.names()[c], std::move(values));
  }
  const stl::Trace trace(std::vector<double>(times.begin(), times.end()), std::move(channels));
  SpecScore out;
  out.robustness = stl::robustness_prefix(spec, trace);
  const std::string& name = airspace.goal_name(goal);
  if (airspace.is_runway(name) && spec == scenario::build_landing_spec(airspace, name)) {
    const auto stages = scenario::landing_stage_specs(airspace, name);
    std::size_t achieved = 0;
    for (const auto& stage : stages) {
      if (stl::robustness_prefix(stage, trace) < 0.0) break;
      ++achieved;
    }
    out.score = static_cast<double>(achieved) / static_cast<double>(stages.size());
  } else {
    out.score = out.robustness >= 0.0 ? 1.0 : 0.0;
  }
  return out;
}

EpisodeResult plan_episode(const AircraftState& start, const policy::GoalVector& goal, const stl::Formula& spec,
                           const PlannerConfig& cfg, const PlanningContext& ctx) {
  cfg.validate();
  if (goal.size() != ctx.airspace.goal_set().size()) {
    throw InvalidArgument("goal vector size does not match the goal set");
  }
  const std::size_t g = goal.index();
  const double horizon = ctx.library.horizon();
  const double period = ctx.library.sample_period();
  EpisodeResult result;
  result.steps.push_back(start);
  result.samples.push_back(start);
  result.sample_times.push_back(0.0);
  result.reached_goal = ctx.airspace.in_goal(g, start);
  Rng rng(cfg.rng_seed);
  AircraftState state = start;
  while (!result.reached_goal && result.actions.size() < cfg.max_steps) {
    const std::size_t step = result.actions.size();
    SearchTree tree(ctx, cfg, g, spec, result.samples);
    result.simulations += tree.run(cfg.budget);
    const std::size_t a = select_action(tree.root(), rng);
    if (cfg.record_tree) {
      const auto& nodes = tree.nodes();
      for (const auto& n : nodes) {
        for (std::size_t k = 0; k < n.children.size(); ++k) {
          if (n.children[k] == TreeNode::kNoChild) continue;
          const auto& c = nodes[n.children[k]];
          result.tree.push_back({step, n.state.x, n.state.y, c.state.x, c.state.y, n.edges[k].N});
        }
      }
    }
    auto seg = dynamics::integrate(state, ctx.library[a], horizon, period);
    const auto entry = ctx.airspace.first_goal_entry(seg.states);
    if (entry && entry->goal == g) {
      seg.states.resize(entry->sample + 1);
      result.reached_goal = true;
    }
    for (std::size_t i = 1; i < seg.states.size(); ++i) {
      result.samples.push_back(seg.states[i]);
      result.sample_times.push_back(static_cast<double>(step) * horizon + static_cast<double>(i) * period);
    }
    state = seg.end();
    result.steps.push_back(state);
    result.actions.push_back(a);
  }
  const auto score = score_trajectory(ctx.airspace, g, spec, result.samples, result.sample_times);
  result.stl_score = score.score;
  result.final_robustness = score.robustness;
  return result;
}

}  // namespace stlplan::planner
