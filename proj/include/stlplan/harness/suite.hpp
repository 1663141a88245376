#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stlplan/dynamics/kinematics.hpp"
#include "stlplan/planner/mcts.hpp"
#include "stlplan/policy/costmap.hpp"
#include "stlplan/policy/prior.hpp"
#include "stlplan/scenario/airspace.hpp"
#include "stlplan/scenario/demonstrations.hpp"
#include "stlplan/scenario/specs.hpp"

namespace stlplan::harness {

enum class PriorKind { Uniform, Costmap, Replay };

const char* to_string(PriorKind kind);
PriorKind prior_kind_from_string(const std::string& name);

/// Where the value map (and the costmap prior) comes from: synthetic
/// demonstrations flown in the scenario, or a costmap file shared by all
/// goals.
struct CostmapSource {
  std::string path;  // empty -> demonstrations
  scenario::DemoConfig demos;
  double grid_xy_m = 250.0;
  double grid_z_m = 100.0;
};

struct SuiteConfig {
  std::string scenario = "default";  // "default" or a scenario JSON path
  std::string library = "default";   // "default" or a primitive library JSON path
  planner::PlannerConfig planner;
  PriorKind prior = PriorKind::Costmap;
  double prior_temperature = 0.05;
  std::string replay_path;
  CostmapSource costmap;
  bool stl_enabled = true;
  std::size_t episodes_per_class = 5;
  std::vector<std::string> directions{"N", "S", "E", "W"};
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0 -> hardware concurrency
  std::string output_dir;   // empty -> no files written

  /// Throws InvalidArgument on zero episodes or an empty direction list.
  void validate() const;
};

/// Parses suite JSON. Relative paths are resolved against `base_dir`.
SuiteConfig suite_config_from_json(const std::string& text, const std::filesystem::path& base_dir = {});
SuiteConfig load_suite_config(const std::string& path);

/// Scenario, dynamics, value maps and prior assembled from a config.
struct Environment {
  scenario::Airspace airspace;
  dynamics::PrimitiveLibrary library;
  policy::CostmapSet values;
  std::unique_ptr<policy::PolicyPrior> prior;

  planner::PlanningContext context() const { return {airspace, library, *prior, values}; }
};

Environment build_environment(const SuiteConfig& cfg);

/// Landing: stage prefixes satisfied in order / 3. Takeoff: 1 when the
/// spec's robustness is non-negative.
double stl_score(const planner::EpisodeResult& episode, scenario::SpecKind kind, const scenario::Airspace& airspace,
                 const std::string& goal);

struct EpisodeRow {
  std::size_t index = 0;
  std::string cls;  // e.g. "landing:N"
  std::string start;
  std::string goal;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  bool success = false;
  double score = 0.0;
  double robustness = 0.0;
  std::string error;

  bool operator==(const EpisodeRow&) const = default;
};

struct ClassRow {
  std::string cls;
  std::size_t episodes = 0;
  double success_rate = 0.0;
  double stl_score = 0.0;

  bool operator==(const ClassRow&) const = default;
};

struct SuiteReport {
  bool stl_enabled = true;
  std::string prior;
  std::vector<ClassRow> classes;
  double success_rate = 0.0;
  double stl_score = 0.0;
  std::vector<EpisodeRow> episodes;
  std::vector<double> wall_seconds;  // per episode; not part of report.json

  bool operator==(const SuiteReport& o) const {
    return stl_enabled == o.stl_enabled && prior == o.prior && classes == o.classes &&
           success_rate == o.success_rate && stl_score == o.stl_score && episodes == o.episodes;
  }
};

/// Class aggregates and episode-weighted totals from the rows.
void aggregate(SuiteReport& report);

std::string report_to_json(const SuiteReport& report);
SuiteReport report_from_json(const std::string& text);

struct SuiteRun {
  SuiteReport report;
  std::vector<planner::EpisodeResult> episodes;
};

/// Episodes run per class {takeoff, landing} x direction; takeoffs start on a
/// random runway end and fly to the direction's box, landings start in the
/// box and land on a random runway end. Every episode draws from its own
/// seed derived from (seed, episode index), so results do not depend on
/// thread scheduling or on stl_enabled.
SuiteRun run_suite(const SuiteConfig& cfg);
SuiteRun run_suite(const SuiteConfig& cfg, const Environment& env);

/// report.json, report.csv, timing.json, trajectories/episode_<i>.csv and
/// trees/episode_<i>.csv for episodes with recorded trees.
void export_artifacts(const SuiteReport& report, const std::vector<planner::EpisodeResult>& episodes,
                      const std::filesystem::path& out_dir);

void write_trajectory_csv(std::ostream& out, const planner::EpisodeResult& episode);
void write_tree_csv(std::ostream& out, const planner::EpisodeResult& episode);

}  // namespace stlplan::harness
