#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stlplan/common/error.hpp"
#include "stlplan/harness/suite.hpp"
#include "stlplan/scenario/episode.hpp"
#include "stlplan/stl/parser.hpp"
#include "stlplan/stl/robustness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stlplan;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct PlanArgs {
  std::string scenario = "default";
  std::string start;
  std::string goal;
  std::string spec = "auto";
  std::string prior = "costmap";
  std::string prior_path;
  std::string costmap;
  double c1 = 1.0;
  double c2 = 1.0;
  std::uint64_t budget_sims = 0;
  double budget_ms = 0.0;
  std::size_t max_steps = 40;
  double rho_scale = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  bool record_tree = false;
};

int run_plan(const PlanArgs& a) {
  harness::SuiteConfig cfg;
  cfg.scenario = a.scenario;
  cfg.prior = harness::prior_kind_from_string(a.prior);
  cfg.replay_path = a.prior_path;
  cfg.costmap.path = a.costmap;
  cfg.planner.c1 = a.c1;
  cfg.planner.c2 = a.c2;
  cfg.planner.budget = {a.budget_sims, a.budget_ms};
  if (a.budget_sims == 0 && a.budget_ms == 0.0) cfg.planner.budget.simulations = 200;
  cfg.planner.max_steps = a.max_steps;
  cfg.planner.rho_scale = a.rho_scale;
  cfg.planner.rng_seed = derive_seed(a.seed, 2);
  cfg.planner.record_tree = a.record_tree;
  cfg.validate();
  const auto env = harness::build_environment(cfg);

  Rng rng(derive_seed(a.seed, 1));
  auto episode = scenario::make_episode(env.airspace, a.start, a.goal, rng);
  if (a.spec != "auto") episode.spec = stl::parse_formula(read_file(a.spec));
  const std::size_t g = env.airspace.goal_index(a.goal);
  const auto result = planner::plan_episode(episode.start_state, policy::GoalVector(env.airspace.goal_set().size(), g),
                                            episode.spec, cfg.planner, env.context());
  const json summary = {{"start", a.start},
                        {"goal", a.goal},
                        {"spec", stl::print_formula(episode.spec)},
                        {"steps", result.step_count()},
                        {"reached_goal", result.reached_goal},
                        {"stl_score", result.stl_score},
                        {"robustness", result.final_robustness},
                        {"simulations", result.simulations},
                        {"actions", result.actions}};
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    std::ofstream traj(fs::path(a.out) / "trajectory.csv");
    harness::write_trajectory_csv(traj, result);
    if (a.record_tree) {
      std::ofstream tree(fs::path(a.out) / "tree.csv");
      harness::write_tree_csv(tree, result);
    }
    std::ofstream(fs::path(a.out) / "result.json") << summary.dump(2) << '\n';
    if (!traj) throw IoError("cannot write outputs under '" + a.out + "'");
  }
  std::cout << summary.dump() << '\n';
  return 0;
}

int run_suite(const std::string& config, const std::string& out_override) {
  auto cfg = harness::load_suite_config(config);
  if (!out_override.empty()) cfg.output_dir = out_override;
  const auto run = harness::run_suite(cfg);
  const auto& r = run.report;
  std::cout << std::setprecision(6);
  for (const auto& c : r.classes) {
    std::cout << std::left << std::setw(12) << c.cls << " episodes=" << c.episodes
              << " success_rate=" << c.success_rate << " stl_score=" << c.stl_score << '\n';
  }
  std::cout << "total" << std::string(7, ' ') << " episodes=" << r.episodes.size()
            << " success_rate=" << r.success_rate << " stl_score=" << r.stl_score << '\n';
  return 0;
}

int run_eval(const std::string& formula, const std::string& trace_path, std::size_t index) {
  const auto f = stl::parse_formula(formula);
  const auto trace = stl::load_trace_csv(trace_path);
  std::cout << std::setprecision(17) << stl::robustness(f, trace, index) << '\n';
  return 0;
}

int run_make_costmap(const std::string& dir, const std::string& grid_path, const std::string& out) {
  const auto grid = policy::grid_from_json(read_file(grid_path));
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InvalidArgument("no .csv traces in '" + dir + "'");
  std::vector<std::vector<dynamics::AircraftState>> traces;
  for (const auto& f : files) {
    const auto t = stl::load_trace_csv(f.string());
    const auto x = t.channel("x");
    const auto y = t.channel("y");
    const auto z = t.channel("z");
    std::vector<dynamics::AircraftState> states(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) states[i] = {x[i], y[i], z[i], 0.0};
    traces.push_back(std::move(states));
  }
  policy::save_costmap(policy::build_costmap_from_traces(traces, grid), out);
  std::cout << json{{"traces", files.size()}, {"cells", grid.cell_count()}, {"out", out}}.dump() << '\n';
  return 0;
}

void print_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STL-guided MCTS planner for traffic-pattern flight"};
  app.require_subcommand(1);

  PlanArgs plan;
  auto* cmd_plan = app.add_subcommand("plan", "Plan and fly a single episode");
  cmd_plan->add_option("--scenario", plan.scenario, "Scenario JSON or 'default'");
  cmd_plan->add_option("--start", plan.start, "Start region")->required();
  cmd_plan->add_option("--goal", plan.goal, "Goal region")->required();
  cmd_plan->add_option("--spec", plan.spec, "'auto' or a file holding a formula");
  cmd_plan->add_option("--prior", plan.prior, "uniform, costmap or replay");
  cmd_plan->add_option("--prior-path", plan.prior_path, "Replay prior JSON");
  cmd_plan->add_option("--costmap", plan.costmap, "Costmap JSON (default: built from demonstrations)");
  cmd_plan->add_option("--c1", plan.c1);
  cmd_plan->add_option("--c2", plan.c2);
  auto* sims = cmd_plan->add_option("--budget-sims", plan.budget_sims, "Simulations per step");
  auto* ms = cmd_plan->add_option("--budget-ms", plan.budget_ms, "Milliseconds per step");
  sims->excludes(ms);
  cmd_plan->add_option("--max-steps", plan.max_steps);
  cmd_plan->add_option("--rho-scale", plan.rho_scale, "Robustness normalization in meters (0: auto)");
  cmd_plan->add_option("--seed", plan.seed);
  cmd_plan->add_option("--out", plan.out, "Output directory");
  cmd_plan->add_flag("--record-tree", plan.record_tree, "Write tree edge dumps");

  std::string suite_config;
  std::string suite_out;
  auto* cmd_suite = app.add_subcommand("suite", "Run an episode suite");
  cmd_suite->add_option("--config", suite_config, "Suite JSON")->required();
  cmd_suite->add_option("--out", suite_out, "Override the output directory");

  std::string formula;
  std::string trace;
  std::size_t index = 0;
  auto* cmd_eval = app.add_subcommand("eval-stl", "Robustness of a formula on a trace");
  cmd_eval->add_option("--formula", formula)->required();
  cmd_eval->add_option("--trace", trace, "Trace CSV")->required();
  cmd_eval->add_option("--index", index, "Sample index to evaluate at");

  std::string traces_dir;
  std::string grid;
  std::string costmap_out;
  auto* cmd_costmap = app.add_subcommand("make-costmap", "Frequency costmap from trajectory CSVs");
  cmd_costmap->add_option("--traces-dir", traces_dir)->required();
  cmd_costmap->add_option("--grid", grid, "Grid JSON {origin, resolution, dims}")->required();
  cmd_costmap->add_option("--out", costmap_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*cmd_plan) return run_plan(plan);
    if (*cmd_suite) return run_suite(suite_config, suite_out);
    if (*cmd_eval) return run_eval(formula, trace, index);
    if (*cmd_costmap) return run_make_costmap(traces_dir, grid, costmap_out);
  } catch (const Error& e) {
    print_error(e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 1;
}
