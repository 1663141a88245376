#include "stlplan/harness/suite.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "stlplan/common/error.hpp"
#include "stlplan/common/random.hpp"
#include "stlplan/scenario/episode.hpp"

namespace stlplan::harness {

using nlohmann::json;

const char* to_string(PriorKind kind) {
  switch (kind) {
    case PriorKind::Uniform: return "uniform";
    case PriorKind::Costmap: return "costmap";
    case PriorKind::Replay: return "replay";
  }
  return "unknown";
}

PriorKind prior_kind_from_string(const std::string& name) {
  if (name == "uniform") return PriorKind::Uniform;
  if (name == "costmap") return PriorKind::Costmap;
  if (name == "replay") return PriorKind::Replay;
  throw InvalidArgument("unknown prior '" + name + "' (expected uniform, costmap or replay)");
}

void SuiteConfig::validate() const {
  planner.validate();
  if (episodes_per_class == 0) throw InvalidArgument("episodes_per_class must be at least 1");
  if (directions.empty()) throw InvalidArgument("suite needs at least one direction");
  if (prior == PriorKind::Replay && replay_path.empty()) throw InvalidArgument("replay prior needs a path");
  if (prior == PriorKind::Costmap && !(prior_temperature > 0.0)) {
    throw InvalidArgument("prior temperature must be positive");
  }
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("suite config field '") + key + "': " + e.what());
  }
}

std::string resolve(const std::string& path, const std::filesystem::path& base) {
  if (path.empty() || path == "default") return path;
  const std::filesystem::path p(path);
  return (p.is_absolute() || base.empty() ? p : base / p).string();
}

}  // namespace

SuiteConfig suite_config_from_json(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("suite config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("suite config must be a JSON object");
  SuiteConfig c;
  read(j, "scenario", c.scenario);
  read(j, "library", c.library);
  read(j, "stl_enabled", c.stl_enabled);
  read(j, "episodes_per_class", c.episodes_per_class);
  read(j, "directions", c.directions);
  read(j, "seed", c.seed);
  read(j, "threads", c.threads);
  read(j, "output_dir", c.output_dir);
  if (j.contains("prior")) {
    const json& p = j.at("prior");
    std::string kind = to_string(c.prior);
    read(p, "kind", kind);
    c.prior = prior_kind_from_string(kind);
    read(p, "temperature", c.prior_temperature);
    read(p, "path", c.replay_path);
  }
  if (j.contains("costmap")) {
    const json& m = j.at("costmap");
    read(m, "path", c.costmap.path);
    read(m, "grid_xy_m", c.costmap.grid_xy_m);
    read(m, "grid_z_m", c.costmap.grid_z_m);
    if (m.contains("demos")) {
      const json& d = m.at("demos");
      read(d, "per_pair", c.costmap.demos.per_pair);
      read(d, "pattern_fraction", c.costmap.demos.pattern_fraction);
      read(d, "base_entry_fraction", c.costmap.demos.base_entry_fraction);
      read(d, "jitter_m", c.costmap.demos.jitter_m);
      read(d, "noise", c.costmap.demos.noise);
      read(d, "max_steps", c.costmap.demos.max_steps);
      read(d, "seed", c.costmap.demos.seed);
    }
  }
  if (j.contains("planner")) {
    const json& p = j.at("planner");
    auto& pc = c.planner;
    read(p, "c1", pc.c1);
    read(p, "c2", pc.c2);
    read(p, "budget_sims", pc.budget.simulations);
    read(p, "budget_ms", pc.budget.milliseconds);
    read(p, "max_steps", pc.max_steps);
    read(p, "max_depth", pc.max_depth);
    read(p, "rho_scale", pc.rho_scale);
    read(p, "record_tree", pc.record_tree);
    std::string rule = planner::to_string(pc.backup);
    read(p, "backup", rule);
    pc.backup = planner::backup_rule_from_string(rule);
    if (p.contains("budget_ms") && !p.contains("budget_sims")) pc.budget.simulations = 0;
  }
  c.scenario = resolve(c.scenario, base_dir);
  c.library = resolve(c.library, base_dir);
  c.replay_path = resolve(c.replay_path, base_dir);
  c.costmap.path = resolve(c.costmap.path, base_dir);
  c.output_dir = resolve(c.output_dir, base_dir);
  c.validate();
  return c;
}

SuiteConfig load_suite_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open suite config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return suite_config_from_json(ss.str(), std::filesystem::path(path).parent_path());
}

Environment build_environment(const SuiteConfig& cfg) {
  auto airspace = cfg.scenario == "default" ? scenario::default_airspace() : scenario::load_airspace(cfg.scenario);
  auto library = cfg.library == "default" ? dynamics::default_library() : dynamics::load_library_json(cfg.library);
  policy::CostmapSet values;
  if (!cfg.costmap.path.empty()) {
    values = policy::CostmapSet(policy::load_costmap(cfg.costmap.path));
  } else {
    const auto demos = scenario::generate_demonstrations(airspace, library, cfg.costmap.demos);
    values = scenario::goal_costmaps(airspace, demos,
                                     scenario::default_grid(airspace, cfg.costmap.grid_xy_m, cfg.costmap.grid_z_m));
  }
  std::unique_ptr<policy::PolicyPrior> prior;
  switch (cfg.prior) {
    case PriorKind::Uniform: prior = policy::uniform_prior(library); break;
    case PriorKind::Costmap:
      prior = std::make_unique<policy::CostmapPrior>(values, library, cfg.prior_temperature);
      break;
    case PriorKind::Replay:
      prior = std::make_unique<policy::ReplayPrior>(policy::load_replay_prior(cfg.replay_path, library.size()));
      break;
  }
  return Environment{std::move(airspace), std::move(library), std::move(values), std::move(prior)};
}

double stl_score(const planner::EpisodeResult& episode, scenario::SpecKind kind, const scenario::Airspace& airspace,
                 const std::string& goal) {
  const std::size_t g = airspace.goal_index(goal);
  const auto spec = kind == scenario::SpecKind::Landing ? scenario::build_landing_spec(airspace, goal)
                                                        : scenario::build_takeoff_spec(airspace, goal);
  return planner::score_trajectory(airspace, g, spec, episode.samples, episode.sample_times).score;
}

void aggregate(SuiteReport& report) {
  std::map<std::string, std::size_t> order;
  report.classes.clear();
  for (const auto& e : report.episodes) {
    auto [it, inserted] = order.try_emplace(e.cls, report.classes.size());
    if (inserted) report.classes.push_back(ClassRow{e.cls});
    ClassRow& c = report.classes[it->second];
    c.episodes += 1;
    c.success_rate += e.success ? 1.0 : 0.0;
    c.stl_score += e.score;
  }
  double success = 0.0;
  double score = 0.0;
  std::size_t total = 0;
  for (auto& c : report.classes) {
    const double n = static_cast<double>(c.episodes);
    c.success_rate /= n;
    c.stl_score /= n;
    success += c.success_rate * n;
    score += c.stl_score * n;
    total += c.episodes;
  }
  report.success_rate = total ? success / static_cast<double>(total) : 0.0;
  report.stl_score = total ? score / static_cast<double>(total) : 0.0;
}

std::string report_to_json(const SuiteReport& r) {
  json j;
  j["stl_enabled"] = r.stl_enabled;
  j["prior"] = r.prior;
  j["total"] = {{"episodes", r.episodes.size()}, {"success_rate", r.success_rate}, {"stl_score", r.stl_score}};
  j["classes"] = json::array();
  for (const auto& c : r.classes) {
    j["classes"].push_back(
        {{"class", c.cls}, {"episodes", c.episodes}, {"success_rate", c.success_rate}, {"stl_score", c.stl_score}});
  }
  j["episodes"] = json::array();
  for (const auto& e : r.episodes) {
    json row = {{"index", e.index},  {"class", e.cls},     {"start", e.start},
                {"goal", e.goal},    {"seed", e.seed},     {"steps", e.steps},
                {"success", e.success}, {"stl_score", e.score}, {"robustness", e.robustness}};
    if (!e.error.empty()) row["error"] = e.error;
    j["episodes"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

SuiteReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    SuiteReport r;
    r.stl_enabled = j.at("stl_enabled").get<bool>();
    r.prior = j.at("prior").get<std::string>();
    r.success_rate = j.at("total").at("success_rate").get<double>();
    r.stl_score = j.at("total").at("stl_score").get<double>();
    for (const auto& c : j.at("classes")) {
      r.classes.push_back({c.at("class").get<std::string>(), c.at("episodes").get<std::size_t>(),
                           c.at("success_rate").get<double>(), c.at("stl_score").get<double>()});
    }
    for (const auto& e : j.at("episodes")) {
      EpisodeRow row;
      row.index = e.at("index").get<std::size_t>();
      row.cls = e.at("class").get<std::string>();
      row.start = e.at("start").get<std::string>();
      row.goal = e.at("goal").get<std::string>();
      row.seed = e.at("seed").get<std::uint64_t>();
      row.steps = e.at("steps").get<std::size_t>();
      row.success = e.at("success").get<bool>();
      row.score = e.at("stl_score").get<double>();
      row.robustness = e.at("robustness").get<double>();
      if (e.contains("error")) row.error = e.at("error").get<std::string>();
      r.episodes.push_back(std::move(row));
    }
    return r;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed report JSON: ") + e.what());
  }
}

namespace {

struct EpisodePlan {
  std::string cls;
  std::string start;
  std::string goal;
  std::uint64_t seed = 0;
};

std::vector<EpisodePlan> plan_suite(const SuiteConfig& cfg, const scenario::Airspace& airspace) {
  std::vector<std::string> runways;
  for (const auto& rw : airspace.runways()) {
    const auto& goals = airspace.goal_set();
    if (std::find(goals.begin(), goals.end(), rw.name) != goals.end()) runways.push_back(rw.name);
  }
  if (runways.empty()) throw InvalidArgument("scenario has no runway in its goal set");
  std::vector<EpisodePlan> plans;
  for (const auto& dir : cfg.directions) {
    airspace.goal_index(dir);
    for (const char* kind : {"takeoff", "landing"}) {
      for (std::size_t k = 0; k < cfg.episodes_per_class; ++k) {
        EpisodePlan p;
        p.cls = std::string(kind) + ":" + dir;
        p.seed = derive_seed(cfg.seed, plans.size());
        Rng rng(p.seed);
        const std::string& runway = runways[rng.index(runways.size())];
        p.start = kind == std::string("takeoff") ? runway : dir;
        p.goal = kind == std::string("takeoff") ? dir : runway;
        plans.push_back(std::move(p));
      }
    }
  }
  return plans;
}

}  // namespace

SuiteRun run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  const Environment env = build_environment(cfg);
  return run_suite(cfg, env);
}

SuiteRun run_suite(const SuiteConfig& cfg, const Environment& env) {
  cfg.validate();
  const auto plans = plan_suite(cfg, env.airspace);
  planner::PlannerConfig pc = cfg.planner;
  if (!cfg.stl_enabled) pc.c2 = 0.0;
  const auto ctx = env.context();

  SuiteRun run;
  run.episodes.resize(plans.size());
  run.report.episodes.resize(plans.size());
  run.report.wall_seconds.resize(plans.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < plans.size(); i = next++) {
      const auto& p = plans[i];
      EpisodeRow& row = run.report.episodes[i];
      row.index = i;
      row.cls = p.cls;
      row.start = p.start;
      row.goal = p.goal;
      row.seed = p.seed;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        Rng rng(derive_seed(p.seed, 1));
        const auto ep = scenario::make_episode(env.airspace, p.start, p.goal, rng);
        planner::PlannerConfig epc = pc;
        epc.rng_seed = derive_seed(p.seed, 2);
        const std::size_t g = env.airspace.goal_index(p.goal);
        auto result = planner::plan_episode(ep.start_state, policy::GoalVector(env.airspace.goal_set().size(), g),
                                            ep.spec, epc, ctx);
        row.steps = result.step_count();
        row.success = result.reached_goal;
        row.score = result.stl_score;
        row.robustness = result.final_robustness;
        run.episodes[i] = std::move(result);
      } catch (const std::exception& e) {
        row.error = e.what();
        row.success = false;
      }
      run.report.wall_seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, plans.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  run.report.stl_enabled = cfg.stl_enabled;
  run.report.prior = to_string(cfg.prior);
  aggregate(run.report);
  if (!cfg.output_dir.empty()) export_artifacts(run.report, run.episodes, cfg.output_dir);
  return run;
}

void write_trajectory_csv(std::ostream& out, const planner::EpisodeResult& episode) {
  out << std::setprecision(17) << "t,x,y,z,chi\n";
  for (std::size_t i = 0; i < episode.samples.size(); ++i) {
    const auto& s = episode.samples[i];
    out << episode.sample_times[i] << ',' << s.x << ',' << s.y << ',' << s.z << ',' << s.chi << '\n';
  }
}

void write_tree_csv(std::ostream& out, const planner::EpisodeResult& episode) {
  out << std::setprecision(17) << "step,parent_x,parent_y,child_x,child_y,N\n";
  for (const auto& e : episode.tree) {
    out << e.step << ',' << e.parent_x << ',' << e.parent_y << ',' << e.child_x << ',' << e.child_y << ',' << e.N
        << '\n';
  }
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  return out;
}

std::string episode_file(std::size_t i) {
  std::ostringstream ss;
  ss << "episode_" << std::setw(3) << std::setfill('0') << i << ".csv";
  return ss.str();
}

}  // namespace

void export_artifacts(const SuiteReport& report, const std::vector<planner::EpisodeResult>& episodes,
                      const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "trajectories", ec);
  if (ec) throw IoError("cannot create '" + (out_dir / "trajectories").string() + "': " + ec.message());
  open_out(out_dir / "report.json") << report_to_json(report);

  auto csv = open_out(out_dir / "report.csv");
  csv << std::setprecision(17) << "index,class,start,goal,steps,success,stl_score,robustness,wall_s,error\n";
  for (std::size_t i = 0; i < report.episodes.size(); ++i) {
    const auto& e = report.episodes[i];
    const double wall = i < report.wall_seconds.size() ? report.wall_seconds[i] : 0.0;
    std::string err = e.error;
    std::replace(err.begin(), err.end(), ',', ';');
    csv << e.index << ',' << e.cls << ',' << e.start << ',' << e.goal << ',' << e.steps << ','
        << (e.success ? 1 : 0) << ',' << e.score << ',' << e.robustness << ',' << wall << ',' << err << '\n';
  }

  json timing = json::array();
  for (double w : report.wall_seconds) timing.push_back(w);
  open_out(out_dir / "timing.json") << json{{"wall_seconds", timing}}.dump(2) << '\n';

  for (std::size_t i = 0; i < episodes.size(); ++i) {
    auto out = open_out(out_dir / "trajectories" / episode_file(i));
    write_trajectory_csv(out, episodes[i]);
    if (!episodes[i].tree.empty()) {
      std::filesystem::create_directories(out_dir / "trees", ec);
      if (ec) throw IoError("cannot create '" + (out_dir / "trees").string() + "': " + ec.message());
      auto tree = open_out(out_dir / "trees" / episode_file(i));
      write_tree_csv(tree, episodes[i]);
    }
  }
}

}  // namespace stlplan::harness
