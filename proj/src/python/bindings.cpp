#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stlplan/common/error.hpp"
#include "stlplan/common/random.hpp"
#include "stlplan/dynamics/kinematics.hpp"
#include "stlplan/harness/suite.hpp"
#include "stlplan/planner/mcts.hpp"
#include "stlplan/scenario/episode.hpp"
#include "stlplan/stl/parser.hpp"
#include "stlplan/stl/robustness.hpp"

namespace py = pybind11;
using namespace stlplan;
using dynamics::AircraftState;

namespace {

using StateTuple = std::tuple<double, double, double, double>;

AircraftState to_state(const StateTuple& s) { return {std::get<0>(s), std::get<1>(s), std::get<2>(s), std::get<3>(s)}; }
StateTuple from_state(const AircraftState& s) { return {s.x, s.y, s.z, s.chi}; }

std::vector<StateTuple> from_states(const std::vector<AircraftState>& states) {
  std::vector<StateTuple> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(from_state(s));
  return out;
}

stl::Trace make_trace(const std::vector<double>& times, const std::map<std::string, std::vector<double>>& channels) {
  std::vector<stl::Trace::Channel> cs(channels.begin(), channels.end());
  return stl::Trace(times, std::move(cs));
}

py::dict episode_dict(const planner::EpisodeResult& r) {
  py::dict d;
  d["actions"] = r.actions;
  d["steps"] = from_states(r.steps);
  d["samples"] = from_states(r.samples);
  d["sample_times"] = r.sample_times;
  d["reached_goal"] = r.reached_goal;
  d["stl_score"] = r.stl_score;
  d["robustness"] = r.final_robustness;
  d["simulations"] = r.simulations;
  return d;
}

py::dict plan(const std::string& start, const std::string& goal, const std::string& prior, double c1, double c2,
              std::uint64_t budget_sims, std::size_t max_steps, double rho_scale, std::uint64_t seed,
              const std::string& spec) {
  harness::SuiteConfig cfg;
  cfg.prior = harness::prior_kind_from_string(prior);
  cfg.planner.c1 = c1;
  cfg.planner.c2 = c2;
  cfg.planner.budget = {budget_sims, 0.0};
  cfg.planner.max_steps = max_steps;
  cfg.planner.rho_scale = rho_scale;
  cfg.planner.rng_seed = derive_seed(seed, 2);
  cfg.validate();
  py::gil_scoped_release release;
  const auto env = harness::build_environment(cfg);
  Rng rng(derive_seed(seed, 1));
  auto episode = scenario::make_episode(env.airspace, start, goal, rng);
  if (!spec.empty()) episode.spec = stl::parse_formula(spec);
  const std::size_t g = env.airspace.goal_index(goal);
  const auto result = planner::plan_episode(episode.start_state, policy::GoalVector(env.airspace.goal_set().size(), g),
                                            episode.spec, cfg.planner, env.context());
  py::gil_scoped_acquire acquire;
  auto d = episode_dict(result);
  d["spec"] = stl::print_formula(episode.spec);
  return d;
}

std::string run_suite(const std::string& config_json, const std::string& base_dir) {
  const auto cfg = harness::suite_config_from_json(config_json, base_dir);
  py::gil_scoped_release release;
  const auto run = harness::run_suite(cfg);
  if (!cfg.output_dir.empty()) harness::export_artifacts(run.report, run.episodes, cfg.output_dir);
  return harness::report_to_json(run.report);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "STL-guided Monte Carlo tree search for terminal airspace";

  static PyObject* error = py::exception<Error>(m, "Error", PyExc_RuntimeError).release().ptr();
  static PyObject* parse_error = py::exception<stl::ParseError>(m, "ParseError", error).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const stl::ParseError& e) {
      py::object exc = py::handle(parse_error)(e.what());
      exc.attr("line") = e.line();
      exc.attr("column") = e.column();
      exc.attr("code") = e.code();
      PyErr_SetObject(parse_error, exc.ptr());
    } catch (const Error& e) {
      py::object exc = py::handle(error)(e.what());
      exc.attr("code") = e.code();
      PyErr_SetObject(error, exc.ptr());
    }
  });

  m.attr("TRUE_ROBUSTNESS") = stl::kTrueRobustness;

  m.def("normalize_formula", [](const std::string& text) { return stl::print_formula(stl::parse_formula(text)); },
        py::arg("text"), "Parses a formula and prints it in canonical form.");
  m.def("formula_depth", [](const std::string& text) { return stl::parse_formula(text).depth(); }, py::arg("text"));
  m.def(
      "robustness",
      [](const std::string& formula, const std::vector<double>& times,
         const std::map<std::string, std::vector<double>>& channels, std::size_t index) {
        return stl::robustness(stl::parse_formula(formula), make_trace(times, channels), index);
      },
      py::arg("formula"), py::arg("times"), py::arg("channels"), py::arg("index") = 0,
      "Robustness at sample `index`; NaN when undefined.");
  m.def(
      "robustness_signal",
      [](const std::string& formula, const std::vector<double>& times,
         const std::map<std::string, std::vector<double>>& channels) {
        return stl::robustness_signal(stl::parse_formula(formula), make_trace(times, channels));
      },
      py::arg("formula"), py::arg("times"), py::arg("channels"));

  m.def("default_library", [] {
    const auto lib = dynamics::default_library();
    std::vector<py::dict> out;
    for (const auto& p : lib.primitives()) {
      py::dict d;
      d["id"] = p.id;
      d["v"] = p.v;
      d["v_h"] = p.v_h;
      d["phi"] = p.phi;
      out.push_back(d);
    }
    return out;
  });
  m.def(
      "integrate",
      [](const StateTuple& start, std::size_t primitive_id) {
        const auto lib = dynamics::default_library();
        return from_states(dynamics::transition(to_state(start), primitive_id, lib).segment.states);
      },
      py::arg("start"), py::arg("primitive_id"), "Samples of one primitive of the default library from (x, y, z, chi).");
  m.def("wrap_angle", &dynamics::wrap_angle, py::arg("rad"));

  m.def(
      "uct_score",
      [](double q, std::uint64_t n, double p, double h, std::uint64_t n_parent, double c1, double c2) {
        return planner::uct_score({q, n, p, h}, n_parent, c1, c2);
      },
      py::arg("q"), py::arg("n"), py::arg("p"), py::arg("h"), py::arg("n_parent"), py::arg("c1"), py::arg("c2"));
  m.def(
      "backup",
      [](double q, std::uint64_t n, double v, const std::string& rule) {
        planner::EdgeStats e{q, n, 0.0, 0.0};
        planner::backup(e, v, 0.0, planner::backup_rule_from_string(rule));
        return std::make_pair(e.Q, e.N);
      },
      py::arg("q"), py::arg("n"), py::arg("v"), py::arg("rule") = "literal", "Returns the updated (Q, N).");

  m.def("plan", &plan, py::arg("start"), py::arg("goal"), py::arg("prior") = "costmap", py::arg("c1") = 1.0,
        py::arg("c2") = 1.0, py::arg("budget_sims") = 200, py::arg("max_steps") = 40, py::arg("rho_scale") = 0.0,
        py::arg("seed") = 0, py::arg("spec") = "", "Plans and flies one episode on the default airspace.");
  m.def("run_suite", &run_suite, py::arg("config_json"), py::arg("base_dir") = "",
        "Runs a suite from config JSON text and returns report.json text.");
}
