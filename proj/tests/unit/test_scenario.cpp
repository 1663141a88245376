#include <doctest.h>

#include <cmath>
#include <map>

#include "stlplan/common/error.hpp"
#include "stlplan/common/random.hpp"
#include "stlplan/scenario/airspace.hpp"
#include "stlplan/scenario/demonstrations.hpp"
#include "stlplan/scenario/episode.hpp"
#include "stlplan/scenario/specs.hpp"
#include "stlplan/stl/parser.hpp"
#include "stlplan/stl/robustness.hpp"

using namespace stlplan;
using namespace stlplan::scenario;

namespace {

// Minimum distance from a point to a grid of samples covering the box surface.
double sampled_outside_distance(const Box& b, const AircraftState& s, int n) {
  double best = INFINITY;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      for (int k = 0; k <= n; ++k) {
        const double x = b.x_min + (b.x_max - b.x_min) * i / n;
        const double y = b.y_min + (b.y_max - b.y_min) * j / n;
        const double z = b.z_min + (b.z_max - b.z_min) * k / n;
        best = std::min(best, std::sqrt((x - s.x) * (x - s.x) + (y - s.y) * (y - s.y) + (z - s.z) * (z - s.z)));
      }
    }
  }
  return best;
}

std::vector<AircraftState> path(std::initializer_list<std::array<double, 3>> points) {
  std::vector<AircraftState> out;
  for (const auto& p : points) out.push_back({p[0], p[1], p[2], 0});
  return out;
}

// Downwind, base, final and touchdown for R08 in the default field.
std::vector<AircraftState> ideal_r08() {
  return path({{2000, 1600, 300},
               {500, 1600, 300},
               {-1000, 1600, 300},
               {-2500, 1600, 250},
               {-2500, 800, 200},
               {-2500, 0, 150},
               {-1500, 0, 100},
               {-500, 0, 50},
               {0, 0, 20}});
}

double rho(const Airspace& a, const std::string& goal, const stl::Formula& f, const std::vector<AircraftState>& states) {
  const auto sig = f.signals();
  std::vector<std::string> regions;
  for (const auto& s : sig) {
    if (s.rfind("d_", 0) == 0) regions.push_back(s.substr(2));
  }
  return stl::robustness(f, derive_channels(a, states, a.goal_index(goal), regions, 20.0), 0);
}

}  // namespace

TEST_CASE("signed distance examples") {
  const Box b{-1, 1, -1, 1, -1, 1};
  CHECK(signed_distance(b, {0, 0, 0, 0}) == 1.0);
  CHECK(signed_distance(b, {1, 0, 0, 0}) == 0.0);
  CHECK(signed_distance(b, {0, -1, 0.5, 0}) == 0.0);
  CHECK(signed_distance(b, {4, 0, 0, 0}) == -3.0);
  CHECK(sampled_outside_distance(b, {4, 0, 0, 0}, 20) == 3.0);
  CHECK(signed_distance(b, {0, 0, 0.25, 0}) == 0.75);
}

TEST_CASE("signed distance agrees with a sampled surface outside") {
  Rng rng(13);
  const Box b{-10, 30, 0, 20, 5, 15};
  for (int i = 0; i < 200; ++i) {
    AircraftState s{rng.uniform(-60, 80), rng.uniform(-50, 70), rng.uniform(-40, 60), 0};
    if (b.contains(s)) continue;
    const double sampled = sampled_outside_distance(b, s, 40);
    // The surface grid spacing bounds the sampling error.
    CHECK(-signed_distance(b, s) <= sampled + 1e-9);
    CHECK(sampled - (-signed_distance(b, s)) < 1.0);
  }
}

TEST_CASE("signed distance is 1-Lipschitz") {
  Rng rng(99);
  const auto a = default_airspace();
  for (int i = 0; i < 2000; ++i) {
    const auto& r = a.regions()[rng.index(a.regions().size())];
    const AircraftState p{rng.uniform(-9000, 10000), rng.uniform(-8000, 8000), rng.uniform(-500, 2500), 0};
    const double step = rng.uniform(0, 3000);
    AircraftState q = p;
    q.x += rng.uniform(-1, 1) * step;
    q.y += rng.uniform(-1, 1) * step;
    q.z += rng.uniform(-1, 1) * step;
    const double ds = std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) + (p.z - q.z) * (p.z - q.z));
    CHECK(std::abs(signed_distance(r, p) - signed_distance(r, q)) <= ds + 1e-9);
  }
}

TEST_CASE("default airspace") {
  const auto a = default_airspace();
  CHECK(a.goal_set() == std::vector<std::string>{"N", "NE", "E", "SE", "S", "SW", "W", "NW", "R08", "R26"});
  for (const auto& r : a.regions()) CHECK(a.bounds().contains(r.box));
  for (std::size_t i = 0; i < a.goal_set().size(); ++i) {
    for (std::size_t j = i + 1; j < a.goal_set().size(); ++j) {
      CHECK_FALSE(a.region(a.goal_name(i)).box.intersects(a.region(a.goal_name(j)).box));
    }
  }
  CHECK(a.pattern_altitude() == doctest::Approx(304.8));
  CHECK(a.landing_max_altitude() == 30.0);
  CHECK(a.is_runway("R26"));
  CHECK_FALSE(a.is_runway("N"));
  CHECK_THROWS_AS(a.region("nowhere"), InvalidArgument);
  CHECK_THROWS_AS(a.goal_index("downwind_R08"), InvalidArgument);
  // Landing needs low altitude inside the touchdown box.
  const auto r08 = a.goal_index("R08");
  CHECK(a.in_goal(r08, {0, 0, 20, 0}));
  CHECK_FALSE(a.in_goal(r08, {0, 0, 100, 0}));
  CHECK(a.in_goal(a.goal_index("N"), {750, 6000, 300, 0}));
}

TEST_CASE("airspace validation and JSON round trip") {
  const auto a = default_airspace();
  const auto back = airspace_from_json(airspace_to_json(a));
  CHECK(back.regions() == a.regions());
  CHECK(back.runways() == a.runways());
  CHECK(back.goal_set() == a.goal_set());
  CHECK(back.bounds() == a.bounds());
  CHECK(back.pattern_altitude() == a.pattern_altitude());

  const Box bounds{0, 100, 0, 100, 0, 100};
  CHECK_THROWS_AS(Airspace(bounds, {{"A", {0, 50, 0, 50, 0, 50}}, {"B", {40, 90, 40, 90, 0, 50}}}, {}, {"A", "B"}, 30),
                  InvalidArgument);
  CHECK_THROWS_AS(Airspace(bounds, {{"A", {0, 150, 0, 50, 0, 50}}}, {}, {"A"}, 30), InvalidArgument);
  CHECK_THROWS_AS(Airspace(bounds, {{"A", {0, 50, 0, 50, 0, 50}}}, {}, {"Z"}, 30), InvalidArgument);
  CHECK_THROWS_AS(Airspace(bounds, {{"A", {0, 50, 0, 50, 0, 50}}}, {{"A", 0, "f", "b", "d"}}, {"A"}, 30),
                  InvalidArgument);
  CHECK_THROWS_AS(Airspace(bounds, {{"A", {10, 5, 0, 50, 0, 50}}}, {}, {"A"}, 30), InvalidArgument);
  CHECK_THROWS(airspace_from_json("{\"regions\": []}"));
  CHECK_THROWS_AS(load_airspace("/nonexistent/scenario.json"), IoError);
}

TEST_CASE("goal entry detection") {
  const auto a = default_airspace();
  const auto n = a.goal_index("N");
  const auto samples = path({{750, 4000, 300}, {750, 4900, 300}, {750, 5100, 300}, {750, 5300, 300}});
  const auto entry = a.first_goal_entry(samples);
  REQUIRE(entry.has_value());
  CHECK(entry->goal == n);
  CHECK(entry->sample == 2);
  // Starting inside is not an entry.
  CHECK_FALSE(a.first_goal_entry(path({{750, 6000, 300}, {750, 6100, 300}})).has_value());
}

TEST_CASE("landing spec shape and ordered traces") {
  const auto a = default_airspace();
  const auto f = build_landing_spec(a, "R08");
  CHECK(f == stl::parse_formula("F ((d_downwind_R08 > 0) & F ((d_base_R08 > 0) & F G (d_final_R08 > 0)))"));
  CHECK(build_landing_spec(a, "R26") ==
        stl::parse_formula("F ((d_downwind_R26 > 0) & F ((d_base_R26 > 0) & F G (d_final_R26 > 0)))"));
  CHECK_THROWS_AS(build_landing_spec(a, "N"), InvalidArgument);

  const auto ideal = ideal_r08();
  CHECK(rho(a, "R08", f, ideal) > 0.0);
  const std::vector<AircraftState> reversed(ideal.rbegin(), ideal.rend());
  CHECK(rho(a, "R08", f, reversed) < 0.0);
  // Straight into final without the pattern.
  CHECK(rho(a, "R08", f, path({{-3500, 0, 300}, {-2000, 0, 150}, {-500, 0, 50}, {0, 0, 20}})) < 0.0);

  const auto stages = landing_stage_specs(a, "R08");
  CHECK(stages[2] == f);
  CHECK(stages[0] == stl::parse_formula("F (d_downwind_R08 > 0)"));
  CHECK(stages[1] == stl::parse_formula("F ((d_downwind_R08 > 0) & F (d_base_R08 > 0))"));
}

TEST_CASE("takeoff spec") {
  const auto a = default_airspace();
  const auto f = build_takeoff_spec(a, "E");
  CHECK(f == stl::parse_formula("F (d_E > 0)"));
  CHECK_THROWS_AS(build_takeoff_spec(a, "downwind_R08"), InvalidArgument);
  const Box& e = a.region("E").box;
  const auto never = path({{0, 0, 0}, {2000, 0, 300}, {4000, 0, 300}});
  const double r_never = rho(a, "E", f, never);
  CHECK(r_never < 0.0);
  double best = -INFINITY;
  for (const auto& s : never) best = std::max(best, signed_distance(e, s));
  CHECK(r_never == best);
  const auto inside = path({{0, 0, 0}, {e.x_min + 50, e.center_y(), 300}});
  const double r_in = rho(a, "E", f, inside);
  CHECK(r_in == 50.0);
  const AircraftState center{e.center_x(), e.center_y(), e.center_z(), 0};
  CHECK(rho(a, "E", f, {center}) == signed_distance(e, center));
}

TEST_CASE("derive_channels matches pointwise distances") {
  const auto a = default_airspace();
  Rng rng(5);
  std::vector<AircraftState> states(30);
  for (auto& s : states) s = {rng.uniform(-5000, 5000), rng.uniform(-5000, 5000), rng.uniform(0, 800), 0};
  const std::vector<std::string> regions{"downwind_R26", "base_R26", "final_R26"};
  const auto goal = a.goal_index("R26");
  const auto t = derive_channels(a, states, goal, regions, 20.0);
  CHECK(t.channel_names().size() == regions.size() + 1);
  for (std::size_t i = 0; i < states.size(); ++i) {
    CHECK(t.timestamps()[i] == 20.0 * static_cast<double>(i));
    if (i > 0) CHECK(t.timestamps()[i] > t.timestamps()[i - 1]);
    for (const auto& r : regions) CHECK(t.channel(distance_channel(r))[i] == signed_distance(a.region(r), states[i]));
    CHECK(t.channel(kGoalChannel)[i] == signed_distance(a.region("R26"), states[i]));
  }
  const std::vector<double> bad_ts{0.0};
  CHECK_THROWS_AS(derive_channels(a, states, goal, regions, bad_ts), InvalidArgument);
  CHECK_THROWS_AS(ChannelSet(a, goal, {"altitude"}), InvalidArgument);
  const auto set = ChannelSet::for_formula(a, goal, build_landing_spec(a, "R26"));
  CHECK(set.size() == 3);
}

TEST_CASE("episodes for fixed pairs") {
  const auto a = default_airspace();
  Rng rng(1);
  const auto landing = make_episode(a, "N", "R26", rng);
  CHECK(landing.spec_kind == SpecKind::Landing);
  CHECK(landing.spec == build_landing_spec(a, "R26"));
  CHECK(a.region("N").box.contains(landing.start_state));
  CHECK(std::abs(landing.start_state.z - a.pattern_altitude()) <= 30.0);
  CHECK(std::abs(std::remainder(landing.start_state.chi, std::numbers::pi / 4)) < 1e-12);

  const auto takeoff = make_episode(a, "R08", "E", rng);
  CHECK(takeoff.spec_kind == SpecKind::Takeoff);
  CHECK(takeoff.spec == build_takeoff_spec(a, "E"));
  CHECK(a.region("R08").box.contains(takeoff.start_state));
  CHECK(takeoff.start_state.z <= a.landing_max_altitude());
  CHECK(std::abs(std::abs(takeoff.start_state.chi) - std::numbers::pi) < 1e-12);

  CHECK_THROWS_AS(make_episode(a, "N", "N", rng), InvalidArgument);
  CHECK_THROWS_AS(sample_episode(a, rng, {{"N"}, {"N"}}), InvalidArgument);
  CHECK_THROWS_AS(sample_episode(a, rng, {{"Q"}, {}}), InvalidArgument);
  const auto constrained = sample_episode(a, rng, {{"S"}, {"R08", "R26"}});
  CHECK(constrained.start_region == "S");
  CHECK(constrained.spec_kind == SpecKind::Landing);
}

TEST_CASE("sample_episode is uniform over ordered pairs") {
  const auto a = default_airspace();
  Rng rng(2024);
  std::map<std::pair<std::string, std::string>, int> counts;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto ep = sample_episode(a, rng);
    CHECK(ep.start_region != ep.goal_region);
    ++counts[{ep.start_region, ep.goal_region}];
  }
  CHECK(counts.size() == 90);
  const double p = 1.0 / 90;
  const double mean = n * p;
  const double sigma = std::sqrt(n * p * (1 - p));
  for (const auto& [pair, c] : counts) {
    INFO(pair.first, "->", pair.second);
    CHECK(std::abs(c - mean) <= 3 * sigma);
  }
}

TEST_CASE("demonstrations") {
  const auto a = default_airspace();
  const auto lib = dynamics::default_library();
  DemoConfig cfg;
  cfg.per_pair = 1;
  cfg.max_steps = 30;
  const auto demos = generate_demonstrations(a, lib, cfg);
  CHECK(demos.size() == 90);
  std::size_t reached = 0;
  for (const auto& d : demos) {
    CHECK(d.steps.size() >= 2);
    CHECK(d.samples.size() >= d.steps.size());
    CHECK(d.steps.front() == d.samples.front());
    if (a.is_runway(d.goal)) {
      CHECK(d.style != ApproachStyle::Departure);
    } else {
      CHECK(d.style == ApproachStyle::Departure);
    }
    if (d.reached_goal) {
      ++reached;
      CHECK(a.in_goal(a.goal_index(d.goal), d.samples.back()));
    }
  }
  CHECK(reached >= 60);
  const auto again = generate_demonstrations(a, lib, cfg);
  for (std::size_t i = 0; i < demos.size(); ++i) CHECK(again[i].samples == demos[i].samples);

  const auto wps = reference_waypoints(a, {-5000, 0, 300, 0}, "R08", ApproachStyle::Pattern);
  REQUIRE(wps.size() >= 3);
  CHECK(wps.back().z == 0.0);
  CHECK(a.region("downwind_R08").box.contains(wps[0].x, wps[0].y, wps[0].z));

  const auto grid = default_grid(a);
  CHECK(grid.origin[0] == a.bounds().x_min);
  CHECK(grid.dims[0] * grid.resolution[0] >= a.bounds().x_max - a.bounds().x_min);
  const auto maps = goal_costmaps(a, demos, grid);
  for (std::size_t g = 0; g < a.goal_set().size(); ++g) {
    const auto& m = maps.for_goal(g);
    double peak = 0.0;
    for (double v : m.values()) peak = std::max(peak, v);
    CHECK(peak == 1.0);
  }
}
