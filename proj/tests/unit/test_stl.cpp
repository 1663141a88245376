#include <doctest.h>

#include <cmath>
#include <sstream>

#include "../support/generators.hpp"
#include "../support/stl_oracle.hpp"
#include "stlplan/stl/parser.hpp"
#include "stlplan/stl/robustness.hpp"

using namespace stlplan;
using namespace stlplan::stl;

namespace {

Trace make_trace(std::vector<double> ts, std::vector<Trace::Channel> channels) {
  return Trace(std::move(ts), std::move(channels));
}

Trace series(const std::string& name, std::vector<double> values) {
  std::vector<double> ts(values.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<double>(i);
  return make_trace(std::move(ts), {{name, std::move(values)}});
}

}  // namespace

TEST_CASE("parse: eventually of a predicate") {
  const auto f = parse_formula("F (x > 2.5)");
  CHECK(f == Formula::eventually(Formula::predicate("x", Comparison::Greater, 2.5)));
  const auto& ev = std::get<Eventually>(f.node().value);
  CHECK(ev.interval.lower == 0.0);
  CHECK(ev.interval.is_unbounded());
}

TEST_CASE("parse: bounded always over a conjunction") {
  const auto f = parse_formula("G[0,5] (alt > 300 & alt < 400)");
  const auto expected =
      Formula::always(TimeInterval::make(0, 5), Formula::conjunction(Formula::predicate("alt", Comparison::Greater, 300),
                                                                      Formula::predicate("alt", Comparison::Less, 400)));
  CHECK(f == expected);
}

TEST_CASE("parse: nested landing shape") {
  const auto f = parse_formula("F ((in_r1 > 0) & F ((in_r2 > 0) & F G (in_r3 > 0)))");
  auto p = [](const char* s) { return Formula::predicate(s, Comparison::Greater, 0); };
  const auto expected = Formula::eventually(Formula::conjunction(
      p("in_r1"), Formula::eventually(Formula::conjunction(p("in_r2"), Formula::eventually(Formula::always(p("in_r3")))))));
  CHECK(f == expected);
  CHECK(f.depth() == 6);
}

TEST_CASE("parse: precedence and associativity") {
  auto p = [](const char* s) { return Formula::predicate(s, Comparison::Greater, 0); };
  CHECK(parse_formula("(a > 0) | (b > 0) & (c > 0)") ==
        Formula::disjunction(p("a"), Formula::conjunction(p("b"), p("c"))));
  CHECK(parse_formula("(a > 0) U (b > 0) U (c > 0)") == Formula::until(p("a"), Formula::until(p("b"), p("c"))));
  CHECK(parse_formula("! (a > 0) & (b > 0)") == Formula::conjunction(Formula::negation(p("a")), p("b")));
  CHECK(parse_formula("F (a > 0) U (b > 0)") == Formula::until(Formula::eventually(p("a")), p("b")));
  CHECK(parse_formula("F[1,inf] (a > 0)") == Formula::eventually(TimeInterval::unbounded_from(1), p("a")));
  CHECK(parse_formula("true") == Formula::truth());
  CHECK(parse_formula("(x > -1.5e2)") == Formula::predicate("x", Comparison::Greater, -150.0));
}

TEST_CASE("print: canonical forms") {
  CHECK(print_formula(Formula::truth()) == "true");
  CHECK(print_formula(Formula::predicate("x", Comparison::Greater, 0)) == "(x > 0)");
  CHECK(print_formula(Formula::eventually(Formula::predicate("x", Comparison::Greater, 0))) == "F (x > 0)");
  CHECK(print_formula(Formula::always(TimeInterval::make(0, 5), Formula::predicate("x", Comparison::Less, 2.5))) ==
        "G[0,5] (x < 2.5)");
}

TEST_CASE("print/parse round trip on random formulas") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto f = gen::formula(rng, 4);
    const auto text = print_formula(f);
    INFO(text);
    CHECK(parse_formula(text) == f);
  }
}

TEST_CASE("parse errors carry positions") {
  struct Case {
    const char* text;
    std::size_t line, column;
  };
  const Case cases[] = {
      {"", 1, 1},
      {"F", 1, 2},
      {"(x > )", 1, 6},
      {"(x >> 1)", 1, 5},
      {"X (x > 1)", 1, 1},
      {"(x > 1) &", 1, 10},
      {"(x > 1) (y > 2)", 1, 9},
      {"F[2,1] (x > 1)", 1, 6},
      {"(x > 1)\n  & $", 2, 5},
  };
  for (const auto& c : cases) {
    INFO(c.text);
    try {
      parse_formula(c.text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == c.line);
      CHECK(e.column() == c.column);
      CHECK(e.code() == "parse_error");
      CHECK(std::string(e.what()).find("line " + std::to_string(c.line)) == 0);
    }
  }
}

TEST_CASE("robustness: spec examples") {
  CHECK(robustness(parse_formula("(x > 0)"), series("x", {5}), 0) == 5.0);
  CHECK(robustness(parse_formula("F (x > 2.5)"), series("x", {0, 1, 2, 3}), 0) == 0.5);
  const auto xy = make_trace({0, 1, 2}, {{"x", {2, 2, 2}}, {"y", {-1, -1, 3}}});
  CHECK(robustness(parse_formula("(x > 1) U (y > 0)"), xy, 0) == 1.0);
  CHECK(robustness_prefix(parse_formula("F (in_goal > 0)"), series("in_goal", {-1, -1, 0.3})) == doctest::Approx(0.3));
}

TEST_CASE("robustness: single-sample trace") {
  const auto t = series("x", {2});
  for (const char* text : {"F (x > 1)", "G (x > 1)", "(x > 1) U (x > 0)", "! (x > 1)"}) {
    const auto f = parse_formula(text);
    CHECK(robustness_prefix(f, t) == robustness(f, t, 0));
  }
}

TEST_CASE("robustness: errors") {
  const auto t = series("x", {1, 2, 3});
  CHECK_THROWS_AS(robustness(parse_formula("(y > 0)"), t, 0), EvaluationError);
  CHECK_THROWS_AS(robustness(parse_formula("(x > 0)"), t, 3), EvaluationError);
  CHECK_THROWS_AS(robustness(parse_formula("F[5,6] (x > 0)"), t, 0), EvaluationError);
  CHECK(robustness(parse_formula("F[1,2] (x > 0)"), t, 0) == 3.0);
  CHECK_THROWS_AS(robustness(parse_formula("F[1,2] (x > 0)"), t, 2), EvaluationError);
}

TEST_CASE("robustness equals the direct-recursion oracle") {
  Rng rng(2024);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto f = gen::formula(rng, 4);
    const auto w = gen::trace(rng, 12);
    const auto signal = robustness_signal(f, w);
    for (std::size_t t = 0; t < w.size(); ++t) {
      const auto expected = oracle::rho(f, w, t);
      INFO(print_formula(f), " at ", t);
      if (expected) {
        CHECK(signal[t] == *expected);
        ++compared;
      } else {
        CHECK(std::isnan(signal[t]));
        CHECK_THROWS_AS(robustness(f, w, t), EvaluationError);
      }
    }
  }
  CHECK(compared > 1000);
}

TEST_CASE("robustness sign agrees with the Boolean semantics") {
  Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    const auto f = gen::formula(rng, 3);
    const auto w = gen::trace(rng, 10);
    const auto signal = robustness_signal(f, w);
    for (std::size_t t = 0; t < w.size(); ++t) {
      if (std::isnan(signal[t])) continue;
      INFO(print_formula(f));
      if (signal[t] > 0) CHECK(oracle::holds(f, w, t));
      if (signal[t] < 0) CHECK_FALSE(oracle::holds(f, w, t));
    }
  }
}

TEST_CASE("negation duality and eventually monotonicity") {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto f = gen::formula(rng, 3);
    const auto w = gen::trace(rng, 10);
    const auto pos = robustness_signal(f, w);
    const auto neg = robustness_signal(Formula::negation(f), w);
    for (std::size_t t = 0; t < w.size(); ++t) {
      if (std::isnan(pos[t])) {
        CHECK(std::isnan(neg[t]));
      } else {
        CHECK(neg[t] == -pos[t]);
      }
    }
  }
  for (int i = 0; i < 300; ++i) {
    const auto f = Formula::eventually(Formula::predicate("a", Comparison::Greater, gen::threshold(rng)));
    std::vector<double> values;
    double last = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 10; ++k) {
      values.push_back(rng.uniform(-5, 5));
      const double r = robustness_prefix(f, series("a", values));
      CHECK(r >= last);
      last = r;
    }
  }
}

TEST_CASE("trace validation and CSV round trip") {
  CHECK_THROWS_AS(Trace({}, {}), InvalidArgument);
  CHECK_THROWS_AS(Trace({0, 0}, {{"x", {1, 2}}}), InvalidArgument);
  CHECK_THROWS_AS(Trace({0, 1}, {{"x", {1}}}), InvalidArgument);
  CHECK_THROWS_AS(Trace({0, 1}, {{"x", {1, 2}}, {"x", {1, 2}}}), InvalidArgument);
  const auto t = make_trace({0, 0.5, 2}, {{"x", {1.25, -3, 1e-9}}, {"y", {0, 1, 2}}});
  std::stringstream ss;
  write_trace_csv(ss, t);
  const auto back = read_trace_csv(ss);
  CHECK(back.channel_names() == t.channel_names());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(back.timestamps()[i] == t.timestamps()[i]);
    CHECK(back.channel("x")[i] == t.channel("x")[i]);
  }
  std::stringstream bad("t,x\n0,1\n1\n");
  CHECK_THROWS(read_trace_csv(bad));
}
