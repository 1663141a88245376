#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <set>
#include <string>
#include <variant>

namespace stlplan::stl {

/// Closed time window [lower, upper] in seconds, relative to the evaluation
/// instant. `upper` may be +infinity; unbounded windows are clipped to the
/// end of the trace during evaluation.
struct TimeInterval {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  /// Validating constructor: 0 <= lower <= upper, lower finite.
  static TimeInterval make(double lower, double upper);
  static TimeInterval unbounded_from(double lower) { return make(lower, std::numeric_limits<double>::infinity()); }

  bool is_unbounded() const { return upper == std::numeric_limits<double>::infinity(); }
  bool is_default() const { return lower == 0.0 && is_unbounded(); }

  bool operator==(const TimeInterval&) const = default;
};

enum class Comparison { Greater, Less };

struct FormulaNode;

/// Immutable STL syntax tree. Copies share structure; equality is structural.
class Formula {
 public:
  static Formula truth();
  static Formula predicate(std::string signal, Comparison comparison, double threshold);
  static Formula negation(Formula child);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula eventually(TimeInterval interval, Formula child);
  static Formula eventually(Formula child) { return eventually(TimeInterval{}, std::move(child)); }
  static Formula always(TimeInterval interval, Formula child);
  static Formula always(Formula child) { return always(TimeInterval{}, std::move(child)); }
  static Formula until(TimeInterval interval, Formula lhs, Formula rhs);
  static Formula until(Formula lhs, Formula rhs) { return until(TimeInterval{}, std::move(lhs), std::move(rhs)); }

  const FormulaNode& node() const { return *node_; }

  /// Operator nesting depth; atoms have depth 0.
  std::size_t depth() const;
  /// Every signal name referenced by a predicate.
  std::set<std::string> signals() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  friend struct FormulaFactory;
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}

  std::shared_ptr<const FormulaNode> node_;
};

struct True {
  bool operator==(const True&) const = default;
};

struct Predicate {
  std::string signal;
  Comparison comparison = Comparison::Greater;
  double threshold = 0.0;
  bool operator==(const Predicate&) const = default;
};

struct Not {
  Formula child;
};

struct And {
  Formula lhs, rhs;
};

struct Or {
  Formula lhs, rhs;
};

struct Eventually {
  TimeInterval interval;
  Formula child;
};

struct Always {
  TimeInterval interval;
  Formula child;
};

struct Until {
  TimeInterval interval;
  Formula lhs, rhs;
};

struct FormulaNode {
  using Variant = std::variant<True, Predicate, Not, And, Or, Eventually, Always, Until>;
  Variant value;
};

/// Canonical, fully parenthesized text. Binary operators are wrapped in
/// parentheses, predicates print as `(x > 2.5)`, default [0,inf) intervals
/// are omitted. The output re-parses to an equal tree.
std::string print_formula(const Formula& f);

}  // namespace stlplan::stl
