#include "stlplan/stl/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <type_traits>

#include "stlplan/common/error.hpp"

namespace stlplan::stl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_number(double value) {
  if (value == std::numeric_limits<double>::infinity()) return "inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

std::string format_interval(const TimeInterval& iv) {
  if (iv.is_default()) return "";
  return "[" + format_number(iv.lower) + "," + format_number(iv.upper) + "]";
}

}  // namespace

TimeInterval TimeInterval::make(double lower, double upper) {
  if (!std::isfinite(lower) || lower < 0.0 || std::isnan(upper) || upper < lower) {
    throw InvalidArgument("time interval must satisfy 0 <= lower <= upper, got [" + format_number(lower) + "," +
                          format_number(upper) + "]");
  }
  return TimeInterval{lower, upper};
}

struct FormulaFactory {
  static Formula make(FormulaNode::Variant v);
};

Formula Formula::truth() { return FormulaFactory::make(True{}); }

Formula Formula::predicate(std::string signal, Comparison comparison, double threshold) {
  if (signal.empty()) throw InvalidArgument("predicate signal name must not be empty");
  if (!std::isfinite(threshold)) throw InvalidArgument("predicate threshold must be finite");
  return FormulaFactory::make(Predicate{std::move(signal), comparison, threshold});
}

Formula Formula::negation(Formula child) { return FormulaFactory::make(Not{std::move(child)}); }

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return FormulaFactory::make(And{std::move(lhs), std::move(rhs)});
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return FormulaFactory::make(Or{std::move(lhs), std::move(rhs)});
}

Formula Formula::eventually(TimeInterval interval, Formula child) {
  interval = TimeInterval::make(interval.lower, interval.upper);
  return FormulaFactory::make(Eventually{interval, std::move(child)});
}

Formula Formula::always(TimeInterval interval, Formula child) {
  interval = TimeInterval::make(interval.lower, interval.upper);
  return FormulaFactory::make(Always{interval, std::move(child)});
}

Formula Formula::until(TimeInterval interval, Formula lhs, Formula rhs) {
  interval = TimeInterval::make(interval.lower, interval.upper);
  return FormulaFactory::make(Until{interval, std::move(lhs), std::move(rhs)});
}

std::size_t Formula::depth() const {
  return std::visit(overloaded{
                        [](const True&) -> std::size_t { return 0; },
                        [](const Predicate&) -> std::size_t { return 0; },
                        [](const Not& n) { return 1 + n.child.depth(); },
                        [](const And& n) { return 1 + std::max(n.lhs.depth(), n.rhs.depth()); },
                        [](const Or& n) { return 1 + std::max(n.lhs.depth(), n.rhs.depth()); },
                        [](const Eventually& n) { return 1 + n.child.depth(); },
                        [](const Always& n) { return 1 + n.child.depth(); },
                        [](const Until& n) { return 1 + std::max(n.lhs.depth(), n.rhs.depth()); },
                    },
                    node_->value);
}

std::set<std::string> Formula::signals() const {
  std::set<std::string> out;
  auto collect = [&out](const Formula& f, auto& self) -> void {
    std::visit(overloaded{
                   [](const True&) {},
                   [&](const Predicate& p) { out.insert(p.signal); },
                   [&](const Not& n) { self(n.child, self); },
                   [&](const And& n) { self(n.lhs, self), self(n.rhs, self); },
                   [&](const Or& n) { self(n.lhs, self), self(n.rhs, self); },
                   [&](const Eventually& n) { self(n.child, self); },
                   [&](const Always& n) { self(n.child, self); },
                   [&](const Until& n) { self(n.lhs, self), self(n.rhs, self); },
               },
               f.node().value);
  };
  collect(*this, collect);
  return out;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& va = a.node_->value;
  const auto& vb = b.node_->value;
  if (va.index() != vb.index()) return false;
  return std::visit(
      [&vb](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(vb);
        if constexpr (std::is_same_v<T, True> || std::is_same_v<T, Predicate>) {
          return x == y;
        } else if constexpr (std::is_same_v<T, Not>) {
          return x.child == y.child;
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          return x.lhs == y.lhs && x.rhs == y.rhs;
        } else if constexpr (std::is_same_v<T, Until>) {
          return x.interval == y.interval && x.lhs == y.lhs && x.rhs == y.rhs;
        } else {
          return x.interval == y.interval && x.child == y.child;
        }
      },
      va);
}

Formula FormulaFactory::make(FormulaNode::Variant v) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{std::move(v)}));
}

std::string print_formula(const Formula& f) {
  return std::visit(overloaded{
                        [](const True&) -> std::string { return "true"; },
                        [](const Predicate& p) {
                          return "(" + p.signal + (p.comparison == Comparison::Greater ? " > " : " < ") +
                                 format_number(p.threshold) + ")";
                        },
                        [](const Not& n) { return "! " + print_formula(n.child); },
                        [](const And& n) { return "(" + print_formula(n.lhs) + " & " + print_formula(n.rhs) + ")"; },
                        [](const Or& n) { return "(" + print_formula(n.lhs) + " | " + print_formula(n.rhs) + ")"; },
                        [](const Eventually& n) {
                          return "F" + format_interval(n.interval) + " " + print_formula(n.child);
                        },
                        [](const Always& n) {
                          return "G" + format_interval(n.interval) + " " + print_formula(n.child);
                        },
                        [](const Until& n) {
                          return "(" + print_formula(n.lhs) + " U" + format_interval(n.interval) + " " +
                                 print_formula(n.rhs) + ")";
                        },
                    },
                    f.node().value);
}

}  // namespace stlplan::stl
