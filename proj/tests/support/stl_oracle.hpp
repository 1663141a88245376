#pragma once

// Direct-recursion reference monitor for the sampled-time semantics. It
// re-derives every window by scanning all samples and shares no code with the
// library evaluator. std::nullopt stands for "undefined" (an empty window
// somewhere below); any undefined operand makes the result undefined.

#include <algorithm>
#include <limits>
#include <optional>
#include <variant>

#include "stlplan/stl/formula.hpp"
#include "stlplan/stl/trace.hpp"

namespace oracle {

using stlplan::stl::Formula;
using stlplan::stl::TimeInterval;
using stlplan::stl::Trace;
using Value = std::optional<double>;

inline Value vmin(Value a, Value b) {
  if (!a || !b) return std::nullopt;
  return std::min(*a, *b);
}

inline Value vmax(Value a, Value b) {
  if (!a || !b) return std::nullopt;
  return std::max(*a, *b);
}

inline bool in_window(const Trace& w, std::size_t t, std::size_t tp, const TimeInterval& iv) {
  const double dt = w.timestamps()[tp] - w.timestamps()[t];
  return tp >= t && dt >= iv.lower && dt <= iv.upper;
}

inline Value rho(const Formula& f, const Trace& w, std::size_t t) {
  namespace s = stlplan::stl;
  const auto& node = f.node().value;
  if (std::holds_alternative<s::True>(node)) return std::numeric_limits<double>::max();
  if (const auto* p = std::get_if<s::Predicate>(&node)) {
    const double x = w.channel(p->signal)[t];
    return p->comparison == s::Comparison::Greater ? x - p->threshold : p->threshold - x;
  }
  if (const auto* n = std::get_if<s::Not>(&node)) {
    const Value v = rho(n->child, w, t);
    return v ? Value(-*v) : std::nullopt;
  }
  if (const auto* n = std::get_if<s::And>(&node)) return vmin(rho(n->lhs, w, t), rho(n->rhs, w, t));
  if (const auto* n = std::get_if<s::Or>(&node)) return vmax(rho(n->lhs, w, t), rho(n->rhs, w, t));
  if (const auto* n = std::get_if<s::Eventually>(&node)) {
    Value best;
    bool any = false;
    bool undefined = false;
    for (std::size_t tp = 0; tp < w.size(); ++tp) {
      if (!in_window(w, t, tp, n->interval)) continue;
      const Value v = rho(n->child, w, tp);
      if (!v) undefined = true;
      best = any ? vmax(best, v) : v;
      any = true;
    }
    if (!any || undefined) return std::nullopt;
    return best;
  }
  if (const auto* n = std::get_if<s::Always>(&node)) {
    Value best;
    bool any = false;
    bool undefined = false;
    for (std::size_t tp = 0; tp < w.size(); ++tp) {
      if (!in_window(w, t, tp, n->interval)) continue;
      const Value v = rho(n->child, w, tp);
      if (!v) undefined = true;
      best = any ? vmin(best, v) : v;
      any = true;
    }
    if (!any || undefined) return std::nullopt;
    return best;
  }
  const auto& u = std::get<s::Until>(node);
  Value best;
  bool any = false;
  bool undefined = false;
  for (std::size_t tp = 0; tp < w.size(); ++tp) {
    if (!in_window(w, t, tp, u.interval)) continue;
    Value term = rho(u.rhs, w, tp);
    for (std::size_t k = t; k <= tp; ++k) term = vmin(term, rho(u.lhs, w, k));
    if (!term) undefined = true;
    best = any ? vmax(best, term) : term;
    any = true;
  }
  if (!any || undefined) return std::nullopt;
  return best;
}

// Boolean sampled semantics, evaluated independently of the quantitative one.
inline bool holds(const Formula& f, const Trace& w, std::size_t t) {
  namespace s = stlplan::stl;
  const auto& node = f.node().value;
  if (std::holds_alternative<s::True>(node)) return true;
  if (const auto* p = std::get_if<s::Predicate>(&node)) {
    const double x = w.channel(p->signal)[t];
    return p->comparison == s::Comparison::Greater ? x > p->threshold : x < p->threshold;
  }
  if (const auto* n = std::get_if<s::Not>(&node)) return !holds(n->child, w, t);
  if (const auto* n = std::get_if<s::And>(&node)) return holds(n->lhs, w, t) && holds(n->rhs, w, t);
  if (const auto* n = std::get_if<s::Or>(&node)) return holds(n->lhs, w, t) || holds(n->rhs, w, t);
  if (const auto* n = std::get_if<s::Eventually>(&node)) {
    for (std::size_t tp = 0; tp < w.size(); ++tp) {
      if (in_window(w, t, tp, n->interval) && holds(n->child, w, tp)) return true;
    }
    return false;
  }
  if (const auto* n = std::get_if<s::Always>(&node)) {
    for (std::size_t tp = 0; tp < w.size(); ++tp) {
      if (in_window(w, t, tp, n->interval) && !holds(n->child, w, tp)) return false;
    }
    return true;
  }
  const auto& u = std::get<s::Until>(node);
  for (std::size_t tp = 0; tp < w.size(); ++tp) {
    if (!in_window(w, t, tp, u.interval) || !holds(u.rhs, w, tp)) continue;
    bool ok = true;
    for (std::size_t k = t; k <= tp && ok; ++k) ok = holds(u.lhs, w, k);
    if (ok) return true;
  }
  return false;
}

}  // namespace oracle
