#pragma once

// Seeded random generators for property tests.

#include <cmath>
#include <string>
#include <vector>

#include "stlplan/common/random.hpp"
#include "stlplan/stl/formula.hpp"
#include "stlplan/stl/trace.hpp"

namespace gen {

using stlplan::Rng;
using stlplan::stl::Comparison;
using stlplan::stl::Formula;
using stlplan::stl::TimeInterval;
using stlplan::stl::Trace;

inline const std::vector<std::string>& signal_names() {
  static const std::vector<std::string> names{"a", "b", "c"};
  return names;
}

// Thresholds on a coarse grid so predicate values often tie, which
// exercises tie handling in min/max.
inline double threshold(Rng& rng) { return std::round(rng.uniform(-4.0, 4.0) * 4.0) / 4.0; }

inline TimeInterval interval(Rng& rng) {
  switch (rng.index(4)) {
    case 0: return TimeInterval{};
    case 1: return TimeInterval::unbounded_from(static_cast<double>(rng.index(4)));
    default: {
      const double lo = static_cast<double>(rng.index(5));
      return TimeInterval::make(lo, lo + static_cast<double>(rng.index(6)));
    }
  }
}

inline Formula formula(Rng& rng, std::size_t depth) {
  if (depth == 0 || rng.uniform01() < 0.2) {
    if (rng.uniform01() < 0.1) return Formula::truth();
    return Formula::predicate(signal_names()[rng.index(3)],
                              rng.uniform01() < 0.5 ? Comparison::Greater : Comparison::Less, threshold(rng));
  }
  switch (rng.index(6)) {
    case 0: return Formula::negation(formula(rng, depth - 1));
    case 1: return Formula::conjunction(formula(rng, depth - 1), formula(rng, depth - 1));
    case 2: return Formula::disjunction(formula(rng, depth - 1), formula(rng, depth - 1));
    case 3: return Formula::eventually(interval(rng), formula(rng, depth - 1));
    case 4: return Formula::always(interval(rng), formula(rng, depth - 1));
    default: return Formula::until(interval(rng), formula(rng, depth - 1), formula(rng, depth - 1));
  }
}

// Strictly increasing timestamps with integer or fractional gaps.
inline Trace trace(Rng& rng, std::size_t max_len) {
  const std::size_t n = 1 + rng.index(max_len);
  std::vector<double> ts(n);
  double t = 0.0;
  const bool unit = rng.uniform01() < 0.5;
  for (std::size_t i = 0; i < n; ++i) {
    ts[i] = t;
    t += unit ? 1.0 : 0.5 * static_cast<double>(1 + rng.index(4));
  }
  std::vector<Trace::Channel> channels;
  for (const auto& name : signal_names()) {
    std::vector<double> v(n);
    for (auto& x : v) x = std::round(rng.uniform(-5.0, 5.0) * 2.0) / 2.0;
    channels.emplace_back(name, std::move(v));
  }
  return Trace(std::move(ts), std::move(channels));
}

}  // namespace gen
