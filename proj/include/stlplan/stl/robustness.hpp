#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "stlplan/common/error.hpp"
#include "stlplan/stl/formula.hpp"
#include "stlplan/stl/trace.hpp"

namespace stlplan::stl {

/// Raised for a missing channel, an out-of-range sample index, or a temporal
/// operator whose window contains no sample.
class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& message) : Error("evaluation_error", message) {}
};

/// Robustness of `true`. Kept finite so arithmetic on robustness never
/// produces NaN.
inline constexpr double kTrueRobustness = std::numeric_limits<double>::max();

/// Sampled-time quantitative semantics of `f` at sample `t_index`:
///
///   (x > c)        x[t] - c          (x < c)   c - x[t]
///   !f             -rho(f)           f & g     min,   f | g   max
///   F[a,b] f       max of rho(f, t') over samples with t' - t in [a,b]
///   G[a,b] f       min of the same
///   f U[a,b] g     max over such t' of min(rho(g,t'), min_{t<=t''<=t'} rho(f,t''))
double robustness(const Formula& f, const Trace& trace, std::size_t t_index);

/// Robustness of the whole trace, evaluated at its first sample.
double robustness_prefix(const Formula& f, const Trace& trace);

/// rho(f, trace, t) for every sample t. Samples whose evaluation would need
/// an empty window hold NaN; the scalar entry points turn that into an error.
std::vector<double> robustness_signal(const Formula& f, const Trace& trace);

}  // namespace stlplan::stl
