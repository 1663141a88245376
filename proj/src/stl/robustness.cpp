#include "stlplan/stl/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>

namespace stlplan::stl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

// NaN marks "undefined" and must win over any defined operand.
double nan_min(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return kUndefined;
  return std::min(a, b);
}

double nan_max(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return kUndefined;
  return std::max(a, b);
}

struct Window {
  std::size_t lo;
  std::size_t hi;  // inclusive; empty when lo > hi
  bool empty() const { return lo > hi; }
};

// Window of samples t' with ts[t'] - ts[t] in [a, b], for every t.
std::vector<Window> windows(std::span<const double> ts, const TimeInterval& iv) {
  const std::size_t n = ts.size();
  std::vector<Window> out(n);
  std::size_t lo = 0;
  std::size_t past_hi = 0;
  for (std::size_t t = 0; t < n; ++t) {
    lo = std::max(lo, t);
    while (lo < n && ts[lo] - ts[t] < iv.lower) ++lo;
    past_hi = std::max(past_hi, t);
    while (past_hi < n && ts[past_hi] - ts[t] <= iv.upper) ++past_hi;
    // past_hi >= t + 1 since ts[t] - ts[t] = 0 <= upper.
    out[t] = Window{lo, past_hi - 1};
  }
  return out;
}

class Evaluator {
 public:
  explicit Evaluator(const Trace& trace) : trace_(trace), ts_(trace.timestamps()) {}

  std::vector<double> eval(const Formula& f) {
    return std::visit(overloaded{
                          [&](const True&) { return std::vector<double>(ts_.size(), kTrueRobustness); },
                          [&](const Predicate& p) { return predicate(p); },
                          [&](const Not& n) {
                            auto s = eval(n.child);
                            for (auto& v : s) v = -v;
                            return s;
                          },
                          [&](const And& n) { return combine(eval(n.lhs), eval(n.rhs), nan_min); },
                          [&](const Or& n) { return combine(eval(n.lhs), eval(n.rhs), nan_max); },
                          [&](const Eventually& n) { return sliding(eval(n.child), n.interval, "F", true); },
                          [&](const Always& n) { return sliding(eval(n.child), n.interval, "G", false); },
                          [&](const Until& n) { return until(eval(n.lhs), eval(n.rhs), n.interval); },
                      },
                      f.node().value);
  }

  const std::optional<std::string>& first_empty_window() const { return empty_window_; }

 private:
  std::vector<double> predicate(const Predicate& p) {
    const auto x = trace_.channel(p.signal);
    std::vector<double> s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      s[i] = p.comparison == Comparison::Greater ? x[i] - p.threshold : p.threshold - x[i];
    }
    return s;
  }

  template <class Op>
  static std::vector<double> combine(std::vector<double> a, const std::vector<double>& b, Op op) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = op(a[i], b[i]);
    return a;
  }

  void note_empty(const char* op, const TimeInterval& iv, std::size_t t) {
    if (empty_window_) return;
    std::string upper = iv.is_unbounded() ? "inf" : std::to_string(iv.upper);
    empty_window_ = std::string("no sample falls in the window of ") + op + "[" + std::to_string(iv.lower) + "," +
                    upper + "] evaluated at sample " + std::to_string(t);
  }

  // Windowed max (eventually) or min (always) with a monotone deque. The
  // windows' endpoints are non-decreasing in t, so each index enters and
  // leaves the deque once.
  std::vector<double> sliding(const std::vector<double>& child, const TimeInterval& iv, const char* op,
                              bool take_max) {
    const std::size_t n = child.size();
    const auto win = windows(ts_, iv);
    std::vector<std::size_t> nan_prefix(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) nan_prefix[i + 1] = nan_prefix[i] + (std::isnan(child[i]) ? 1 : 0);

    auto dominates = [take_max](double a, double b) { return take_max ? a >= b : a <= b; };
    std::vector<double> out(n, kUndefined);
    std::deque<std::size_t> dq;
    std::size_t next = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const Window w = win[t];
      if (w.empty()) {
        note_empty(op, iv, t);
        continue;
      }
      for (; next <= w.hi; ++next) {
        if (std::isnan(child[next])) continue;
        while (!dq.empty() && dominates(child[next], child[dq.back()])) dq.pop_back();
        dq.push_back(next);
      }
      while (!dq.empty() && dq.front() < w.lo) dq.pop_front();
      if (nan_prefix[w.hi + 1] - nan_prefix[w.lo] > 0) continue;
      out[t] = child[dq.front()];
    }
    return out;
  }

  std::vector<double> until(const std::vector<double>& lhs, const std::vector<double>& rhs,
                            const TimeInterval& iv) {
    const std::size_t n = lhs.size();
    const auto win = windows(ts_, iv);
    std::vector<double> out(n, kUndefined);
    if (iv.is_unbounded()) {
      // Untimed until from each index s: U0(s) = min(lhs[s], max(rhs[s], U0(s+1))).
      std::vector<double> u0(n + 1, -kTrueRobustness);
      u0[n - 1] = nan_min(lhs[n - 1], rhs[n - 1]);
      for (std::size_t s = n - 1; s-- > 0;) u0[s] = nan_min(lhs[s], nan_max(rhs[s], u0[s + 1]));
      for (std::size_t t = 0; t < n; ++t) {
        const Window w = win[t];
        if (w.empty()) {
          note_empty("U", iv, t);
          continue;
        }
        double prefix = kTrueRobustness;
        for (std::size_t k = t; k < w.lo; ++k) prefix = nan_min(prefix, lhs[k]);
        out[t] = nan_min(prefix, u0[w.lo]);
      }
      return out;
    }
    for (std::size_t t = 0; t < n; ++t) {
      const Window w = win[t];
      if (w.empty()) {
        note_empty("U", iv, t);
        continue;
      }
      double running = kTrueRobustness;
      double best = -kTrueRobustness;
      bool first = true;
      for (std::size_t k = t; k <= w.hi; ++k) {
        running = nan_min(running, lhs[k]);
        if (k < w.lo) continue;
        const double term = nan_min(rhs[k], running);
        best = first ? term : nan_max(best, term);
        first = false;
      }
      out[t] = best;
    }
    return out;
  }

  const Trace& trace_;
  std::span<const double> ts_;
  std::optional<std::string> empty_window_;
};

void check_signals(const Formula& f, const Trace& trace) {
  for (const auto& name : f.signals()) {
    if (!trace.has_channel(name)) throw EvaluationError("trace has no channel '" + name + "'");
  }
}

}  // namespace

std::vector<double> robustness_signal(const Formula& f, const Trace& trace) {
  check_signals(f, trace);
  Evaluator ev(trace);
  return ev.eval(f);
}

double robustness(const Formula& f, const Trace& trace, std::size_t t_index) {
  if (t_index >= trace.size()) {
    throw EvaluationError("sample index " + std::to_string(t_index) + " out of range for trace of " +
                          std::to_string(trace.size()) + " samples");
  }
  check_signals(f, trace);
  Evaluator ev(trace);
  const auto s = ev.eval(f);
  if (std::isnan(s[t_index])) {
    throw EvaluationError(ev.first_empty_window().value_or("evaluation window is empty"));
  }
  return s[t_index];
}

double robustness_prefix(const Formula& f, const Trace& trace) { return robustness(f, trace, 0); }

}  // namespace stlplan::stl
