#include "stlplan/dynamics/kinematics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "stlplan/common/error.hpp"

namespace stlplan::dynamics {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double wrap_angle(double rad) {
  double w = std::fmod(rad + kPi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  w -= kPi;
  // fmod can land exactly on the excluded upper end after the shift.
  if (w >= kPi) w -= kTwoPi;
  return w;
}

void MotionPrimitive::validate() const {
  if (!std::isfinite(v) || !std::isfinite(v_h) || !std::isfinite(phi)) {
    throw InvalidArgument("primitive " + std::to_string(id) + " has non-finite inputs");
  }
  if (!(v > std::abs(v_h))) {
    throw InvalidArgument("primitive " + std::to_string(id) + " needs v > |v_h|");
  }
  if (!(std::abs(phi) < kPi / 2.0)) {
    throw InvalidArgument("primitive " + std::to_string(id) + " needs |phi| < pi/2");
  }
}

double MotionPrimitive::horizontal_speed() const { return std::sqrt(v * v - v_h * v_h); }

double MotionPrimitive::turn_rate() const { return units::kGravity * std::tan(phi) / horizontal_speed(); }

MotionPrimitive make_primitive(std::size_t id, double v_kt, double vh_fpm, double dchi_deg, double horizon_s) {
  if (!(horizon_s > 0.0)) throw InvalidArgument("primitive horizon must be positive");
  MotionPrimitive p;
  p.id = id;
  p.v = v_kt * units::kKnot;
  p.v_h = vh_fpm * units::kFeetPerMinute;
  if (!(p.v > std::abs(p.v_h))) throw InvalidArgument("primitive " + std::to_string(id) + " needs v > |v_h|");
  const double rate = units::deg_to_rad(dchi_deg) / horizon_s;
  p.phi = std::atan(rate * p.horizontal_speed() / units::kGravity);
  p.validate();
  return p;
}

PrimitiveLibrary::PrimitiveLibrary(std::vector<MotionPrimitive> primitives, double horizon, double sample_period)
    : primitives_(std::move(primitives)), horizon_(horizon), sample_period_(sample_period) {
  if (primitives_.empty()) throw InvalidArgument("primitive library must not be empty");
  if (!(horizon_ > 0.0) || !(sample_period_ > 0.0)) {
    throw InvalidArgument("library horizon and sample period must be positive");
  }
  const double ratio = horizon_ / sample_period_;
  const double steps = std::round(ratio);
  if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidArgument("library horizon must be an integer multiple of the sample period");
  }
  samples_ = static_cast<std::size_t>(steps) + 1;
  for (std::size_t i = 0; i < primitives_.size(); ++i) {
    if (primitives_[i].id != i) throw InvalidArgument("primitive ids must be 0..n-1 in order");
    primitives_[i].validate();
  }
}

const MotionPrimitive& PrimitiveLibrary::at(std::size_t id) const {
  if (id >= primitives_.size()) {
    throw InvalidArgument("unknown primitive id " + std::to_string(id) + " (library has " +
                          std::to_string(primitives_.size()) + ")");
  }
  return primitives_[id];
}

PrimitiveLibrary default_library() {
  constexpr double kHorizon = 20.0;
  std::vector<MotionPrimitive> prims;
  for (double v_kt : {70.0, 90.0}) {
    for (double vh_fpm : {-500.0, 0.0, 500.0}) {
      for (double dchi : {-90.0, -45.0, 0.0, 45.0, 90.0}) {
        prims.push_back(make_primitive(prims.size(), v_kt, vh_fpm, dchi, kHorizon));
      }
    }
  }
  return PrimitiveLibrary(std::move(prims), kHorizon, 1.0);
}

PrimitiveLibrary library_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    const double horizon = j.at("horizon_s").get<double>();
    const double period = j.at("sample_period_s").get<double>();
    std::vector<MotionPrimitive> prims;
    for (const auto& p : j.at("primitives")) {
      prims.push_back(make_primitive(prims.size(), p.at("v_kt").get<double>(), p.at("vh_fpm").get<double>(),
                                     p.at("dchi_deg").get<double>(), horizon));
    }
    return PrimitiveLibrary(std::move(prims), horizon, period);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed primitive library JSON: ") + e.what());
  }
}

PrimitiveLibrary load_library_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open primitive library '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return library_from_json_text(ss.str());
}

Segment integrate(const AircraftState& start, const MotionPrimitive& primitive, double horizon,
                  double sample_period) {
  primitive.validate();
  if (!(horizon > 0.0) || !(sample_period > 0.0)) throw InvalidArgument("horizon and sample period must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(horizon / sample_period));
  const double v2d = primitive.horizontal_speed();
  const double rate = primitive.turn_rate();

  Segment seg;
  seg.states.reserve(steps + 1);
  const double c0 = std::cos(start.chi);
  const double s0 = std::sin(start.chi);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * sample_period;
    AircraftState s;
    s.z = start.z + primitive.v_h * t;
    if (rate == 0.0) {
      s.x = start.x + v2d * t * c0;
      s.y = start.y + v2d * t * s0;
      s.chi = wrap_angle(start.chi);
    } else {
      const double radius = v2d / rate;
      const double heading = start.chi + rate * t;
      s.x = start.x + radius * (std::sin(heading) - s0);
      s.y = start.y - radius * (std::cos(heading) - c0);
      s.chi = wrap_angle(heading);
    }
    seg.states.push_back(s);
  }
  return seg;
}

Transition transition(const AircraftState& state, std::size_t primitive_id, const PrimitiveLibrary& library) {
  Segment seg = integrate(state, library.at(primitive_id), library.horizon(), library.sample_period());
  const AircraftState next = seg.end();
  return Transition{next, std::move(seg)};
}

void write_segment_csv(std::ostream& out, const Segment& segment, double sample_period, double t0, bool header) {
  if (header) out << "t,x,y,z,chi\n";
  char buf[64];
  auto put = [&](double v) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, end - buf);
  };
  for (std::size_t i = 0; i < segment.states.size(); ++i) {
    const auto& s = segment.states[i];
    put(t0 + static_cast<double>(i) * sample_period);
    for (double v : {s.x, s.y, s.z, s.chi}) {
      out << ',';
      put(v);
    }
    out << '\n';
  }
}

}  // namespace stlplan::dynamics
