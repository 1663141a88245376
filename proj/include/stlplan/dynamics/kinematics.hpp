#pragma once

#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

namespace stlplan::dynamics {

namespace units {
inline constexpr double kKnot = 0.514444;               // m/s
inline constexpr double kFoot = 0.3048;                 // m
inline constexpr double kFeetPerMinute = kFoot / 60.0;  // m/s
inline constexpr double kGravity = 9.80665;             // m/s^2

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }
}  // namespace units

/// Wraps an angle to [-pi, pi).
double wrap_angle(double rad);

/// Position (east, north, altitude above field) in meters and heading in
/// radians, counter-clockwise from east, wrapped to [-pi, pi).
struct AircraftState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double chi = 0.0;

  bool operator==(const AircraftState&) const = default;
};

/// Constant control triple held over one planning horizon.
struct MotionPrimitive {
  std::size_t id = 0;
  double v = 0.0;    // inertial speed, m/s
  double v_h = 0.0;  // vertical speed, m/s
  double phi = 0.0;  // bank angle, rad

  /// Throws InvalidArgument unless v > |v_h| and |phi| < pi/2.
  void validate() const;
  double horizontal_speed() const;
  double turn_rate() const;
};

/// Builds the primitive that changes heading by `dchi_deg` over `horizon_s`.
MotionPrimitive make_primitive(std::size_t id, double v_kt, double vh_fpm, double dchi_deg, double horizon_s);

class PrimitiveLibrary {
 public:
  PrimitiveLibrary(std::vector<MotionPrimitive> primitives, double horizon, double sample_period);

  std::size_t size() const { return primitives_.size(); }
  const MotionPrimitive& operator[](std::size_t id) const { return primitives_[id]; }
  /// Throws InvalidArgument for an unknown id.
  const MotionPrimitive& at(std::size_t id) const;
  const std::vector<MotionPrimitive>& primitives() const { return primitives_; }
  double horizon() const { return horizon_; }
  double sample_period() const { return sample_period_; }
  /// horizon / sample_period + 1
  std::size_t samples_per_segment() const { return samples_; }

 private:
  std::vector<MotionPrimitive> primitives_;
  double horizon_;
  double sample_period_;
  std::size_t samples_;
};

/// 2 speeds {70, 90} kt x 3 vertical rates {-500, 0, +500} ft/min x 5 heading
/// changes {-90, -45, 0, 45, 90} deg over 20 s, sampled at 1 Hz. Ids run with
/// heading change fastest, then vertical rate, then speed.
PrimitiveLibrary default_library();

/// JSON object {horizon_s, sample_period_s, primitives: [{v_kt, vh_fpm, dchi_deg}]}.
PrimitiveLibrary load_library_json(const std::string& path);
PrimitiveLibrary library_from_json_text(const std::string& text);

struct Segment {
  std::vector<AircraftState> states;

  const AircraftState& start() const { return states.front(); }
  const AircraftState& end() const { return states.back(); }
};

/// Closed-form integration of the constant-input kinematics
///   x' = v2d cos chi, y' = v2d sin chi, z' = v_h, chi' = g tan(phi) / v2d
/// with v2d = sqrt(v^2 - v_h^2). Emits horizon / sample_period + 1 states.
Segment integrate(const AircraftState& start, const MotionPrimitive& primitive, double horizon,
                  double sample_period);

struct Transition {
  AircraftState next;
  Segment segment;
};

Transition transition(const AircraftState& state, std::size_t primitive_id, const PrimitiveLibrary& library);

/// CSV `t,x,y,z,chi`; sample i is stamped t0 + i * sample_period.
void write_segment_csv(std::ostream& out, const Segment& segment, double sample_period, double t0 = 0.0,
                       bool header = true);

}  // namespace stlplan::dynamics
