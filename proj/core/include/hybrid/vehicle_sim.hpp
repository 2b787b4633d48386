#ifndef HYBRID_VEHICLE_SIM_HPP
#define HYBRID_VEHICLE_SIM_HPP

#include "hybrid/geometry.hpp"

#include <array>

namespace hybrid {

/// Hover power the motor coefficient is calibrated against (W).
inline constexpr double kCalibratedHoverPower = 971.9;
/// Average rolling power the default rolling thrust fraction reproduces (W).
inline constexpr double kCalibratedRollingPower = 194.5;

/// Motor power coefficient c such that four equal motors carrying m*g draw
/// `hover_power` under P = c * sum(f_i^1.5).
double calibrate_power_coeff(double hover_power, double mass);

struct VehicleParams {
  double mass = 4.231;
  Vec3 inertia_diag{0.08, 0.08, 0.08};
  double arm_length = 0.25;
  /// Reaction torque per newton of rotor thrust (m).
  double yaw_moment_coeff = 0.03;
  double wheel_radius = 0.25;
  /// Physical radius used for collision checks against the true scene.
  double body_radius = 0.2;
  double max_total_thrust = 62.5;
  double motor_power_coeff = calibrate_power_coeff(kCalibratedHoverPower, 4.231);
  double idle_power = 0.0;
  /// Constant rolling thrust as a fraction of m*g.
  double rolling_thrust_fraction = 0.342;
  /// Scales yaw authority while rolling (ground interaction).
  double ground_yaw_bandwidth = 0.4;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  double hover_thrust() const { return mass * kGravity; }
  double rolling_thrust() const { return rolling_thrust_fraction * hover_thrust(); }
  double max_motor_thrust() const { return max_total_thrust / 4.0; }
};

/// u = (|F|, M_x, M_y, M_z) with moments in the body frame.
struct ControlInput {
  double thrust = 0.0;
  Vec3 moment_b = Vec3::Zero();
};

/// Quad-X motor thrusts. Motor order: front-right, rear-left, front-left,
/// rear-right; the first two spin so that positive thrust yields +M_z.
struct MotorThrusts {
  std::array<double, 4> f{0.0, 0.0, 0.0, 0.0};
  double total() const { return f[0] + f[1] + f[2] + f[3]; }
};

struct Allocation {
  MotorThrusts thrusts;
  bool saturated = false;
};

/// Linear quad-X mixing. Out-of-range requests keep |F| (clipped to the
/// thrust envelope) and scale the moments down until every motor is feasible.
Allocation allocate_motors(const ControlInput& u, const VehicleParams& params);

/// Inverse of the mixing matrix.
ControlInput unmix_motors(const MotorThrusts& f, const VehicleParams& params);

/// RK4 Newton-Euler step. Throws std::invalid_argument on a non-finite state or
/// dt outside (0, 0.02].
AerialState step_aerial(const AerialState& s, const ControlInput& u, double dt, const VehicleParams& params);

/// RK4 step of the rolling dynamics: unicycle with thrust-driven forward
/// acceleration, free body pitch, reduced yaw authority and zero lateral slip.
GroundState step_ground(const GroundState& s, const ControlInput& u, double dt, const VehicleParams& params);

/// Keeps an aerial body above the floor: the wheels touch at z = wheel_radius.
/// Returns true while in contact.
bool resolve_ground_contact(AerialState& s, const VehicleParams& params);

/// Electrical power: idle + c * sum(f_i^1.5).
double power_draw(const MotorThrusts& f, const VehicleParams& params);

/// Rolling-frame yaw moment recovered from body moments at the given pitch.
double rolling_yaw_moment(const Vec3& moment_b, double pitch);

}  // namespace hybrid

#endif  // HYBRID_VEHICLE_SIM_HPP
