#ifndef HYBRID_CONTROL_HPP
#define HYBRID_CONTROL_HPP

#include "hybrid/geometry.hpp"
#include "hybrid/vehicle_sim.hpp"

#include <optional>

namespace hybrid {

enum class Transition { None, TakeOff, Land };

const char* to_string(Transition t);

/// Desired state handed from the local planner to the hybrid controller.
struct Setpoint {
  Vec3 position = Vec3::Zero();  // z ignored while rolling
  Vec3 velocity_ff = Vec3::Zero();
  Vec3 accel_ff = Vec3::Zero();
  /// Desired heading; empty means "face the commanded velocity".
  std::optional<double> yaw;
  MobilityMode mode = MobilityMode::Ground;
  Transition transition = Transition::None;
  /// Cleared when localization is lost: only the velocity fields are valid.
  bool position_valid = true;

  /// Throws std::invalid_argument on non-finite fields or a transition that
  /// does not start from `mode`.
  void validate() const;
};

/// Rolling controller gains.
struct RollingGains {
  double pos_kp = 2.0 / 3.0;
  double yaw_kp = 0.5;
  double yaw_kd = 0.35;
  double vel_kd = 2.0;
  double vel_ki = 0.2;
  double pitch_kp = 3.0;
  double pitch_kd = 0.9;
  double pitch_ki = 0.5;
};

/// Flying cascade gains. Attitude and rate gains are in 1/s and 1/s^2 and are
/// scaled by the inertia when producing moments.
struct FlyingGains {
  Vec3 pos_kp{2.0 / 3.0, 2.0 / 3.0, 1.5};
  Vec3 vel_kp{2.5, 2.5, 4.0};
  Vec3 vel_ki{0.4, 0.4, 1.0};
  Vec3 vel_kd{0.0, 0.0, 0.0};
  Vec3 att_kp{7.0, 7.0, 3.0};
  Vec3 rate_kp{25.0, 25.0, 10.0};
  Vec3 rate_ki{2.0, 2.0, 1.0};
  Vec3 rate_kd{0.0, 0.0, 0.0};
};

struct ControlLimits {
  double ground_speed_max = 1.0;
  double pitch_max = 0.35;
  double yaw_deadband = 0.15;
  double integral_limit = 2.0;
  double yaw_rate_filter_tau = 0.05;
  double tilt_max = 0.6;
  double speed_max_xy = 1.5;
  double speed_max_z = 1.0;
  double body_rate_max = 4.0;
  double takeoff_rate = 0.5;
  double takeoff_clearance = 0.7;
  double land_speed = 0.3;
  double land_tolerance = 0.05;
  double land_dwell = 1.0;
  double transition_timeout = 15.0;
};

struct Gains {
  RollingGains rolling;
  FlyingGains flying;
  ControlLimits limits;

  /// Throws std::invalid_argument if any gain or limit is negative.
  void validate() const;
};

/// Integrator and filter memory shared by the rolling and flying loops.
struct ControllerState {
  double chi1 = 0.0;  // integral of velocity error (m)
  double chi2 = 0.0;  // integral of pitch error (rad s)
  double yaw_error_prev = 0.0;
  double yaw_error_rate = 0.0;
  bool has_yaw_error = false;
  std::optional<double> held_yaw;

  Vec3 vel_integral = Vec3::Zero();
  Vec3 rate_integral = Vec3::Zero();
  Vec3 vel_error_prev = Vec3::Zero();
  Vec3 rate_error_prev = Vec3::Zero();
  bool has_flying_prev = false;

  Transition active_transition = Transition::None;
  double transition_time = 0.0;
  double land_dwell_time = 0.0;
  Vec3 transition_anchor = Vec3::Zero();
  double takeoff_target_z = 0.0;

  void reset_rolling();
  void reset_flying();
};

/// Rolling position loop: desired forward speed in the rolling frame.
double rolling_position(const Setpoint& sp, const GroundState& est, const Gains& gains);

/// PD yaw loop on S^1; returns the rolling-frame yaw moment.
double rolling_yaw(const Setpoint& sp, const GroundState& est, const Gains& gains, ControllerState& state, double dt);

/// PI velocity loop; returns the desired forward acceleration.
double rolling_velocity(double v_desired, double v_ff, const GroundState& est, const Gains& gains,
                        ControllerState& state, double dt);

struct RollingMixerOutput {
  double pitch_desired = 0.0;
  double thrust = 0.0;
  double moment_x_b = 0.0;
  double moment_z_b = 0.0;
  bool clamped = false;
};

/// Acceleration mixer: pitch from asin(a m / |F|), yaw moment rotated into the
/// body frame by the current pitch.
RollingMixerOutput rolling_mixer(double accel_x, double moment_z_rolling, const GroundState& est,
                                 const VehicleParams& params, const ControlLimits& limits);

/// PID pitch loop; returns the body pitch moment.
double rolling_pitch(double pitch_desired, const GroundState& est, const Gains& gains, ControllerState& state,
                     double dt);

struct RollingOutput {
  ControlInput u;
  double v_desired = 0.0;
  double accel_desired = 0.0;
  double pitch_desired = 0.0;
  bool clamped = false;
};

/// Full rolling chain: position, yaw, velocity, mixer, pitch.
RollingOutput rolling_step(const Setpoint& sp, const GroundState& est, const Gains& gains,
                           const VehicleParams& params, ControllerState& state, double dt);

struct FlyingOutput {
  ControlInput u;
  Vec3 accel_desired = Vec3::Zero();
  BodyAttitude attitude_desired;
  bool saturated = false;
};

/// Cascade: P position, PID velocity, acceleration mixer, P attitude, PID rates.
FlyingOutput flying_step(const Setpoint& sp, const AerialState& est, const Gains& gains,
                         const VehicleParams& params, ControllerState& state, double dt);

struct TransitionOutput {
  ControlInput u;
  bool done = false;
  bool timed_out = false;
};

/// Take-off ramps the altitude setpoint until the floor clearance exceeds
/// the threshold; landing descends at constant speed until the clearance stays
/// at the wheel radius for the dwell time.
TransitionOutput transition_step(Transition kind, const AerialState& est, double clearance_below,
                                 const Gains& gains, const VehicleParams& params, ControllerState& state,
                                 double dt);

}  // namespace hybrid

#endif  // HYBRID_CONTROL_HPP
