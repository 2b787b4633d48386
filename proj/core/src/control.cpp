#include "hybrid/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hybrid {

namespace {

constexpr double kHeadingSpeedMin = 0.05;

bool finite(const Vec3& v) { return v.allFinite(); }

void require_non_negative(double v, const char* field) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("gains.") + field + ": must be >= 0");
}

void require_non_negative(const Vec3& v, const char* field) {
  if (!v.allFinite() || (v.array() < 0.0).any())
    throw std::invalid_argument(std::string("gains.") + field + ": must be >= 0");
}

double clamp_abs(double v, double limit) { return std::clamp(v, -limit, limit); }

Vec3 clamp_abs(const Vec3& v, double limit) { return v.cwiseMax(-limit).cwiseMin(limit); }

Vec3 vee(const Eigen::Matrix3d& m) { return {m(2, 1), m(0, 2), m(1, 0)}; }

double forward_speed(const GroundState& est) { return world_to_rolling(est.v_w, est.yaw).x(); }

}  // namespace

const char* to_string(Transition t) {
  switch (t) {
    case Transition::TakeOff:
      return "takeoff";
    case Transition::Land:
      return "land";
    case Transition::None:
      break;
  }
  return "none";
}

void Setpoint::validate() const {
  if (!finite(position) || !finite(velocity_ff) || !finite(accel_ff) || (yaw && !std::isfinite(*yaw)))
    throw std::invalid_argument("setpoint: non-finite field");
  if (transition == Transition::TakeOff && mode != MobilityMode::Ground)
    throw std::invalid_argument("setpoint: take-off requested while not rolling");
  if (transition == Transition::Land && mode != MobilityMode::Aerial)
    throw std::invalid_argument("setpoint: landing requested while not flying");
}

void Gains::validate() const {
  require_non_negative(rolling.pos_kp, "rolling.pos_kp");
  require_non_negative(rolling.yaw_kp, "rolling.yaw_kp");
  require_non_negative(rolling.yaw_kd, "rolling.yaw_kd");
  require_non_negative(rolling.vel_kd, "rolling.vel_kd");
  require_non_negative(rolling.vel_ki, "rolling.vel_ki");
  require_non_negative(rolling.pitch_kp, "rolling.pitch_kp");
  require_non_negative(rolling.pitch_kd, "rolling.pitch_kd");
  require_non_negative(rolling.pitch_ki, "rolling.pitch_ki");
  require_non_negative(flying.pos_kp, "flying.pos_kp");
  require_non_negative(flying.vel_kp, "flying.vel_kp");
  require_non_negative(flying.vel_ki, "flying.vel_ki");
  require_non_negative(flying.vel_kd, "flying.vel_kd");
  require_non_negative(flying.att_kp, "flying.att_kp");
  require_non_negative(flying.rate_kp, "flying.rate_kp");
  require_non_negative(flying.rate_ki, "flying.rate_ki");
  require_non_negative(flying.rate_kd, "flying.rate_kd");
  const ControlLimits& l = limits;
  require_non_negative(l.ground_speed_max, "limits.ground_speed_max");
  require_non_negative(l.yaw_deadband, "limits.yaw_deadband");
  require_non_negative(l.integral_limit, "limits.integral_limit");
  require_non_negative(l.yaw_rate_filter_tau, "limits.yaw_rate_filter_tau");
  require_non_negative(l.speed_max_xy, "limits.speed_max_xy");
  require_non_negative(l.speed_max_z, "limits.speed_max_z");
  require_non_negative(l.body_rate_max, "limits.body_rate_max");
  require_non_negative(l.takeoff_rate, "limits.takeoff_rate");
  require_non_negative(l.takeoff_clearance, "limits.takeoff_clearance");
  require_non_negative(l.land_speed, "limits.land_speed");
  require_non_negative(l.land_tolerance, "limits.land_tolerance");
  require_non_negative(l.land_dwell, "limits.land_dwell");
  require_non_negative(l.transition_timeout, "limits.transition_timeout");
  if (!(l.pitch_max > 0.0 && l.pitch_max < 0.5 * kPi))
    throw std::invalid_argument("gains.limits.pitch_max: must lie in (0, pi/2)");
  if (!(l.tilt_max > 0.0 && l.tilt_max < 0.5 * kPi))
    throw std::invalid_argument("gains.limits.tilt_max: must lie in (0, pi/2)");
}

void ControllerState::reset_rolling() {
  chi1 = 0.0;
  chi2 = 0.0;
  yaw_error_prev = 0.0;
  yaw_error_rate = 0.0;
  has_yaw_error = false;
  held_yaw.reset();
}

void ControllerState::reset_flying() {
  vel_integral.setZero();
  rate_integral.setZero();
  vel_error_prev.setZero();
  rate_error_prev.setZero();
  has_flying_prev = false;
}

double rolling_position(const Setpoint& sp, const GroundState& est, const Gains& gains) {
  if (!sp.position_valid) return 0.0;
  const Vec2 e_w = sp.position.head<2>() - est.p_w;
  const Vec2 e_r = world_to_rolling(e_w, est.yaw);
  return clamp_abs(gains.rolling.pos_kp * e_r.x(), gains.limits.ground_speed_max);
}

double rolling_yaw(const Setpoint& sp, const GroundState& est, const Gains& gains, ControllerState& state,
                   double dt) {
  const double psi = est.yaw.radians();
  double psi_d = psi;
  const Vec2 e_w = sp.position.head<2>() - est.p_w;
  const Vec2 v_ff = sp.velocity_ff.head<2>();
  if (sp.position_valid && e_w.norm() >= gains.limits.yaw_deadband) {
    psi_d = std::atan2(e_w.y(), e_w.x());
    state.held_yaw.reset();
  } else if (!sp.position_valid && v_ff.norm() > kHeadingSpeedMin) {
    psi_d = std::atan2(v_ff.y(), v_ff.x());
    state.held_yaw.reset();
  } else if (sp.yaw) {
    psi_d = *sp.yaw;
  } else {
    if (!state.held_yaw) state.held_yaw = psi;
    psi_d = *state.held_yaw;
  }

  const double e = s1_distance(psi_d, psi);
  if (state.has_yaw_error && dt > 0.0) {
    const double raw = s1_distance(e, state.yaw_error_prev) / dt;
    const double alpha = dt / (gains.limits.yaw_rate_filter_tau + dt);
    state.yaw_error_rate += alpha * (raw - state.yaw_error_rate);
  }
  state.yaw_error_prev = e;
  state.has_yaw_error = true;
  return gains.rolling.yaw_kp * e + gains.rolling.yaw_kd * state.yaw_error_rate;
}

double rolling_velocity(double v_desired, double v_ff, const GroundState& est, const Gains& gains,
                        ControllerState& state, double dt) {
  const double e_dot = (v_desired + v_ff) - forward_speed(est);
  state.chi1 = clamp_abs(state.chi1 + e_dot * dt, gains.limits.integral_limit);
  return gains.rolling.vel_kd * e_dot + gains.rolling.vel_ki * state.chi1;
}

RollingMixerOutput rolling_mixer(double accel_x, double moment_z_rolling, const GroundState& est,
                                 const VehicleParams& params, const ControlLimits& limits) {
  RollingMixerOutput out;
  out.thrust = params.rolling_thrust();
  if (!(out.thrust > 0.0)) throw std::invalid_argument("rolling_mixer: rolling thrust must be positive");
  const double arg = accel_x * params.mass / out.thrust;
  const double bound = std::sin(limits.pitch_max);
  out.clamped = std::abs(arg) > bound;
  out.pitch_desired = std::asin(std::clamp(arg, -bound, bound));
  const double pitch = est.pitch_b;
  out.moment_x_b = -std::sin(pitch) * moment_z_rolling;
  out.moment_z_b = std::cos(pitch) * moment_z_rolling;
  return out;
}

double rolling_pitch(double pitch_desired, const GroundState& est, const Gains& gains, ControllerState& state,
                     double dt) {
  const double e = s1_distance(pitch_desired, est.pitch_b);
  state.chi2 = clamp_abs(state.chi2 + e * dt, gains.limits.integral_limit);
  return gains.rolling.pitch_kp * e - gains.rolling.pitch_kd * est.pitch_rate + gains.rolling.pitch_ki * state.chi2;
}

RollingOutput rolling_step(const Setpoint& sp, const GroundState& est, const Gains& gains,
                           const VehicleParams& params, ControllerState& state, double dt) {
  RollingOutput out;
  out.v_desired = rolling_position(sp, est, gains);
  const double m_z_r = rolling_yaw(sp, est, gains, state, dt);
  const double v_ff = world_to_rolling(sp.velocity_ff.head<2>(), est.yaw).x();
  out.accel_desired = rolling_velocity(out.v_desired, v_ff, est, gains, state, dt);
  const RollingMixerOutput mix = rolling_mixer(out.accel_desired, m_z_r, est, params, gains.limits);
  out.pitch_desired = mix.pitch_desired;
  out.clamped = mix.clamped;
  const double m_y = rolling_pitch(mix.pitch_desired, est, gains, state, dt);
  out.u.thrust = mix.thrust;
  out.u.moment_b = Vec3(mix.moment_x_b, m_y, mix.moment_z_b);
  return out;
}

FlyingOutput flying_step(const Setpoint& sp, const AerialState& est, const Gains& gains,
                         const VehicleParams& params, ControllerState& state, double dt) {
  const FlyingGains& g = gains.flying;
  const ControlLimits& lim = gains.limits;
  FlyingOutput out;

  // Position: P law on the error, plus the velocity feedforward.
  Vec3 v_sp = sp.velocity_ff;
  if (sp.position_valid) v_sp += g.pos_kp.cwiseProduct(sp.position - est.p_w);
  const double v_xy = v_sp.head<2>().norm();
  if (v_xy > lim.speed_max_xy) v_sp.head<2>() *= lim.speed_max_xy / v_xy;
  v_sp.z() = clamp_abs(v_sp.z(), lim.speed_max_z);

  // Velocity: PID.
  const Vec3 e_v = v_sp - est.v_w;
  state.vel_integral = clamp_abs(state.vel_integral + e_v * dt, lim.integral_limit);
  const Vec3 d_v = state.has_flying_prev && dt > 0.0 ? Vec3((e_v - state.vel_error_prev) / dt) : Vec3::Zero();
  state.vel_error_prev = e_v;
  out.accel_desired = g.vel_kp.cwiseProduct(e_v) + g.vel_ki.cwiseProduct(state.vel_integral) +
                      g.vel_kd.cwiseProduct(d_v) + sp.accel_ff;

  // Acceleration mixer: thrust vector with a tilt limit.
  Vec3 t = params.mass * (out.accel_desired + Vec3(0.0, 0.0, kGravity));
  t.z() = std::max(t.z(), 0.1 * params.mass * kGravity);
  const double horiz = t.head<2>().norm();
  const double horiz_max = t.z() * std::tan(lim.tilt_max);
  if (horiz > horiz_max) t.head<2>() *= horiz_max / horiz;
  const Vec3 z_d = t.normalized();
  const double yaw_d = sp.yaw ? *sp.yaw : est.attitude.yaw();
  const Vec3 x_c(std::cos(yaw_d), std::sin(yaw_d), 0.0);
  const Vec3 y_d = z_d.cross(x_c).normalized();
  const Vec3 x_d = y_d.cross(z_d);
  Eigen::Matrix3d r_d;
  r_d.col(0) = x_d;
  r_d.col(1) = y_d;
  r_d.col(2) = z_d;
  out.attitude_desired = BodyAttitude::from_matrix(r_d);

  const Eigen::Matrix3d r = est.attitude.matrix();
  const double thrust = t.dot(r.col(2));
  out.u.thrust = std::clamp(thrust, 0.0, params.max_total_thrust);
  out.saturated = thrust > params.max_total_thrust || thrust < 0.0;

  // Attitude: P law on the SO(3) error gives body-rate setpoints.
  const Vec3 e_r = 0.5 * vee(r_d.transpose() * r - r.transpose() * r_d);
  const Vec3 rate_sp = clamp_abs(Vec3(-g.att_kp.cwiseProduct(e_r)), lim.body_rate_max);

  // Body rates: PID scaled by inertia, plus gyroscopic compensation.
  const Vec3 e_w = rate_sp - est.omega_b;
  state.rate_integral = clamp_abs(state.rate_integral + e_w * dt, lim.integral_limit);
  const Vec3 d_w = state.has_flying_prev && dt > 0.0 ? Vec3((e_w - state.rate_error_prev) / dt) : Vec3::Zero();
  state.rate_error_prev = e_w;
  state.has_flying_prev = true;
  const Vec3 alpha = g.rate_kp.cwiseProduct(e_w) + g.rate_ki.cwiseProduct(state.rate_integral) +
                     g.rate_kd.cwiseProduct(d_w);
  const Vec3& inertia = params.inertia_diag;
  out.u.moment_b = inertia.cwiseProduct(alpha) + est.omega_b.cross(inertia.cwiseProduct(est.omega_b));
  return out;
}

TransitionOutput transition_step(Transition kind, const AerialState& est, double clearance_below,
                                 const Gains& gains, const VehicleParams& params, ControllerState& state,
                                 double dt) {
  if (kind == Transition::None) throw std::invalid_argument("transition_step: no transition requested");
  const ControlLimits& lim = gains.limits;
  if (state.active_transition != kind) {
    state.active_transition = kind;
    state.transition_time = 0.0;
    state.land_dwell_time = 0.0;
    state.transition_anchor = est.p_w;
    state.takeoff_target_z = est.p_w.z();
    state.reset_flying();
  }
  state.transition_time += dt;

  Setpoint sp;
  sp.mode = MobilityMode::Aerial;
  sp.yaw = est.attitude.yaw();
  TransitionOutput out;
  if (kind == Transition::TakeOff) {
    const double ceiling = state.transition_anchor.z() + 2.0 * lim.takeoff_clearance;
    const bool ramping = state.takeoff_target_z < ceiling;
    state.takeoff_target_z = std::min(state.takeoff_target_z + lim.takeoff_rate * dt, ceiling);
    sp.position = Vec3(state.transition_anchor.x(), state.transition_anchor.y(), state.takeoff_target_z);
    if (ramping) sp.velocity_ff.z() = lim.takeoff_rate;
    out.done = clearance_below > lim.takeoff_clearance;
  } else {
    sp.position = Vec3(state.transition_anchor.x(), state.transition_anchor.y(), est.p_w.z());
    sp.velocity_ff.z() = -lim.land_speed;
    if (clearance_below <= params.wheel_radius + lim.land_tolerance)
      state.land_dwell_time += dt;
    else
      state.land_dwell_time = 0.0;
    out.done = state.land_dwell_time >= lim.land_dwell - 1e-9;
  }
  out.u = flying_step(sp, est, gains, params, state, dt).u;
  out.timed_out = !out.done && state.transition_time > lim.transition_timeout;
  if (out.done || out.timed_out) state.active_transition = Transition::None;
  return out;
}

}  // namespace hybrid
