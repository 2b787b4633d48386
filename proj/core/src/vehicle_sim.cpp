#include "hybrid/vehicle_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hybrid {

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("vehicle.") + field + ": " + what);
}

void check_dt(double dt) {
  if (!(dt > 0.0 && dt <= 0.02)) throw std::invalid_argument("integration step must lie in (0, 0.02] s");
}

// Per-motor geometry for the mixing matrix rows (M_x, M_y, M_z).
struct MotorLayout {
  std::array<double, 4> roll_sign{-1.0, 1.0, 1.0, -1.0};   // sign of y_i
  std::array<double, 4> pitch_sign{-1.0, 1.0, -1.0, 1.0};  // sign of -x_i
  std::array<double, 4> spin{1.0, 1.0, -1.0, -1.0};
};

constexpr MotorLayout kLayout{};

struct AerialDerivative {
  Vec3 dp;
  Vec3 dv;
  Eigen::Vector4d dq;  // (w, x, y, z)
  Vec3 domega;
};

struct AerialVector {
  Vec3 p;
  Vec3 v;
  Eigen::Vector4d q;
  Vec3 omega;
};

AerialDerivative aerial_rates(const AerialVector& x, const ControlInput& u, const VehicleParams& params) {
  const Eigen::Quaterniond q(x.q[0], x.q[1], x.q[2], x.q[3]);
  const Eigen::Matrix3d r = q.normalized().toRotationMatrix();
  AerialDerivative d;
  d.dp = x.v;
  d.dv = r.col(2) * (u.thrust / params.mass) - Vec3(0.0, 0.0, kGravity);
  const Eigen::Quaterniond omega_q(0.0, x.omega.x(), x.omega.y(), x.omega.z());
  const Eigen::Quaterniond qdot = q * omega_q;
  d.dq = 0.5 * Eigen::Vector4d(qdot.w(), qdot.x(), qdot.y(), qdot.z());
  const Vec3& inertia = params.inertia_diag;
  const Vec3 i_omega = inertia.cwiseProduct(x.omega);
  d.domega = (u.moment_b - x.omega.cross(i_omega)).cwiseQuotient(inertia);
  return d;
}

AerialVector advance(const AerialVector& x, const AerialDerivative& d, double h) {
  return {x.p + h * d.dp, x.v + h * d.dv, x.q + h * d.dq, x.omega + h * d.domega};
}

// Rolling state vector: x, y, forward speed, yaw, yaw rate, pitch, pitch rate.
using GroundVector = Eigen::Matrix<double, 7, 1>;

GroundVector ground_rates(const GroundVector& x, double thrust, double m_y, double m_z_rolling,
                          const VehicleParams& params) {
  GroundVector d;
  const double speed = x[2];
  const double yaw = x[3];
  const double pitch = x[5];
  d[0] = speed * std::cos(yaw);
  d[1] = speed * std::sin(yaw);
  d[2] = thrust * std::sin(pitch) / params.mass;
  d[3] = x[4];
  d[4] = params.ground_yaw_bandwidth * m_z_rolling / params.inertia_diag.z();
  d[5] = x[6];
  d[6] = m_y / params.inertia_diag.y();
  return d;
}

}  // namespace

double calibrate_power_coeff(double hover_power, double mass) {
  const double per_motor = mass * kGravity / 4.0;
  return hover_power / (4.0 * std::pow(per_motor, 1.5));
}

void VehicleParams::validate() const {
  require(std::isfinite(mass) && mass > 0.0, "mass", "must be positive");
  require(inertia_diag.allFinite() && (inertia_diag.array() > 0.0).all(), "inertia_diag", "must be positive");
  require(std::isfinite(arm_length) && arm_length > 0.0, "arm_length", "must be positive");
  require(std::isfinite(yaw_moment_coeff) && yaw_moment_coeff > 0.0, "yaw_moment_coeff", "must be positive");
  require(std::isfinite(wheel_radius) && wheel_radius > 0.0, "wheel_radius", "must be positive");
  require(std::isfinite(body_radius) && body_radius > 0.0, "body_radius", "must be positive");
  require(std::isfinite(max_total_thrust) && max_total_thrust > mass * kGravity, "max_total_thrust",
          "must exceed m*g so the vehicle can hover");
  require(std::isfinite(motor_power_coeff) && motor_power_coeff >= 0.0, "motor_power_coeff", "must be >= 0");
  require(std::isfinite(idle_power) && idle_power >= 0.0, "idle_power", "must be >= 0");
  require(rolling_thrust_fraction > 0.0 && rolling_thrust_fraction < 1.0, "rolling_thrust_fraction",
          "must lie in (0, 1)");
  require(ground_yaw_bandwidth > 0.0 && ground_yaw_bandwidth <= 1.0, "ground_yaw_bandwidth", "must lie in (0, 1]");
}

Allocation allocate_motors(const ControlInput& u, const VehicleParams& params) {
  const double d = params.arm_length / std::sqrt(2.0);
  const double k = params.yaw_moment_coeff;
  const double f_max = params.max_motor_thrust();

  Allocation out;
  double thrust = u.thrust;
  if (!(thrust >= 0.0)) {
    thrust = 0.0;
    out.saturated = true;
  } else if (thrust > params.max_total_thrust) {
    thrust = params.max_total_thrust;
    out.saturated = true;
  }

  const double base = thrust / 4.0;
  std::array<double, 4> delta{};
  for (int i = 0; i < 4; ++i) {
    delta[i] = kLayout.roll_sign[i] * u.moment_b.x() / (4.0 * d) +
               kLayout.pitch_sign[i] * u.moment_b.y() / (4.0 * d) + kLayout.spin[i] * u.moment_b.z() / (4.0 * k);
  }

  // Largest moment scale keeping every motor inside [0, f_max].
  double scale = 1.0;
  for (int i = 0; i < 4; ++i) {
    if (delta[i] > 0.0 && base + delta[i] > f_max) scale = std::min(scale, (f_max - base) / delta[i]);
    if (delta[i] < 0.0 && base + delta[i] < 0.0) scale = std::min(scale, base / -delta[i]);
  }
  scale = std::max(scale, 0.0);
  if (scale < 1.0) out.saturated = true;

  for (int i = 0; i < 4; ++i) out.thrusts.f[i] = std::clamp(base + scale * delta[i], 0.0, f_max);
  return out;
}

ControlInput unmix_motors(const MotorThrusts& f, const VehicleParams& params) {
  const double d = params.arm_length / std::sqrt(2.0);
  const double k = params.yaw_moment_coeff;
  ControlInput u;
  for (int i = 0; i < 4; ++i) {
    u.thrust += f.f[i];
    u.moment_b.x() += d * kLayout.roll_sign[i] * f.f[i];
    u.moment_b.y() += d * kLayout.pitch_sign[i] * f.f[i];
    u.moment_b.z() += k * kLayout.spin[i] * f.f[i];
  }
  return u;
}

AerialState step_aerial(const AerialState& s, const ControlInput& u, double dt, const VehicleParams& params) {
  check_dt(dt);
  if (!is_finite(s) || !std::isfinite(u.thrust) || !u.moment_b.allFinite())
    throw std::invalid_argument("step_aerial: non-finite state or input");

  const Eigen::Quaterniond& q0 = s.attitude.quaternion();
  const AerialVector x{s.p_w, s.v_w, Eigen::Vector4d(q0.w(), q0.x(), q0.y(), q0.z()), s.omega_b};
  const AerialDerivative k1 = aerial_rates(x, u, params);
  const AerialDerivative k2 = aerial_rates(advance(x, k1, 0.5 * dt), u, params);
  const AerialDerivative k3 = aerial_rates(advance(x, k2, 0.5 * dt), u, params);
  const AerialDerivative k4 = aerial_rates(advance(x, k3, dt), u, params);

  const double w = dt / 6.0;
  AerialState next;
  next.p_w = x.p + w * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
  next.v_w = x.v + w * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
  const Eigen::Vector4d q = x.q + w * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
  next.attitude = BodyAttitude(Eigen::Quaterniond(q[0], q[1], q[2], q[3]));
  next.omega_b = x.omega + w * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega);
  return next;
}

double rolling_yaw_moment(const Vec3& moment_b, double pitch) {
  return -std::sin(pitch) * moment_b.x() + std::cos(pitch) * moment_b.z();
}

GroundState step_ground(const GroundState& s, const ControlInput& u, double dt, const VehicleParams& params) {
  check_dt(dt);
  if (!is_finite(s) || !std::isfinite(u.thrust) || !u.moment_b.allFinite())
    throw std::invalid_argument("step_ground: non-finite state or input");

  const double yaw0 = s.yaw.radians();
  GroundVector x;
  x << s.p_w.x(), s.p_w.y(), s.v_w.dot(Vec2(std::cos(yaw0), std::sin(yaw0))), yaw0, s.omega_z, s.pitch_b,
      s.pitch_rate;

  // Moments are held over the step in the body frame; the rolling-frame yaw
  // component is taken at the starting pitch.
  const double m_y = u.moment_b.y();
  const double m_z_rolling = rolling_yaw_moment(u.moment_b, s.pitch_b);
  const GroundVector k1 = ground_rates(x, u.thrust, m_y, m_z_rolling, params);
  const GroundVector k2 = ground_rates(x + 0.5 * dt * k1, u.thrust, m_y, m_z_rolling, params);
  const GroundVector k3 = ground_rates(x + 0.5 * dt * k2, u.thrust, m_y, m_z_rolling, params);
  const GroundVector k4 = ground_rates(x + dt * k3, u.thrust, m_y, m_z_rolling, params);
  const GroundVector xn = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  GroundState next;
  next.p_w = Vec2(xn[0], xn[1]);
  next.yaw = YawRotation(xn[3]);
  const double heading = next.yaw.radians();
  next.v_w = Vec2(xn[2] * std::cos(heading), xn[2] * std::sin(heading));
  next.omega_z = xn[4];
  next.pitch_b = xn[5];
  next.pitch_rate = xn[6];
  return next;
}

bool resolve_ground_contact(AerialState& s, const VehicleParams& params) {
  if (s.p_w.z() > params.wheel_radius) return false;
  s.p_w.z() = params.wheel_radius;
  if (s.v_w.z() < 0.0) s.v_w.z() = 0.0;
  return true;
}

double power_draw(const MotorThrusts& f, const VehicleParams& params) {
  double sum = 0.0;
  for (double fi : f.f) sum += std::pow(std::max(fi, 0.0), 1.5);
  return params.idle_power + params.motor_power_coeff * sum;
}

}  // namespace hybrid
