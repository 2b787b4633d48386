#include "hybrid/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace hybrid {

double wrap_angle(double radians) {
  double a = std::remainder(radians, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

Eigen::Matrix2d YawRotation::matrix() const {
  const double c = std::cos(psi_);
  const double s = std::sin(psi_);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

BodyAttitude::BodyAttitude(const Eigen::Quaterniond& q) : q_(q.normalized()) {}

BodyAttitude BodyAttitude::from_euler_zyx(double yaw, double pitch, double roll) {
  const Eigen::Quaterniond q = Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
                               Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
                               Eigen::AngleAxisd(roll, Vec3::UnitX());
  return BodyAttitude(q);
}

BodyAttitude BodyAttitude::from_matrix(const Eigen::Matrix3d& r) {
  return BodyAttitude(Eigen::Quaterniond(r));
}

double BodyAttitude::yaw() const {
  const Eigen::Matrix3d r = matrix();
  return std::atan2(r(1, 0), r(0, 0));
}

double BodyAttitude::pitch() const {
  const Eigen::Matrix3d r = matrix();
  return std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
}

double BodyAttitude::roll() const {
  const Eigen::Matrix3d r = matrix();
  return std::atan2(r(2, 1), r(2, 2));
}

const char* to_string(MobilityMode mode) {
  return mode == MobilityMode::Ground ? "ground" : "aerial";
}

MobilityMode mode_of(const VehicleState& state) {
  return std::holds_alternative<GroundState>(state) ? MobilityMode::Ground : MobilityMode::Aerial;
}

double s1_distance(double target, double current) { return wrap_angle(target - current); }

Vec2 world_to_rolling(const Vec2& v, const YawRotation& yaw) {
  const double c = std::cos(yaw.radians());
  const double s = std::sin(yaw.radians());
  return {c * v.x() + s * v.y(), -s * v.x() + c * v.y()};
}

Vec2 rolling_to_world(const Vec2& v, const YawRotation& yaw) {
  const double c = std::cos(yaw.radians());
  const double s = std::sin(yaw.radians());
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

AerialState embed_ground_state(const GroundState& g, double wheel_radius) {
  AerialState a;
  a.p_w = Vec3(g.p_w.x(), g.p_w.y(), wheel_radius);
  a.v_w = Vec3(g.v_w.x(), g.v_w.y(), 0.0);
  a.attitude = BodyAttitude::from_euler_zyx(g.yaw.radians(), g.pitch_b, 0.0);
  // ZYX rates (yaw_rate, pitch_rate, 0) expressed in the body frame.
  const double sp = std::sin(g.pitch_b);
  const double cp = std::cos(g.pitch_b);
  a.omega_b = Vec3(-sp * g.omega_z, g.pitch_rate, cp * g.omega_z);
  return a;
}

GroundState project_aerial_state(const AerialState& a) {
  GroundState g;
  g.p_w = a.p_w.head<2>();
  g.v_w = a.v_w.head<2>();
  g.yaw = YawRotation(a.attitude.yaw());
  g.pitch_b = a.attitude.pitch();
  const double roll = a.attitude.roll();
  const double cr = std::cos(roll);
  const double sr = std::sin(roll);
  const double cp = std::cos(g.pitch_b);
  g.pitch_rate = cr * a.omega_b.y() - sr * a.omega_b.z();
  g.omega_z = std::abs(cp) > 1e-9 ? (sr * a.omega_b.y() + cr * a.omega_b.z()) / cp : 0.0;
  return g;
}

GroundState enforce_no_slip(GroundState g) {
  const Vec2 heading(std::cos(g.yaw.radians()), std::sin(g.yaw.radians()));
  const double forward = g.v_w.dot(heading);
  g.v_w = forward * heading;
  return g;
}

AerialState as_aerial(const VehicleState& state, double wheel_radius) {
  if (const auto* g = std::get_if<GroundState>(&state)) return embed_ground_state(*g, wheel_radius);
  return std::get<AerialState>(state);
}

bool is_finite(const AerialState& s) {
  return s.p_w.allFinite() && s.v_w.allFinite() && s.omega_b.allFinite() &&
         s.attitude.quaternion().coeffs().allFinite();
}

bool is_finite(const GroundState& s) {
  return s.p_w.allFinite() && s.v_w.allFinite() && std::isfinite(s.yaw.radians()) &&
         std::isfinite(s.omega_z) && std::isfinite(s.pitch_b) && std::isfinite(s.pitch_rate);
}

}  // namespace hybrid
