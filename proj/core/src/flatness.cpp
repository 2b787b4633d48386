#include "hybrid/flatness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hybrid {

namespace {

double falling_factorial(int i, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= static_cast<double>(i - j);
  return r;
}

// k-th derivative of a degree-9 polynomial in tau.
double eval_poly(const std::array<double, 10>& c, int k, double tau) {
  double acc = 0.0;
  for (int i = 9; i >= k; --i) acc = acc * tau + c[i] * falling_factorial(i, k);
  return acc;
}

}  // namespace

const std::array<std::array<double, 10>, 4>& hermite9_basis() {
  static const std::array<std::array<double, 10>, 4> basis{{
      {1, 0, 0, 0, 0, -126, 420, -540, 315, -70},
      {0, 1, 0, 0, 0, -70, 224, -280, 160, -35},
      {0, 0, 0, 0, 0, 126, -420, 540, -315, 70},
      {0, 0, 0, 0, 0, -56, 196, -260, 155, -35},
  }};
  return basis;
}

FlatTrajectory FlatTrajectory::fit(const FlatBoundary& start, const FlatBoundary& end, double duration, int dims,
                                   double t0) {
  if (dims != 2 && dims != 4) throw std::invalid_argument("flat trajectory: dims must be 2 or 4");
  if (!(duration >= kMinTrajectoryDuration && duration <= kMaxTrajectoryDuration))
    throw std::invalid_argument("flat trajectory: duration must lie in [0.2, 30] s");
  if (!std::isfinite(t0) || !start.position.allFinite() || !start.velocity.allFinite() ||
      !end.position.allFinite() || !end.velocity.allFinite())
    throw std::invalid_argument("flat trajectory: non-finite boundary");
  FlatTrajectory traj;
  traj.dims_ = dims;
  traj.t0_ = t0;
  traj.duration_ = duration;
  traj.start_ = start;
  traj.end_ = end;
  for (int i = dims; i < 4; ++i) {
    traj.start_.position[i] = traj.start_.velocity[i] = 0.0;
    traj.end_.position[i] = traj.end_.velocity[i] = 0.0;
  }
  return traj;
}

std::array<double, 10> FlatTrajectory::coefficients(int axis) const {
  if (axis < 0 || axis >= dims_) throw std::out_of_range("flat trajectory: axis out of range");
  const auto& h = hermite9_basis();
  const double w[4] = {start_.position[axis], start_.velocity[axis] * duration_, end_.position[axis],
                       end_.velocity[axis] * duration_};
  std::array<double, 10> c{};
  double scale = 1.0;
  for (int i = 0; i < 10; ++i) {
    double sum = 0.0;
    for (int b = 0; b < 4; ++b) sum += w[b] * h[b][i];
    c[i] = sum / scale;
    scale *= duration_;
  }
  return c;
}

FlatSample FlatTrajectory::sample(double t) const {
  FlatSample out;
  out.point.dims = dims_;
  double s = t - t0_;
  if (s < 0.0 || s > duration_) {
    out.clamped = true;
    s = std::clamp(s, 0.0, duration_);
  }
  const double tau = s / duration_;
  const auto& h = hermite9_basis();
  // Past the midpoint, evaluate the mirrored basis in 1 - tau so the large
  // coefficients do not cancel near the end boundary.
  const bool mirrored = tau > 0.5;
  const double sigma = 1.0 - tau;
  double inv_t = 1.0;
  for (int k = 0; k <= 4; ++k) {
    double hk[4];
    if (mirrored) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      hk[0] = sign * eval_poly(h[2], k, sigma);
      hk[1] = -sign * eval_poly(h[3], k, sigma);
      hk[2] = sign * eval_poly(h[0], k, sigma);
      hk[3] = -sign * eval_poly(h[1], k, sigma);
    } else {
      for (int b = 0; b < 4; ++b) hk[b] = eval_poly(h[b], k, tau);
    }
    for (int axis = 0; axis < dims_; ++axis) {
      const double v = start_.position[axis] * hk[0] + start_.velocity[axis] * duration_ * hk[1] +
                       end_.position[axis] * hk[2] + end_.velocity[axis] * duration_ * hk[3];
      out.point.d[k][axis] = v * inv_t;
    }
    inv_t /= duration_;
  }
  return out;
}

AerialFlatOutput flat_to_state_aerial(const FlatPoint& z, const VehicleParams& params) {
  if (z.dims != 4) throw std::invalid_argument("flat_to_state_aerial: expects a 4-D flat point");
  const Vec3 a = z.acceleration();
  const Vec3 j = z.jerk();
  const Vec3 s = z.snap();
  const double psi = z.d[0][3];
  const double psi_d = z.d[1][3];
  const double psi_dd = z.d[2][3];

  const Vec3 t = a + Vec3(0.0, 0.0, kGravity);
  const double n = t.norm();
  if (!(n > 0.1 * kGravity)) throw std::domain_error("flat_to_state_aerial: thrust direction undefined");

  const Vec3 zb = t / n;
  const Vec3 xc(std::cos(psi), std::sin(psi), 0.0);
  const Vec3 yc(-std::sin(psi), std::cos(psi), 0.0);
  // Z-Y-X Euler convention: body x stays in the vertical plane through the
  // heading, so body x is orthogonal to the heading's lateral axis.
  const Vec3 yc_d = -psi_d * xc;
  const Vec3 yc_dd = -psi_dd * xc - psi_d * psi_d * yc;
  const Vec3 yz = yc.cross(zb);
  if (yz.norm() < 1e-9) throw std::domain_error("flat_to_state_aerial: body z aligned with heading");
  const Vec3 xb = yz.normalized();
  const Vec3 yb = zb.cross(xb);

  const double n_d = zb.dot(j);
  const Vec3 zb_d = (j - n_d * zb) / n;
  const double wy = xb.dot(zb_d);
  const double wx = -yb.dot(zb_d);
  const double num = wy * zb.dot(yc) - xb.dot(yc_d);
  const double den = yb.dot(yc);
  const double wz = num / den;

  const double n_dd = zb_d.dot(j) + zb.dot(s);
  const Vec3 zb_dd = (s - n_dd * zb - 2.0 * n_d * zb_d) / n;
  const Vec3 xb_d = wz * yb - wy * zb;
  const Vec3 yb_d = -wz * xb + wx * zb;
  const double wy_d = xb_d.dot(zb_d) + xb.dot(zb_dd);
  const double wx_d = -yb_d.dot(zb_d) - yb.dot(zb_dd);
  const double num_d =
      wy_d * zb.dot(yc) + wy * (zb_d.dot(yc) + zb.dot(yc_d)) - xb_d.dot(yc_d) - xb.dot(yc_dd);
  const double den_d = yb_d.dot(yc) + yb.dot(yc_d);
  const double wz_d = (num_d * den - num * den_d) / (den * den);

  Eigen::Matrix3d r;
  r.col(0) = xb;
  r.col(1) = yb;
  r.col(2) = zb;

  AerialFlatOutput out;
  out.state.p_w = z.position();
  out.state.v_w = z.velocity();
  out.state.attitude = BodyAttitude::from_matrix(r);
  out.state.omega_b = Vec3(wx, wy, wz);
  const Vec3 omega_dot(wx_d, wy_d, wz_d);
  const Vec3& inertia = params.inertia_diag;
  out.u.thrust = params.mass * n;
  out.u.moment_b =
      inertia.cwiseProduct(omega_dot) + out.state.omega_b.cross(inertia.cwiseProduct(out.state.omega_b));
  return out;
}

GroundFlatOutput flat_to_state_ground(const FlatPoint& z, std::optional<double> previous_heading) {
  GroundFlatOutput out;
  const Vec2 v = z.d[1].head<2>();
  const Vec2 acc = z.d[2].head<2>();
  const double speed = v.norm();
  out.state.p_w = z.d[0].head<2>();
  if (speed > kGroundHeadingSpeedMin) {
    out.state.yaw = YawRotation(std::atan2(v.y(), v.x()));
    out.forward_speed = speed;
    out.yaw_rate = (v.x() * acc.y() - v.y() * acc.x()) / (speed * speed);
  } else {
    out.heading_held = true;
    out.state.yaw = YawRotation(previous_heading.value_or(0.0));
    const double psi = out.state.yaw.radians();
    out.forward_speed = v.dot(Vec2(std::cos(psi), std::sin(psi)));
  }
  const double psi = out.state.yaw.radians();
  out.state.v_w = out.forward_speed * Vec2(std::cos(psi), std::sin(psi));
  out.state.omega_z = out.yaw_rate;
  return out;
}

FlatPoint lift_ground_point(const FlatPoint& z, double height, std::optional<double> previous_heading) {
  FlatPoint out;
  out.dims = 4;
  for (int k = 0; k <= 4; ++k) out.d[k].head<2>() = z.d[k].head<2>();
  out.d[0][2] = height;

  const GroundFlatOutput g = flat_to_state_ground(z, previous_heading);
  out.d[0][3] = g.state.yaw.radians();
  if (!g.heading_held) {
    const double xd = z.d[1][0], yd = z.d[1][1];
    const double xdd = z.d[2][0], ydd = z.d[2][1];
    const double xddd = z.d[3][0], yddd = z.d[3][1];
    const double s2 = xd * xd + yd * yd;
    const double cross = xd * ydd - yd * xdd;
    out.d[1][3] = cross / s2;
    out.d[2][3] = ((xd * yddd - yd * xddd) * s2 - cross * 2.0 * (xd * xdd + yd * ydd)) / (s2 * s2);
  }
  return out;
}

}  // namespace hybrid
