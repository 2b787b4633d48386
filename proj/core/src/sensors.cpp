#include "hybrid/sensors.hpp"

#include <cmath>
#include <stdexcept>

namespace hybrid {

void LidarSpec::validate() const {
  if (rings < 1) throw std::invalid_argument("lidar.rings: must be >= 1");
  if (!(max_elevation >= min_elevation)) throw std::invalid_argument("lidar elevation band is empty");
  if (!(azimuth_resolution > 0.0)) throw std::invalid_argument("lidar.azimuth_resolution: must be positive");
  if (!(max_range > min_range && min_range >= 0.0)) throw std::invalid_argument("lidar range limits are invalid");
  if (range_noise_sigma < 0.0) throw std::invalid_argument("lidar.range_noise_sigma: must be >= 0");
}

std::vector<Vec3> lidar_ray_directions(const LidarSpec& spec) {
  std::vector<Vec3> dirs;
  const int n_az = static_cast<int>(std::lround(2.0 * kPi / spec.azimuth_resolution));
  for (int r = 0; r < spec.rings; ++r) {
    const double el = spec.rings == 1 ? 0.5 * (spec.min_elevation + spec.max_elevation)
                                      : spec.min_elevation + (spec.max_elevation - spec.min_elevation) * r /
                                                                 static_cast<double>(spec.rings - 1);
    for (int k = 0; k < n_az; ++k) {
      const double az = k * 2.0 * kPi / n_az;
      if (spec.wheel_occlusion) {
        const double off_left = std::abs(s1_distance(az, 0.5 * kPi));
        const double off_right = std::abs(s1_distance(az, -0.5 * kPi));
        if (off_left <= spec.wheel_occlusion_half_width || off_right <= spec.wheel_occlusion_half_width) continue;
      }
      dirs.emplace_back(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
    }
  }
  return dirs;
}

std::vector<Vec3> simulate_lidar(const AerialState& pose, const Scene& world, const LidarSpec& spec,
                                 std::mt19937_64* rng) {
  const Eigen::Matrix3d r = pose.attitude.matrix();
  std::vector<Vec3> cloud;
  std::normal_distribution<double> noise(0.0, spec.range_noise_sigma > 0.0 ? spec.range_noise_sigma : 1.0);
  for (const Vec3& d_body : lidar_ray_directions(spec)) {
    const auto hit = world.raycast(pose.p_w, r * d_body, spec.max_range);
    if (!hit) continue;
    double range = *hit;
    if (spec.range_noise_sigma > 0.0 && rng != nullptr) range += noise(*rng);
    if (range < spec.min_range || range > spec.max_range) continue;
    cloud.push_back(range * d_body);
  }
  return cloud;
}

Clearance measure_clearance(const Vec3& origin, const Scene& world, double max_range) {
  Clearance c;
  c.below = world.raycast(origin, -Vec3::UnitZ(), max_range).value_or(max_range);
  c.above = world.raycast(origin, Vec3::UnitZ(), max_range).value_or(max_range);
  return c;
}

PoseSensor::PoseSensor(PoseNoise noise, std::vector<FailureWindow> failures, std::uint64_t seed)
    : noise_(noise), failures_(std::move(failures)), rng_(seed) {}

bool PoseSensor::localization_ok_at(double t) const {
  for (const FailureWindow& w : failures_)
    if (t >= w.t_start && t < w.t_end) return false;
  return true;
}

PoseEstimate PoseSensor::sense(const VehicleState& truth, double t, double wheel_radius) {
  const AerialState a = as_aerial(truth, wheel_radius);
  std::normal_distribution<double> unit(0.0, 1.0);
  // Draw the full noise vector every call so the random stream does not depend
  // on the failure schedule.
  const Vec3 dp(unit(rng_), unit(rng_), unit(rng_));
  const double dyaw = unit(rng_);
  const Vec3 dv(unit(rng_), unit(rng_), unit(rng_));
  const double denc = unit(rng_);

  PoseEstimate est;
  est.localization_ok = localization_ok_at(t);
  const Vec3 measured = a.p_w + noise_.position_sigma * dp;
  if (est.localization_ok || !has_last_) {
    est.position = measured;
    last_position_ = measured;
    has_last_ = true;
  } else {
    est.position = last_position_;
  }
  est.yaw = YawRotation(a.attitude.yaw() + noise_.yaw_sigma * dyaw);
  est.velocity = a.v_w + noise_.velocity_sigma * dv;
  if (std::holds_alternative<GroundState>(truth)) est.velocity.z() = 0.0;
  const double heading = a.attitude.yaw();
  est.encoder_speed = a.v_w.head<2>().dot(Vec2(std::cos(heading), std::sin(heading))) +
                      noise_.velocity_sigma * denc;
  return est;
}

}  // namespace hybrid
