#ifndef HYBRID_SENSORS_HPP
#define HYBRID_SENSORS_HPP

#include "hybrid/geometry.hpp"
#include "hybrid/scene.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace hybrid {

/// Spinning multi-ring LIDAR mounted at the body origin.
struct LidarSpec {
  int rings = 16;
  double min_elevation = -15.0 * kPi / 180.0;
  double max_elevation = 15.0 * kPi / 180.0;
  double azimuth_resolution = 2.0 * kPi / 180.0;
  double min_range = 0.1;
  double max_range = 8.0;
  /// Half-width of the two sectors around body +y and -y hidden by the wheels.
  double wheel_occlusion_half_width = 30.0 * kPi / 180.0;
  bool wheel_occlusion = true;
  double range_noise_sigma = 0.0;

  void validate() const;
};

/// Body-frame unit ray directions in scan order, after wheel occlusion.
std::vector<Vec3> lidar_ray_directions(const LidarSpec& spec);

/// Ray-cast scan; points are returned in the sensor (body) frame. Range noise
/// is drawn from `rng` only when range_noise_sigma is positive.
std::vector<Vec3> simulate_lidar(const AerialState& pose, const Scene& world, const LidarSpec& spec,
                                 std::mt19937_64* rng = nullptr);

struct Clearance {
  double below = 0.0;
  double above = 0.0;
};

/// Vertical range readings from the body origin, saturated at max_range.
Clearance measure_clearance(const Vec3& origin, const Scene& world, double max_range = 5.0);

struct PoseNoise {
  double position_sigma = 0.0;
  double yaw_sigma = 0.0;
  double velocity_sigma = 0.0;
};

/// Interval [t_start, t_end) during which position localization is lost.
struct FailureWindow {
  double t_start = 0.0;
  double t_end = 0.0;
};

struct PoseEstimate {
  Vec3 position = Vec3::Zero();
  YawRotation yaw;
  Vec3 velocity = Vec3::Zero();
  double encoder_speed = 0.0;
  bool localization_ok = true;
};

/// Simulated state estimator: truth plus zero-mean Gaussian noise. During a
/// failure window the position estimate freezes at its last good value while
/// velocity keeps updating.
class PoseSensor {
 public:
  PoseSensor(PoseNoise noise, std::vector<FailureWindow> failures, std::uint64_t seed);

  PoseEstimate sense(const VehicleState& truth, double t, double wheel_radius);
  bool localization_ok_at(double t) const;

 private:
  PoseNoise noise_;
  std::vector<FailureWindow> failures_;
  std::mt19937_64 rng_;
  Vec3 last_position_ = Vec3::Zero();
  bool has_last_ = false;
};

/// Everything the autonomy stack receives per perception tick.
struct SensorFrame {
  std::vector<Vec3> pointcloud;  // sensor frame
  Clearance clearance;
  PoseEstimate pose;
};

}  // namespace hybrid

#endif  // HYBRID_SENSORS_HPP
