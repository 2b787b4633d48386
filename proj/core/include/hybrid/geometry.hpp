#ifndef HYBRID_GEOMETRY_HPP
#define HYBRID_GEOMETRY_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <variant>

namespace hybrid {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kGravity = 9.81;
inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double radians);

/// Planar heading of the rolling frame with respect to the world frame.
/// Stored wrapped to (-pi, pi].
class YawRotation {
 public:
  YawRotation() = default;
  explicit YawRotation(double psi) : psi_(wrap_angle(psi)) {}

  double radians() const { return psi_; }
  Eigen::Matrix2d matrix() const;

 private:
  double psi_ = 0.0;
};

/// Orientation of the body frame with respect to the world frame.
///
/// Backed by a unit quaternion. Euler accessors use the ZYX (yaw, pitch,
/// roll) convention, where positive pitch tilts body z toward world +x.
class BodyAttitude {
 public:
  BodyAttitude() = default;
  explicit BodyAttitude(const Eigen::Quaterniond& q);

  static BodyAttitude from_euler_zyx(double yaw, double pitch, double roll);
  static BodyAttitude from_matrix(const Eigen::Matrix3d& r);

  const Eigen::Quaterniond& quaternion() const { return q_; }
  Eigen::Matrix3d matrix() const { return q_.toRotationMatrix(); }
  Vec3 body_z() const { return matrix().col(2); }

  double yaw() const;
  double pitch() const;
  double roll() const;

 private:
  Eigen::Quaterniond q_ = Eigen::Quaterniond::Identity();
};

enum class MobilityMode { Ground, Aerial };

const char* to_string(MobilityMode mode);

struct AerialState {
  Vec3 p_w = Vec3::Zero();
  Vec3 v_w = Vec3::Zero();
  BodyAttitude attitude;
  Vec3 omega_b = Vec3::Zero();
};

/// Rolling state. The body pitch is free while rolling; roll is pinned at
/// zero because both wheels stay on the ground.
struct GroundState {
  Vec2 p_w = Vec2::Zero();
  Vec2 v_w = Vec2::Zero();
  YawRotation yaw;
  double omega_z = 0.0;
  double pitch_b = 0.0;
  double pitch_rate = 0.0;
};

using VehicleState = std::variant<GroundState, AerialState>;

MobilityMode mode_of(const VehicleState& state);

/// Signed minimal angle d in (-pi, pi] with current + d == target (mod 2pi).
double s1_distance(double target, double current);

/// Expresses a world-frame planar vector in the rolling frame (rotation by -psi).
Vec2 world_to_rolling(const Vec2& v, const YawRotation& yaw);
Vec2 rolling_to_world(const Vec2& v, const YawRotation& yaw);

/// Lifts a rolling state into the aerial representation at z = wheel_radius.
AerialState embed_ground_state(const GroundState& g, double wheel_radius);

/// Drops altitude and roll. The no-slip constraint is not enforced here.
GroundState project_aerial_state(const AerialState& a);

/// Removes any lateral velocity component in the rolling frame.
GroundState enforce_no_slip(GroundState g);

/// Body-origin pose of either representation.
AerialState as_aerial(const VehicleState& state, double wheel_radius);

bool is_finite(const AerialState& s);
bool is_finite(const GroundState& s);

}  // namespace hybrid

#endif  // HYBRID_GEOMETRY_HPP
