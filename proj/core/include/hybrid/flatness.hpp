#ifndef HYBRID_FLATNESS_HPP
#define HYBRID_FLATNESS_HPP

#include "hybrid/geometry.hpp"
#include "hybrid/vehicle_sim.hpp"

#include <array>
#include <optional>

namespace hybrid {

/// Flat output with derivatives 0..4. Ground points use 2 dimensions (x, y);
/// aerial points use 4 (x, y, z, yaw). Unused components are zero.
struct FlatPoint {
  int dims = 2;
  std::array<Eigen::Vector4d, 5> d{Eigen::Vector4d::Zero(), Eigen::Vector4d::Zero(), Eigen::Vector4d::Zero(),
                                   Eigen::Vector4d::Zero(), Eigen::Vector4d::Zero()};

  Vec3 position() const { return d[0].head<3>(); }
  Vec3 velocity() const { return d[1].head<3>(); }
  Vec3 acceleration() const { return d[2].head<3>(); }
  Vec3 jerk() const { return d[3].head<3>(); }
  Vec3 snap() const { return d[4].head<3>(); }
  double yaw() const { return d[0][3]; }
};

struct FlatBoundary {
  Eigen::Vector4d position = Eigen::Vector4d::Zero();
  Eigen::Vector4d velocity = Eigen::Vector4d::Zero();
};

struct FlatSample {
  FlatPoint point;
  bool clamped = false;
};

inline constexpr double kMinTrajectoryDuration = 0.2;
inline constexpr double kMaxTrajectoryDuration = 30.0;

/// Per-axis degree-9 polynomial pinned by position and velocity at both ends,
/// with acceleration, jerk and snap zero at both ends.
///
/// Evaluated on normalized time tau = (t - t0) / T through the four Hermite
/// basis polynomials of that boundary problem. Their coefficients are small
/// integers, so boundary derivatives of order 2..4 are exactly zero.
class FlatTrajectory {
 public:
  /// Throws std::invalid_argument if T is outside [0.2, 30] s, dims is not 2
  /// or 4, or an endpoint is non-finite.
  static FlatTrajectory fit(const FlatBoundary& start, const FlatBoundary& end, double duration, int dims,
                            double t0 = 0.0);

  int dims() const { return dims_; }
  double t0() const { return t0_; }
  double duration() const { return duration_; }
  double t_end() const { return t0_ + duration_; }
  const FlatBoundary& start() const { return start_; }
  const FlatBoundary& end() const { return end_; }

  /// Monomial coefficients of one axis in s = t - t0, lowest order first.
  std::array<double, 10> coefficients(int axis) const;

  /// Value and derivatives 1..4 at t; t outside [t0, t0 + T] is clamped.
  FlatSample sample(double t) const;

 private:
  FlatTrajectory() = default;

  int dims_ = 2;
  double t0_ = 0.0;
  double duration_ = 1.0;
  FlatBoundary start_;
  FlatBoundary end_;
};

/// Basis coefficients c_0..c_9 of H_k(tau), k = 0..3, for the weights
/// (p0, v0 * T, p1, v1 * T).
const std::array<std::array<double, 10>, 4>& hermite9_basis();

struct AerialFlatOutput {
  AerialState state;
  ControlInput u;
};

/// Flat output to aerial state and input. Throws std::domain_error when
/// |a + g z| <= 0.1 g and std::invalid_argument for a 2-D point.
AerialFlatOutput flat_to_state_aerial(const FlatPoint& z, const VehicleParams& params);

inline constexpr double kGroundHeadingSpeedMin = 0.05;

struct GroundFlatOutput {
  GroundState state;
  double forward_speed = 0.0;
  double yaw_rate = 0.0;
  /// Set when the speed is below the heading threshold; the previous heading
  /// (or zero) is held and the yaw rate is reported as zero.
  bool heading_held = false;
};

/// Flat output to rolling state and unicycle inputs (v_x, yaw rate).
GroundFlatOutput flat_to_state_ground(const FlatPoint& z, std::optional<double> previous_heading = std::nullopt);

/// Embeds a planar flat point into 4-D flat space at constant height with yaw
/// following the direction of travel (derivatives through 2).
FlatPoint lift_ground_point(const FlatPoint& z, double height, std::optional<double> previous_heading = std::nullopt);

}  // namespace hybrid

#endif  // HYBRID_FLATNESS_HPP
