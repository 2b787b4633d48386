#ifndef HYBRID_MISSION_CIRCUIT_HPP
#define HYBRID_MISSION_CIRCUIT_HPP

#include "hybrid/geometry.hpp"

#include <vector>

namespace hybrid {

/// Closed planar polyline parameterized by arc length.
class Circuit {
 public:
  /// Throws std::invalid_argument for fewer than three points or a
  /// zero-length segment.
  explicit Circuit(std::vector<Vec2> points);

  double length() const { return cumulative_.back(); }
  const std::vector<Vec2>& points() const { return points_; }

  /// Point at arc length s, wrapped into [0, length).
  Vec2 point_at(double s) const;

  /// Arc length of the closest point on the circuit.
  double project(const Vec2& p) const;

  /// Closest arc length within [s_from - back, s_from + ahead] (unwrapped).
  double project_near(const Vec2& p, double s_from, double back, double ahead) const;

 private:
  std::vector<Vec2> points_;
  std::vector<double> cumulative_;  // cumulative_[k] = arc length at points_[k]; last entry closes the loop
};

/// Monotone progress along a circuit. Progress only moves forward within a
/// small window, so the tracker cannot jump across a thin wall.
class ProgressTracker {
 public:
  explicit ProgressTracker(const Circuit& circuit, double start_s = 0.0);

  /// Updates from the current position and returns unwrapped progress (m).
  double update(const Vec2& p);
  double progress() const { return s_; }

 private:
  const Circuit* circuit_;
  double s_;
};

}  // namespace hybrid

#endif  // HYBRID_MISSION_CIRCUIT_HPP
