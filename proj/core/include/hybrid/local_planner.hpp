#ifndef HYBRID_LOCAL_PLANNER_HPP
#define HYBRID_LOCAL_PLANNER_HPP

#include "hybrid/control.hpp"
#include "hybrid/flatness.hpp"
#include "hybrid/point_index.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace hybrid {

struct PlannerParams {
  double horizon = 2.0;
  int n_azimuth = 15;
  double arc_half_span = 120.0 * kPi / 180.0;
  /// Extra endpoint rings used while flying, as elevation angles.
  std::vector<double> aerial_elevations{15.0 * kPi / 180.0, -15.0 * kPi / 180.0};
  double vehicle_radius = 0.35;
  double buffer = 1.0;
  double goal_weight = 1.0;
  double cruise_speed = 0.3;
  double lookahead = 1.5;
  double replan_rate = 10.0;
  int query_points = 10;
  /// Horizontal distance at which a pending mode switch is executed.
  double transition_radius = 0.2;
  /// While flying, the floor counts as an obstacle at height zero.
  bool floor_is_obstacle_in_flight = true;

  void validate() const;
  double primitive_duration(double horizon_m) const;
};

enum class Verdict { Free, NearCollision, Collision };

const char* to_string(Verdict v);

inline constexpr double kCollisionCost = 1e6;

struct CollisionCost {
  double cost = 0.0;
  Verdict verdict = Verdict::Free;
};

/// Tiered collision cost from the minimum obstacle distance along a primitive.
CollisionCost collision_cost(double d_obstacle, const PlannerParams& params);

struct LocalGoal {
  Vec3 position = Vec3::Zero();
  MobilityMode mode = MobilityMode::Ground;
};

struct MotionPrimitive {
  FlatTrajectory traj;
  Vec3 endpoint = Vec3::Zero();
  double d_obstacle = 0.0;
  double c_collision = 0.0;
  double c_goal = 0.0;
  double c_total = 0.0;
  Verdict verdict = Verdict::Free;
  double heading_change = 0.0;
  int index = 0;
};

/// Endpoints on an arc of radius `horizon` centered on `heading`; flying
/// adds one copy of the arc per configured elevation.
std::vector<Vec3> generate_endpoints(const Vec3& origin, double heading, MobilityMode mode,
                                     const PlannerParams& params, double horizon);

/// Boundary trajectory from (start, start_velocity) to (endpoint,
/// end_velocity). Flying primitives carry yaw from `start_yaw` to `end_yaw`.
FlatTrajectory fit_primitive(const Vec3& start, const Vec3& start_velocity, const Vec3& endpoint,
                             const Vec3& end_velocity, double duration, MobilityMode mode, double t0,
                             double start_yaw = 0.0, double end_yaw = 0.0);

/// Fills distances and costs. `query_points` samples at k T / n, k = 1..n.
/// An empty index is free space.
void score_primitive(MotionPrimitive& prim, const PointIndex& index, const LocalGoal& goal, MobilityMode mode,
                     const PlannerParams& params);

/// Index of the cheapest non-colliding primitive (ties: smaller heading
/// change, then lower index); empty when every primitive collides.
std::optional<std::size_t> select_primitive(const std::vector<MotionPrimitive>& prims);

/// Samples the primitive `lookahead` seconds after `now` (clamped to the
/// trajectory) and converts the flat sample to a controller setpoint.
Setpoint extract_setpoint(const MotionPrimitive& prim, double now, double lookahead, MobilityMode mode);

struct PlannerInput {
  LocalGoal goal;
  MobilityMode mode = MobilityMode::Ground;
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
  Vec3 velocity = Vec3::Zero();
  bool localization_ok = true;
  double now = 0.0;
};

struct PlanResult {
  Setpoint setpoint;
  std::vector<MotionPrimitive> primitives;
  std::optional<std::size_t> selected;
  bool all_collision = false;
  /// The selection came from the escape pass (vehicle already inside the
  /// radius, no primitive gets closer).
  bool escaping = false;
  /// True while the planner is approaching a pending mode switch.
  bool approaching_transition = false;
};

/// Receding-horizon primitive planner. Owns the latched transition request.
class LocalPlanner {
 public:
  explicit LocalPlanner(PlannerParams params);

  const PlannerParams& params() const { return params_; }

  PlanResult plan_step(const PlannerInput& in, const PointIndex& index);

  /// Called by the executive once a take-off or landing has completed.
  void transition_finished();
  Transition pending_transition() const { return pending_; }

 private:
  PlanResult plan_primitives(const PlannerInput& in, const PointIndex& index, const LocalGoal& goal,
                             bool approach) const;

  PlannerParams params_;
  Transition pending_ = Transition::None;
};

/// One line per primitive: index, verdict, costs, endpoint; '*' marks the
/// selected primitive.
void write_primitives_text(std::ostream& out, const PlanResult& result);

}  // namespace hybrid

#endif  // HYBRID_LOCAL_PLANNER_HPP
