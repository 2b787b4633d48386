#include "hybrid/local_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace hybrid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// A pending mode switch is also executed once the goal falls behind the
// vehicle within this distance.
constexpr double kPassedGoalRadius = 0.5;
constexpr double kMinHorizon = 0.05;
// Escape primitives may not come closer than the current clearance minus this.
constexpr double kEscapeTolerance = 1e-3;

double planar_distance(const Vec3& a, const Vec3& b) { return (a - b).head<2>().norm(); }

Vec3 unit_or(const Vec3& v, const Vec3& fallback) {
  const double n = v.norm();
  return n > 1e-9 ? Vec3(v / n) : fallback;
}

}  // namespace

void PlannerParams::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("planner.horizon: must be positive");
  if (n_azimuth < 1) throw std::invalid_argument("planner.n_azimuth: must be >= 1");
  if (!(arc_half_span >= 0.0 && arc_half_span <= kPi)) throw std::invalid_argument("planner.arc_half_span: out of range");
  if (!(vehicle_radius > 0.0)) throw std::invalid_argument("planner.vehicle_radius: must be positive");
  if (!(buffer > vehicle_radius)) throw std::invalid_argument("planner.buffer: must exceed vehicle_radius");
  if (!(goal_weight > 0.0)) throw std::invalid_argument("planner.goal_weight: must be positive");
  if (!(cruise_speed > 0.0)) throw std::invalid_argument("planner.cruise_speed: must be positive");
  if (!(lookahead >= 0.0)) throw std::invalid_argument("planner.lookahead: must be >= 0");
  if (!(replan_rate > 0.0)) throw std::invalid_argument("planner.replan_rate: must be positive");
  if (query_points < 1) throw std::invalid_argument("planner.query_points: must be >= 1");
  if (!(transition_radius > 0.0)) throw std::invalid_argument("planner.transition_radius: must be positive");
}

double PlannerParams::primitive_duration(double horizon_m) const {
  return std::clamp(horizon_m / cruise_speed, kMinTrajectoryDuration, kMaxTrajectoryDuration);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::NearCollision:
      return "near";
    case Verdict::Collision:
      return "collision";
    case Verdict::Free:
      break;
  }
  return "free";
}

CollisionCost collision_cost(double d_obstacle, const PlannerParams& params) {
  if (d_obstacle < params.vehicle_radius) return {kCollisionCost, Verdict::Collision};
  if (d_obstacle < params.buffer) return {100.0 * params.goal_weight - d_obstacle, Verdict::NearCollision};
  return {0.0, Verdict::Free};
}

std::vector<Vec3> generate_endpoints(const Vec3& origin, double heading, MobilityMode mode,
                                     const PlannerParams& params, double horizon) {
  std::vector<double> elevations{0.0};
  if (mode == MobilityMode::Aerial)
    elevations.insert(elevations.end(), params.aerial_elevations.begin(), params.aerial_elevations.end());
  std::vector<Vec3> out;
  out.reserve(elevations.size() * params.n_azimuth);
  for (double el : elevations) {
    for (int i = 0; i < params.n_azimuth; ++i) {
      const double az = params.n_azimuth == 1
                            ? heading
                            : heading - params.arc_half_span +
                                  2.0 * params.arc_half_span * i / static_cast<double>(params.n_azimuth - 1);
      out.push_back(origin +
                    horizon * Vec3(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)));
    }
  }
  return out;
}

FlatTrajectory fit_primitive(const Vec3& start, const Vec3& start_velocity, const Vec3& endpoint,
                             const Vec3& end_velocity, double duration, MobilityMode mode, double t0,
                             double start_yaw, double end_yaw) {
  FlatBoundary a;
  FlatBoundary b;
  a.position.head<3>() = start;
  a.velocity.head<3>() = start_velocity;
  b.position.head<3>() = endpoint;
  b.velocity.head<3>() = end_velocity;
  if (mode == MobilityMode::Ground) return FlatTrajectory::fit(a, b, duration, 2, t0);
  a.position[3] = start_yaw;
  b.position[3] = start_yaw + s1_distance(end_yaw, start_yaw);
  return FlatTrajectory::fit(a, b, duration, 4, t0);
}

void score_primitive(MotionPrimitive& prim, const PointIndex& index, const LocalGoal& goal, MobilityMode mode,
                     const PlannerParams& params) {
  const FlatTrajectory& traj = prim.traj;
  double d = kInf;
  for (int k = 1; k <= params.query_points; ++k) {
    const double t = traj.t0() + traj.duration() * k / static_cast<double>(params.query_points);
    Vec3 q = traj.sample(t).point.position();
    if (traj.dims() == 2) q.z() = prim.endpoint.z();
    d = std::min(d, index.nearest_distance(q, kInf));
    if (mode == MobilityMode::Aerial && params.floor_is_obstacle_in_flight) d = std::min(d, std::max(q.z(), 0.0));
  }
  prim.d_obstacle = d;
  const CollisionCost c = collision_cost(d, params);
  prim.c_collision = c.cost;
  prim.verdict = c.verdict;
  const double goal_distance =
      mode == MobilityMode::Ground ? planar_distance(prim.endpoint, goal.position) : (prim.endpoint - goal.position).norm();
  prim.c_goal = params.goal_weight * goal_distance;
  prim.c_total = prim.c_collision + prim.c_goal;
}

std::optional<std::size_t> select_primitive(const std::vector<MotionPrimitive>& prims) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    const MotionPrimitive& p = prims[i];
    if (p.verdict == Verdict::Collision) continue;
    if (!best) {
      best = i;
      continue;
    }
    const MotionPrimitive& b = prims[*best];
    if (p.c_total < b.c_total ||
        (p.c_total == b.c_total &&
         (p.heading_change < b.heading_change || (p.heading_change == b.heading_change && p.index < b.index))))
      best = i;
  }
  return best;
}

Setpoint extract_setpoint(const MotionPrimitive& prim, double now, double lookahead, MobilityMode mode) {
  const FlatPoint z = prim.traj.sample(now + lookahead).point;
  Setpoint sp;
  sp.mode = mode;
  sp.position = z.position();
  sp.velocity_ff = z.velocity();
  sp.accel_ff = z.acceleration();
  if (prim.traj.dims() == 2) {
    sp.position.z() = prim.endpoint.z();
    const Vec2 v = z.d[1].head<2>();
    if (v.norm() > kGroundHeadingSpeedMin) sp.yaw = std::atan2(v.y(), v.x());
  } else {
    sp.yaw = wrap_angle(z.yaw());
  }
  return sp;
}

LocalPlanner::LocalPlanner(PlannerParams params) : params_(std::move(params)) { params_.validate(); }

void LocalPlanner::transition_finished() { pending_ = Transition::None; }

PlanResult LocalPlanner::plan_primitives(const PlannerInput& in, const PointIndex& index, const LocalGoal& goal,
                                         bool approach) const {
  PlanResult result;
  const Vec3 heading_dir(std::cos(in.yaw), std::sin(in.yaw), 0.0);
  const double goal_bearing = std::atan2(goal.position.y() - in.position.y(), goal.position.x() - in.position.x());
  const double goal_distance = in.mode == MobilityMode::Ground ? planar_distance(goal.position, in.position)
                                                                 : (goal.position - in.position).norm();
  double horizon = params_.horizon;
  if (approach) horizon = std::max(std::min(horizon, goal_distance), kMinHorizon);

  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<Vec3> endpoints = generate_endpoints(in.position, in.yaw, in.mode, params_, horizon);
    if (approach && goal_distance <= horizon + 1e-9) endpoints.push_back(goal.position);
    result.primitives.clear();
    const double duration = params_.primitive_duration(horizon);
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
      Vec3 endpoint = endpoints[i];
      if (in.mode == MobilityMode::Ground) endpoint.z() = in.position.z();
      const Vec3 chord = endpoint - in.position;
      // Rolling is nonholonomic and starts along the heading at the measured
      // forward speed; flight starts along the chord.
      const Vec3 v0 = in.mode == MobilityMode::Aerial
                          ? Vec3(params_.cruise_speed * unit_or(chord, heading_dir))
                          : Vec3(std::clamp(in.velocity.dot(heading_dir), 0.0, params_.cruise_speed) * heading_dir);
      const Vec3 v1 = approach ? Vec3::Zero() : Vec3(params_.cruise_speed * unit_or(chord, heading_dir));
      MotionPrimitive prim{fit_primitive(in.position, v0, endpoint, v1, duration, in.mode, in.now, in.yaw,
                                         goal_bearing),
                           endpoint};
      prim.index = static_cast<int>(i);
      prim.heading_change = std::abs(s1_distance(std::atan2(chord.y(), chord.x()), in.yaw));
      score_primitive(prim, index, goal, in.mode, params_);
      result.primitives.push_back(std::move(prim));
    }
    result.selected = select_primitive(result.primitives);
    if (result.selected) break;
    horizon *= 0.5;
  }

  // Already inside the vehicle radius: every primitive collides near its
  // start, so accept the ones that do not get any closer.
  const double d_now = index.nearest_distance(in.position, kInf);
  if (!result.selected && d_now < params_.vehicle_radius) {
    PlannerParams escape = params_;
    escape.vehicle_radius = std::max(d_now - kEscapeTolerance, 0.0);
    for (MotionPrimitive& prim : result.primitives) score_primitive(prim, index, goal, in.mode, escape);
    result.selected = select_primitive(result.primitives);
    result.escaping = result.selected.has_value();
  }

  if (!result.selected) {
    result.all_collision = true;
    Setpoint& sp = result.setpoint;
    sp.mode = in.mode;
    sp.position = in.position;
    sp.yaw = goal_bearing;
    return result;
  }
  result.setpoint = extract_setpoint(result.primitives[*result.selected], in.now, params_.lookahead, in.mode);
  return result;
}

PlanResult LocalPlanner::plan_step(const PlannerInput& in, const PointIndex& index) {
  if (!in.localization_ok) {
    LocalGoal goal = in.goal;
    if (in.mode == MobilityMode::Ground) goal.position.z() = in.position.z();
    PlanResult r = plan_primitives(in, index, goal, false);
    Setpoint& sp = r.setpoint;
    if (r.selected) {
      const FlatPoint z = r.primitives[*r.selected].traj.sample(in.now + params_.lookahead).point;
      sp.velocity_ff = z.velocity();
    } else {
      sp.velocity_ff.setZero();
    }
    sp.position.setZero();
    sp.accel_ff.setZero();
    sp.position_valid = false;
    if (in.mode == MobilityMode::Aerial) sp.yaw = in.yaw;
    return r;
  }

  const Transition wanted = in.mode == MobilityMode::Ground ? Transition::TakeOff : Transition::Land;
  if (pending_ == Transition::None && in.goal.mode != in.mode) {
    const Vec3 offset = in.goal.position - in.position;
    const double d = offset.head<2>().norm();
    Vec3 forward(std::cos(in.yaw), std::sin(in.yaw), 0.0);
    if (in.mode == MobilityMode::Aerial) forward = unit_or(Vec3(in.velocity.x(), in.velocity.y(), 0.0), Vec3::Zero());
    const bool passed = d < kPassedGoalRadius && offset.head<2>().dot(forward.head<2>()) < 0.0;
    if (d < params_.transition_radius || passed) pending_ = wanted;
  }
  if (pending_ != Transition::None) {
    PlanResult r;
    r.setpoint.mode = in.mode;
    r.setpoint.transition = pending_;
    r.setpoint.position = in.position;
    r.setpoint.yaw = in.yaw;
    return r;
  }

  if (in.goal.mode != in.mode) {
    LocalGoal approach_goal = in.goal;
    approach_goal.position.z() = in.position.z();
    PlanResult r = plan_primitives(in, index, approach_goal, true);
    r.approaching_transition = true;
    r.setpoint.velocity_ff.setZero();
    return r;
  }

  LocalGoal goal = in.goal;
  if (in.mode == MobilityMode::Ground) goal.position.z() = in.position.z();
  PlanResult r = plan_primitives(in, index, goal, false);
  r.setpoint.velocity_ff.setZero();
  return r;
}

void write_primitives_text(std::ostream& out, const PlanResult& result) {
  for (std::size_t i = 0; i < result.primitives.size(); ++i) {
    const MotionPrimitive& p = result.primitives[i];
    out << (result.selected && *result.selected == i ? '*' : ' ') << ' ' << p.index << ' ' << to_string(p.verdict)
        << ' ' << p.d_obstacle << ' ' << p.c_collision << ' ' << p.c_goal << ' ' << p.c_total << ' '
        << p.endpoint.x() << ' ' << p.endpoint.y() << ' ' << p.endpoint.z() << '\n';
  }
}

}  // namespace hybrid
