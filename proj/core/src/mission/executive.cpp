#include "hybrid/mission/executive.hpp"

#include "hybrid/mission/circuit.hpp"
#include "hybrid/world_mapper.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hybrid {

const char* to_string(MissionPolicy p) {
  switch (p) {
    case MissionPolicy::FlyOnly:
      return "fly";
    case MissionPolicy::Hybrid:
      return "hybrid";
    case MissionPolicy::RollOnly:
      break;
  }
  return "roll";
}

MissionPolicy parse_policy(const std::string& name) {
  if (name == "roll") return MissionPolicy::RollOnly;
  if (name == "fly") return MissionPolicy::FlyOnly;
  if (name == "hybrid") return MissionPolicy::Hybrid;
  throw std::invalid_argument("policy: expected roll, fly or hybrid, got '" + name + "'");
}

namespace {

constexpr double kSearchBehind = 1.0;
constexpr double kSearchAhead = 1.0;

int ticks_per(double control_rate, double rate) {
  return std::max(1, static_cast<int>(std::lround(control_rate / rate)));
}

Eigen::Matrix3d sensor_rotation(const PoseEstimate& est, const AerialState& truth) {
  return BodyAttitude::from_euler_zyx(est.yaw.radians(), truth.attitude.pitch(), truth.attitude.roll()).matrix();
}

AerialState estimated_aerial(const PoseEstimate& est, const AerialState& truth) {
  AerialState a = truth;
  a.p_w = est.position;
  a.v_w = est.velocity;
  a.attitude = BodyAttitude::from_euler_zyx(est.yaw.radians(), truth.attitude.pitch(), truth.attitude.roll());
  return a;
}

GroundState estimated_ground(const PoseEstimate& est, const GroundState& truth) {
  GroundState g = truth;
  g.p_w = est.position.head<2>();
  g.v_w = est.velocity.head<2>();
  g.yaw = est.yaw;
  return g;
}

Setpoint hold_setpoint(const Vec3& position, double yaw, MobilityMode mode) {
  Setpoint sp;
  sp.position = position;
  sp.yaw = yaw;
  sp.mode = mode;
  return sp;
}

}  // namespace

MissionResult run_mission(const Scenario& scenario, MissionPolicy policy) {
  scenario.validate();
  const Scenario& s = scenario;
  const VehicleParams& vp = s.vehicle;
  const Gains& gains = s.gains;
  const Scene world = policy == MissionPolicy::RollOnly ? s.world.without_removable() : s.world;

  const double dt = 1.0 / s.rates.control;
  const int local_every = ticks_per(s.rates.control, s.rates.local);
  const double global_period = 1.0 / s.rates.global;
  double next_global = 0.0;
  const long max_ticks = static_cast<long>(std::ceil(s.mission.timeout_s / dt));

  WorldMapper mapper(GridGeometry::covering(s.map_min, s.map_max, s.mapper.occupancy.resolution), s.mapper);
  LatticeParams lattice_params = s.lattice;
  lattice_params.allow_ground = policy != MissionPolicy::FlyOnly;
  lattice_params.allow_aerial = policy != MissionPolicy::RollOnly;
  const MobilityMode preferred = lattice_params.allow_ground ? MobilityMode::Ground : MobilityMode::Aerial;
  const double preferred_z = preferred == MobilityMode::Ground ? lattice_params.ground_z : lattice_params.aerial_levels.front();

  LocalPlanner planner(s.planner);
  PoseSensor pose_sensor(s.pose_noise, s.failures, s.seed);
  std::mt19937_64 lidar_rng(s.seed * 0x9E3779B97F4A7C15ULL + 1);
  const Circuit circuit(s.circuit);
  ProgressTracker tracker(circuit, circuit.project(s.start_xy));
  ProgressTracker lap(circuit, circuit.project(s.start_xy));

  GroundState g0;
  g0.p_w = s.start_xy;
  g0.yaw = YawRotation(s.start_yaw);
  VehicleState state = g0;
  const double lap_start = lap.progress();
  MobilityMode mode = MobilityMode::Ground;
  ControllerState ctrl;
  Transition active = Transition::None;
  if (policy == MissionPolicy::FlyOnly) active = Transition::TakeOff;
  Setpoint setpoint = hold_setpoint(Vec3(s.start_xy.x(), s.start_xy.y(), vp.wheel_radius), s.start_yaw, mode);

  MissionResult result;
  HybridPath path;
  bool replan = true;
  double energy = 0.0;
  double distance = 0.0;
  double flight_time = 0.0;
  double prev_power = 0.0;
  std::vector<Vec3> cloud_w;

  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    const AerialState truth = as_aerial(state, vp.wheel_radius);
    const PoseEstimate est = pose_sensor.sense(state, t, vp.wheel_radius);

    // Perception and local planning.
    if (k % local_every == 0) {
      const std::vector<Vec3> cloud_s = simulate_lidar(truth, world, s.lidar, &lidar_rng);
      const Eigen::Matrix3d r = sensor_rotation(est, truth);
      cloud_w.clear();
      cloud_w.reserve(cloud_s.size());
      for (const Vec3& p : cloud_s) cloud_w.push_back(r * p + est.position);
      mapper.integrate_scan(est.position, cloud_w, est.localization_ok);

      const double progress = tracker.update(est.position.head<2>());
      if (active == Transition::None) {
        // Global planning runs on the first perception tick at or after its deadline.
        const bool global_due = t + 1e-9 >= next_global;
        if (global_due) next_global += global_period;
        if ((replan || global_due) && est.localization_ok) {
          // Search only the stretch of the circuit between the vehicle and the
          // goal, so unobserved space behind the vehicle cannot offer a
          // cheaper way round.
          const double lo = progress - kSearchBehind;
          const double hi = progress + s.mission.goal_lead + kSearchAhead;
          const double L = circuit.length();
          const auto in_window = [&](const Vec2& p) {
            const double sp = circuit.project(p);
            const double shifted = sp + L * std::ceil((lo - sp) / L);
            return shifted <= hi;
          };
          const Lattice lattice = Lattice::build(mapper.edt(), lattice_params, in_window);
          const Vec2 g = circuit.point_at(progress + s.mission.goal_lead);
          const auto goal = lattice.nearest_free(Vec3(g.x(), g.y(), preferred_z), preferred);
          Vec3 here = est.position;
          if (mode == MobilityMode::Ground) here.z() = lattice_params.ground_z;
          const auto start = lattice.nearest_free(here, mode);
          if (goal && start) {
            HybridPath candidate = astar_search(lattice, *start, *goal);
            if (candidate.reachable) path = std::move(candidate);
          }
          replan = false;
        }

        LocalGoal local_goal;
        if (!path.nodes.empty()) {
          const WaypointResult wp = next_waypoint(path, est.position, s.mission.waypoint_lookahead, mode);
          local_goal = wp.goal;
          replan = replan || wp.replan;
        } else {
          const Vec2 g = circuit.point_at(progress + s.mission.goal_lead);
          local_goal.position = Vec3(g.x(), g.y(), mode == MobilityMode::Ground ? vp.wheel_radius : preferred_z);
          local_goal.mode = mode;
        }

        const PointIndex index = est.localization_ok ? mapper.build_collision_index(est.position, cloud_w)
                                                     : build_cloud_index(cloud_w, s.mapper.occupancy.ground_clip_z);
        PlannerInput in;
        in.goal = local_goal;
        in.mode = mode;
        in.position = est.position;
        in.yaw = est.yaw.radians();
        in.velocity = est.velocity;
        in.localization_ok = est.localization_ok;
        in.now = t;
        const PlanResult plan = planner.plan_step(in, index);
        setpoint = plan.setpoint;
        if (setpoint.transition != Transition::None) active = setpoint.transition;
      }
    }

    // Control.
    ControlInput u;
    bool saturated = false;
    bool finished_transition = false;
    if (active != Transition::None) {
      const Clearance clearance = measure_clearance(truth.p_w, world);
      const TransitionOutput out =
          transition_step(active, estimated_aerial(est, truth), clearance.below, gains, vp, ctrl, dt);
      u = out.u;
      if (out.timed_out) {
        result.status = MissionStatus::Timeout;
      } else if (out.done) {
        finished_transition = true;
      }
    } else if (mode == MobilityMode::Ground) {
      const RollingOutput out =
          rolling_step(setpoint, estimated_ground(est, std::get<GroundState>(state)), gains, vp, ctrl, dt);
      u = out.u;
      saturated = out.clamped;
    } else {
      const FlyingOutput out = flying_step(setpoint, estimated_aerial(est, truth), gains, vp, ctrl, dt);
      u = out.u;
      saturated = out.saturated;
    }
    const Allocation alloc = allocate_motors(u, vp);
    saturated = saturated || alloc.saturated;
    const ControlInput applied = unmix_motors(alloc.thrusts, vp);
    const double power = power_draw(alloc.thrusts, vp);
    if (k > 0) energy += 0.5 * (prev_power + power) * dt;
    prev_power = power;

    const Transition logged = active;
    const bool airborne = mode == MobilityMode::Aerial || active != Transition::None;

    TelemetryRecord rec;
    rec.t = t;
    rec.truth = truth;
    rec.estimate = est;
    rec.mode = mode;
    rec.transition = logged;
    rec.setpoint = setpoint;
    rec.u = applied;
    rec.thrusts = alloc.thrusts;
    rec.power_w = power;
    rec.energy_j = energy;
    rec.distance_m = distance;
    rec.saturated = saturated;
    rec.localization_ok = est.localization_ok;

    // Terminal checks on the current state.
    if (result.status == MissionStatus::Running) {
      if (world.distance_to_obstacles(truth.p_w) < vp.body_radius) {
        result.status = MissionStatus::Collision;
      } else if (lap.update(truth.p_w.head<2>()) - lap_start > s.mission.completion_distance &&
                 (truth.p_w.head<2>() - s.start_xy).norm() < s.mission.completion_radius) {
        result.status = MissionStatus::Completed;
      } else if (k >= max_ticks) {
        result.status = MissionStatus::Timeout;
      }
    }
    rec.status = result.status;
    result.telemetry.push_back(rec);
    if (result.status != MissionStatus::Running) break;

    // Advance the plant.
    if (active == Transition::TakeOff && std::holds_alternative<GroundState>(state)) {
      state = embed_ground_state(std::get<GroundState>(state), vp.wheel_radius);
    }
    if (std::holds_alternative<AerialState>(state)) {
      AerialState a = step_aerial(std::get<AerialState>(state), applied, dt, vp);
      resolve_ground_contact(a, vp);
      state = a;
    } else {
      state = step_ground(std::get<GroundState>(state), applied, dt, vp);
    }
    if (airborne) flight_time += dt;
    const AerialState next = as_aerial(state, vp.wheel_radius);
    distance += (next.p_w.head<2>() - truth.p_w.head<2>()).norm();

    if (finished_transition) {
      if (active == Transition::TakeOff) {
        mode = MobilityMode::Aerial;
        ++result.takeoffs;
        ctrl.reset_flying();
      } else {
        state = enforce_no_slip(project_aerial_state(std::get<AerialState>(state)));
        mode = MobilityMode::Ground;
        ++result.landings;
        ctrl.reset_rolling();
      }
      active = Transition::None;
      planner.transition_finished();
      const AerialState now = as_aerial(state, vp.wheel_radius);
      setpoint = hold_setpoint(now.p_w, now.attitude.yaw(), mode);
      replan = true;
    }
  }

  result.duration_s = result.telemetry.back().t;
  result.distance_m = distance;
  result.energy_j = energy;
  result.flight_fraction = result.duration_s > 0.0 ? flight_time / result.duration_s : 0.0;
  result.progress_m = lap.progress() - lap_start;
  result.energy = energy_report(result.telemetry, s.mission.p_ref);
  result.final_map = mapper.map();
  result.last_path = std::move(path);
  return result;
}

}  // namespace hybrid
