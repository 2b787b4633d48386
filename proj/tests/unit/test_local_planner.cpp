#include "hybrid/local_planner.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

namespace hybrid {
namespace {

constexpr double kDeg = kPi / 180.0;

MotionPrimitive blank_primitive() {
  return {fit_primitive(Vec3::Zero(), Vec3::Zero(), Vec3(1, 0, 0), Vec3::Zero(), 1.0, MobilityMode::Ground, 0.0),
          Vec3(1, 0, 0)};
}

// A wall of points at x = wall_x spanning y in [-3, 3] and z in [0, 1.5].
PointIndex wall_at(double wall_x) {
  std::vector<Vec3> pts;
  for (double y = -3.0; y <= 3.0; y += 0.05)
    for (double z = 0.0; z <= 1.5; z += 0.1) pts.emplace_back(wall_x, y, z);
  return PointIndex(pts);
}

TEST(GenerateEndpoints, GroundArc) {
  PlannerParams p;
  p.n_azimuth = 5;
  const auto e = generate_endpoints(Vec3::Zero(), 0.0, MobilityMode::Ground, p, 2.0);
  ASSERT_EQ(e.size(), 5u);
  const double az[] = {-120, -60, 0, 60, 120};
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(e[i].norm(), 2.0, 1e-12);
    EXPECT_NEAR(std::atan2(e[i].y(), e[i].x()), az[i] * kDeg, 1e-12);
    EXPECT_EQ(e[i].z(), 0.0);
  }
}

TEST(GenerateEndpoints, AerialTriplesCount) {
  const PlannerParams p;
  EXPECT_EQ(generate_endpoints(Vec3::Zero(), 0.3, MobilityMode::Aerial, p, 2.0).size(), 3u * p.n_azimuth);
  EXPECT_EQ(generate_endpoints(Vec3::Zero(), 0.3, MobilityMode::Ground, p, 2.0).size(),
            static_cast<std::size_t>(p.n_azimuth));
}

TEST(GenerateEndpoints, MatchesSphericalOracle) {
  const PlannerParams p;
  const Vec3 origin(1.0, -2.0, 0.8);
  const double heading = 0.4;
  const auto e = generate_endpoints(origin, heading, MobilityMode::Aerial, p, 1.7);
  const double elevations[] = {0.0, 15 * kDeg, -15 * kDeg};
  for (int ring = 0; ring < 3; ++ring)
    for (int i = 0; i < p.n_azimuth; ++i) {
      const double az = heading - 120 * kDeg + 240 * kDeg * i / (p.n_azimuth - 1);
      const double el = elevations[ring];
      const Vec3 expected = origin + 1.7 * Vec3(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
      ASSERT_LT((e[ring * p.n_azimuth + i] - expected).norm(), 1e-12);
    }
}

TEST(CollisionCost, Tiers) {
  PlannerParams p;
  p.vehicle_radius = 0.3;
  EXPECT_EQ(collision_cost(0.2, p).cost, 1e6);
  EXPECT_EQ(collision_cost(0.2, p).verdict, Verdict::Collision);
  EXPECT_DOUBLE_EQ(collision_cost(0.5, p).cost, 99.5);
  EXPECT_EQ(collision_cost(0.5, p).verdict, Verdict::NearCollision);
  EXPECT_EQ(collision_cost(1.0, p).cost, 0.0);
  EXPECT_EQ(collision_cost(1.0, p).verdict, Verdict::Free);
  EXPECT_EQ(collision_cost(0.3, p).verdict, Verdict::NearCollision);
}

TEST(CollisionCost, StrictlyDecreasingInNearBand) {
  const PlannerParams p;
  double previous = collision_cost(p.vehicle_radius, p).cost;
  for (double d = p.vehicle_radius + 0.01; d < p.buffer; d += 0.01) {
    const double c = collision_cost(d, p).cost;
    ASSERT_LT(c, previous);
    previous = c;
  }
}

TEST(ScorePrimitive, FreeSpaceGoalCost) {
  PlannerParams p;
  p.goal_weight = 2.0;
  MotionPrimitive prim{fit_primitive(Vec3::Zero(), Vec3::Zero(), Vec3(1, 0, 0), Vec3::Zero(), 2.0,
                                     MobilityMode::Ground, 0.0),
                       Vec3(1, 0, 0)};
  score_primitive(prim, PointIndex{}, LocalGoal{Vec3(4, 0, 0)}, MobilityMode::Ground, p);
  EXPECT_EQ(prim.verdict, Verdict::Free);
  EXPECT_DOUBLE_EQ(prim.c_total, 6.0);
  EXPECT_EQ(prim.c_total, prim.c_collision + prim.c_goal);
}

TEST(ScorePrimitive, DistanceIsMinimumOverQueryPoints) {
  const PlannerParams p;
  const PointIndex index(std::vector<Vec3>{Vec3(1.0, 0.8, 0.0), Vec3(3.0, -3.0, 0.0)});
  MotionPrimitive prim{fit_primitive(Vec3::Zero(), Vec3(0.3, 0, 0), Vec3(2, 0, 0), Vec3(0.3, 0, 0), 2.0 / 0.3,
                                     MobilityMode::Ground, 0.0),
                       Vec3(2, 0, 0)};
  score_primitive(prim, index, LocalGoal{Vec3(2, 0, 0)}, MobilityMode::Ground, p);
  double oracle = 1e9;
  for (int k = 1; k <= p.query_points; ++k) {
    const Vec3 q = prim.traj.sample(prim.traj.duration() * k / p.query_points).point.position();
    for (const Vec3& o : index.points()) oracle = std::min(oracle, (q - o).norm());
  }
  EXPECT_NEAR(prim.d_obstacle, oracle, 1e-12);
  EXPECT_EQ(prim.verdict, Verdict::NearCollision);
  EXPECT_NEAR(prim.c_collision, 100.0 - oracle, 1e-12);
}

TEST(ScorePrimitive, FloorCountsWhileFlying) {
  const PlannerParams p;
  MotionPrimitive prim{fit_primitive(Vec3(0, 0, 0.2), Vec3::Zero(), Vec3(1, 0, 0.2), Vec3::Zero(), 3.0,
                                     MobilityMode::Aerial, 0.0),
                       Vec3(1, 0, 0.2)};
  score_primitive(prim, PointIndex{}, LocalGoal{Vec3(1, 0, 0.2), MobilityMode::Aerial}, MobilityMode::Aerial, p);
  EXPECT_EQ(prim.verdict, Verdict::Collision);
}

TEST(SelectPrimitive, SingleAndDirectional) {
  const PlannerParams p;
  const PointIndex empty;
  const LocalGoal goal{Vec3(5, 0, 0)};
  std::vector<MotionPrimitive> prims;
  for (double x : {-1.0, 1.0}) {
    MotionPrimitive m{fit_primitive(Vec3::Zero(), Vec3::Zero(), Vec3(x, 0, 0), Vec3::Zero(), 3.0,
                                    MobilityMode::Ground, 0.0),
                      Vec3(x, 0, 0)};
    m.index = static_cast<int>(prims.size());
    score_primitive(m, empty, goal, MobilityMode::Ground, p);
    prims.push_back(m);
  }
  EXPECT_EQ(select_primitive({prims[0]}), std::optional<std::size_t>(0));
  EXPECT_EQ(select_primitive(prims), std::optional<std::size_t>(1));
}

TEST(SelectPrimitive, MatchesLinearScanArgmin) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> cost(0.0, 10.0);
  std::uniform_int_distribution<int> coarse(0, 3);
  std::bernoulli_distribution collides(0.3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<MotionPrimitive> prims(15, blank_primitive());
    for (int i = 0; i < 15; ++i) {
      prims[i].index = i;
      // Coarse values force ties so the tie-break order is exercised.
      prims[i].c_total = trial % 2 ? cost(rng) : coarse(rng);
      prims[i].heading_change = coarse(rng);
      prims[i].verdict = collides(rng) ? Verdict::Collision : Verdict::Free;
    }
    std::optional<std::size_t> oracle;
    for (std::size_t i = 0; i < prims.size(); ++i) {
      if (prims[i].verdict == Verdict::Collision) continue;
      if (!oracle) {
        oracle = i;
        continue;
      }
      const auto key = [&](std::size_t k) {
        return std::make_tuple(prims[k].c_total, prims[k].heading_change, prims[k].index);
      };
      if (key(i) < key(*oracle)) oracle = i;
    }
    ASSERT_EQ(select_primitive(prims), oracle);
  }
}

TEST(SelectPrimitive, AllCollisionIsEmpty) {
  std::vector<MotionPrimitive> prims(3, blank_primitive());
  for (auto& m : prims) m.verdict = Verdict::Collision;
  EXPECT_FALSE(select_primitive(prims).has_value());
}

TEST(ExtractSetpoint, StartEndAndInterior) {
  MotionPrimitive prim{fit_primitive(Vec3(0, 0, 1), Vec3(0.3, 0, 0), Vec3(2, 0.5, 1.2), Vec3(0, 0.3, 0), 5.0,
                                     MobilityMode::Aerial, 10.0, 0.0, 0.5),
                       Vec3(2, 0.5, 1.2)};
  const Setpoint a = extract_setpoint(prim, 10.0, 0.0, MobilityMode::Aerial);
  EXPECT_LT((a.position - Vec3(0, 0, 1)).norm(), 1e-12);
  EXPECT_LT((a.velocity_ff - Vec3(0.3, 0, 0)).norm(), 1e-12);
  const Setpoint b = extract_setpoint(prim, 10.0, 5.0, MobilityMode::Aerial);
  EXPECT_LT((b.position - Vec3(2, 0.5, 1.2)).norm(), 1e-12);
  EXPECT_NEAR(*b.yaw, 0.5, 1e-12);

  const FlatPoint z = prim.traj.sample(10.4).point;
  const Setpoint c = extract_setpoint(prim, 10.0, 0.4, MobilityMode::Aerial);
  EXPECT_LT((c.position - z.position()).norm(), 1e-15);
  EXPECT_LT((c.accel_ff - z.acceleration()).norm(), 1e-15);
  EXPECT_EQ(c.mode, MobilityMode::Aerial);
}

TEST(ExtractSetpoint, GroundHeadingFromVelocity) {
  MotionPrimitive prim{fit_primitive(Vec3::Zero(), Vec3(0, 0.3, 0), Vec3(0, 2, 0), Vec3(0, 0.3, 0), 2.0 / 0.3,
                                     MobilityMode::Ground, 0.0),
                       Vec3(0, 2, 0.25)};
  const Setpoint s = extract_setpoint(prim, 0.0, 1.5, MobilityMode::Ground);
  EXPECT_NEAR(*s.yaw, kPi / 2, 1e-12);
  EXPECT_EQ(s.position.z(), 0.25);
}

TEST(PlanStep, ModeMismatchNearGoalRequestsTakeOff) {
  LocalPlanner planner{PlannerParams{}};
  PlannerInput in;
  in.goal = {Vec3(0.1, 0, 1.0), MobilityMode::Aerial};
  const PlanResult r = planner.plan_step(in, PointIndex{});
  EXPECT_EQ(r.setpoint.transition, Transition::TakeOff);
  EXPECT_EQ(planner.pending_transition(), Transition::TakeOff);
  planner.transition_finished();
  EXPECT_EQ(planner.pending_transition(), Transition::None);
}

TEST(PlanStep, AerialToGroundGoalRequestsLand) {
  LocalPlanner planner{PlannerParams{}};
  PlannerInput in;
  in.mode = MobilityMode::Aerial;
  in.position = Vec3(1, 1, 1);
  in.goal = {Vec3(1.05, 1, 0), MobilityMode::Ground};
  EXPECT_EQ(planner.plan_step(in, PointIndex{}).setpoint.transition, Transition::Land);
}

TEST(PlanStep, DistantModeSwitchApproachesFirst) {
  LocalPlanner planner{PlannerParams{}};
  PlannerInput in;
  in.goal = {Vec3(1.0, 0, 1.0), MobilityMode::Aerial};
  const PlanResult r = planner.plan_step(in, PointIndex{});
  EXPECT_TRUE(r.approaching_transition);
  EXPECT_EQ(r.setpoint.transition, Transition::None);
  EXPECT_EQ(planner.pending_transition(), Transition::None);
  ASSERT_TRUE(r.selected.has_value());
  EXPECT_LT((r.primitives[*r.selected].endpoint.head<2>() - Vec2(1.0, 0)).norm(), 1e-12);
}

TEST(PlanStep, FreeCorridorHeadsAtGoal) {
  LocalPlanner planner{PlannerParams{}};
  PointIndex walls;
  {
    std::vector<Vec3> pts;
    for (double x = -1.0; x <= 8.0; x += 0.05) {
      pts.emplace_back(x, 0.6, 0.2);
      pts.emplace_back(x, -0.6, 0.2);
    }
    walls = PointIndex(pts);
  }
  PlannerInput in;
  in.position = Vec3(0, 0, 0.25);
  in.velocity = Vec3(0.3, 0, 0);
  in.goal = {Vec3(6, 0, 0), MobilityMode::Ground};
  const PlanResult r = planner.plan_step(in, walls);
  ASSERT_TRUE(r.selected.has_value());
  const Vec3 v = r.primitives[*r.selected].traj.sample(planner.params().lookahead).point.velocity();
  EXPECT_LT(std::abs(std::atan2(v.y(), v.x())), 10 * kDeg);
}

TEST(PlanStep, NeverSelectsCollisionWhenFreeExists) {
  const PlannerParams params;
  LocalPlanner planner{params};
  const PointIndex wall = wall_at(1.0);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> yaw(-kPi, kPi);
  for (int i = 0; i < 50; ++i) {
    PlannerInput in;
    in.yaw = yaw(rng);
    in.goal = {Vec3(3, 0, 0), MobilityMode::Ground};
    const PlanResult r = planner.plan_step(in, wall);
    bool any_free = false;
    for (const auto& m : r.primitives) any_free |= m.verdict != Verdict::Collision;
    if (any_free) {
      ASSERT_TRUE(r.selected.has_value());
      ASSERT_NE(r.primitives[*r.selected].verdict, Verdict::Collision);
    }
  }
}

TEST(PlanStep, Deterministic) {
  const PointIndex wall = wall_at(1.5);
  PlannerInput in;
  in.position = Vec3(0, 0.2, 0.25);
  in.yaw = 0.3;
  in.velocity = Vec3(0.2, 0.05, 0);
  in.now = 12.0;
  in.goal = {Vec3(3, 2, 0), MobilityMode::Ground};
  LocalPlanner a{PlannerParams{}};
  LocalPlanner b{PlannerParams{}};
  const PlanResult ra = a.plan_step(in, wall);
  const PlanResult rb = b.plan_step(in, wall);
  ASSERT_EQ(ra.selected, rb.selected);
  EXPECT_EQ(ra.setpoint.position, rb.setpoint.position);
  std::ostringstream ta, tb;
  write_primitives_text(ta, ra);
  write_primitives_text(tb, rb);
  EXPECT_EQ(ta.str(), tb.str());
  EXPECT_NE(ta.str().find('*'), std::string::npos);
}

TEST(PlanStep, BoxedInHolds) {
  std::vector<Vec3> pts;
  for (double a = 0.0; a < 2 * kPi; a += 0.02) pts.emplace_back(0.2 * std::cos(a), 0.2 * std::sin(a), 0.25);
  // Surrounded at 0.2 m: the escape pass applies but nothing moves away.
  LocalPlanner planner{PlannerParams{}};
  PlannerInput in;
  in.position = Vec3(0, 0, 0.25);
  in.goal = {Vec3(3, 0, 0), MobilityMode::Ground};
  const PlanResult r = planner.plan_step(in, PointIndex(pts));
  EXPECT_TRUE(r.all_collision);
  EXPECT_FALSE(r.selected.has_value());
  EXPECT_EQ(r.setpoint.velocity_ff, Vec3::Zero());
  EXPECT_EQ(r.setpoint.position, in.position);
}

TEST(PlanStep, EscapesWhenAlreadyInsideRadius) {
  // Wall 0.25 m to the left: every primitive starts inside the radius, but
  // the ones heading right do not get closer.
  std::vector<Vec3> pts;
  for (double x = -3.0; x <= 3.0; x += 0.05) pts.emplace_back(x, 0.25, 0.25);
  LocalPlanner planner{PlannerParams{}};
  PlannerInput in;
  in.position = Vec3(0, 0, 0.25);
  in.goal = {Vec3(3, -1, 0), MobilityMode::Ground};
  const PlanResult r = planner.plan_step(in, PointIndex(pts));
  ASSERT_TRUE(r.selected.has_value());
  EXPECT_TRUE(r.escaping);
  EXPECT_GE(r.primitives[*r.selected].d_obstacle, 0.25 - 1e-3);
}

TEST(PlanStep, LocalizationLossGivesVelocityOnly) {
  LocalPlanner planner{PlannerParams{}};
  PlannerInput in;
  in.mode = MobilityMode::Aerial;
  in.position = Vec3(0, 0, 1);
  in.velocity = Vec3(0.3, 0, 0);
  in.yaw = 0.2;
  in.localization_ok = false;
  in.goal = {Vec3(4, 0, 1), MobilityMode::Aerial};
  const PlanResult r = planner.plan_step(in, PointIndex{});
  EXPECT_FALSE(r.setpoint.position_valid);
  EXPECT_EQ(r.setpoint.position, Vec3::Zero());
  EXPECT_EQ(r.setpoint.accel_ff, Vec3::Zero());
  EXPECT_GT(r.setpoint.velocity_ff.norm(), 0.0);
  EXPECT_NEAR(*r.setpoint.yaw, 0.2, 1e-15);
  EXPECT_EQ(r.setpoint.transition, Transition::None);
}

TEST(PlannerParams, Validation) {
  PlannerParams p;
  p.buffer = 0.3;
  EXPECT_THROW(LocalPlanner{p}, std::invalid_argument);
  PlannerParams q;
  q.horizon = 0.0;
  EXPECT_THROW(LocalPlanner{q}, std::invalid_argument);
  PlannerParams r;
  r.goal_weight = -1.0;
  EXPECT_THROW(LocalPlanner{r}, std::invalid_argument);
}

}  // namespace
}  // namespace hybrid
