#include "hybrid/global_planner.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

namespace hybrid {
namespace {

struct World {
  GridGeometry grid;
  DistanceField edt;

  explicit World(double w, double h, double zmax = 1.6)
      : grid(GridGeometry::covering(Vec3::Zero(), Vec3(w, h, zmax), 0.1)), edt(grid, 2.0) {}

  void block(const Vec3& lo, const Vec3& hi) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec3 c = grid.center(grid.unflat(i));
      if ((c.array() >= lo.array()).all() && (c.array() <= hi.array()).all()) edt.set_occupied(grid.unflat(i));
    }
  }
};

LatticeParams params_for(double w, double h) {
  LatticeParams p;
  p.bounds_min = Vec2::Zero();
  p.bounds_max = Vec2(w, h);
  return p;
}

TEST(NodeCost, Examples) {
  const LatticeParams p;
  EXPECT_EQ(node_cost(p.d_safe, MobilityMode::Ground, p), 0.0);
  EXPECT_EQ(node_cost(5.0, MobilityMode::Ground, p), 0.0);
  EXPECT_DOUBLE_EQ(node_cost(0.4, MobilityMode::Aerial, p) - node_cost(0.4, MobilityMode::Ground, p), p.c_fly);
  EXPECT_DOUBLE_EQ(node_cost(p.d_safe / 2, MobilityMode::Ground, p), p.w_obs * p.d_safe / 2);
  EXPECT_NEAR(p.c_fly, 971.9 / 194.5 - 1.0, 0.05);
}

TEST(Lattice, EmptyWorldFullGroundGrid) {
  World w(5.0, 5.0);
  w.edt.update();
  LatticeParams p = params_for(5.0, 5.0);
  p.spacing = 0.5;
  const Lattice lat = Lattice::build(w.edt, p);
  EXPECT_EQ(lat.nx(), 11);
  EXPECT_EQ(lat.ny(), 11);
  for (int j = 0; j < 11; ++j)
    for (int i = 0; i < 11; ++i) ASSERT_TRUE(lat.node(lat.id(i, j, -1)).free);
  EXPECT_EQ(lat.free_count(), 3u * 121u);
}

TEST(Lattice, WallExcludesNearbyNodes) {
  World w(6.0, 3.0);
  w.block(Vec3(2.95, 0, 0), Vec3(3.05, 3.0, 1.6));
  w.edt.update();
  const LatticeParams p = params_for(6.0, 3.0);
  const Lattice lat = Lattice::build(w.edt, p);
  std::size_t oracle_free = 0;
  for (std::size_t k = 0; k < lat.size(); ++k) {
    const LatticeNode& n = lat.node(static_cast<int>(k));
    // The occupied voxels span x in [2.9, 3.1].
    const double gap = std::max(0.0, std::abs(n.position.x() - 3.0) - 0.1);
    if (gap <= p.vehicle_radius + p.margin - 1e-9) {
      ASSERT_FALSE(n.free) << n.position.transpose();
    }
    if (n.free) {
      ++oracle_free;
      ASSERT_GT(n.clearance, p.vehicle_radius + p.margin);
    }
  }
  // Combinatorial count: columns whose x is more than 0.45 m from the wall
  // band, over every row and layer.
  int columns = 0;
  for (int i = 0; i < lat.nx(); ++i)
    if (std::abs(i * p.spacing - 3.0) - 0.1 > p.vehicle_radius + p.margin + 1e-9) ++columns;
  EXPECT_EQ(oracle_free, static_cast<std::size_t>(columns * lat.ny() * 3));
}

TEST(AStar, StraightCorridorStaysOnGround) {
  World w(6.0, 2.0);
  w.edt.update();
  const Lattice lat = Lattice::build(w.edt, params_for(6.0, 2.0));
  const int s = *lat.nearest_free(Vec3(0.3, 0.9, 0.25), MobilityMode::Ground);
  const int g = *lat.nearest_free(Vec3(5.7, 0.9, 0.25), MobilityMode::Ground);
  const HybridPath path = astar_search(lat, s, g);
  ASSERT_TRUE(path.reachable);
  EXPECT_EQ(path.aerial_count(), 0u);
  EXPECT_EQ(path.nodes.front().id, s);
  EXPECT_EQ(path.nodes.back().id, g);
}

// Corridor fully blocked by a 0.4 m box: the only way through is a hop.
World blocked_corridor() {
  World w(6.0, 1.8);
  w.block(Vec3(0, 0, 0), Vec3(6.0, 0.05, 1.6));
  w.block(Vec3(0, 1.75, 0), Vec3(6.0, 1.8, 1.6));
  w.block(Vec3(2.9, 0, 0), Vec3(3.1, 1.8, 0.4));
  w.edt.update();
  return w;
}

TEST(AStar, HopsOverLowObstacleAndMatchesDijkstra) {
  World w = blocked_corridor();
  const Lattice lat = Lattice::build(w.edt, params_for(6.0, 1.8));
  const int s = *lat.nearest_free(Vec3(0.6, 0.9, 0.25), MobilityMode::Ground);
  const int g = *lat.nearest_free(Vec3(5.4, 0.9, 0.25), MobilityMode::Ground);
  const HybridPath path = astar_search(lat, s, g);
  ASSERT_TRUE(path.reachable);
  EXPECT_GT(path.aerial_count(), 0u);
  EXPECT_EQ(path.nodes.front().mode, MobilityMode::Ground);
  EXPECT_EQ(path.nodes.back().mode, MobilityMode::Ground);
  EXPECT_EQ(path.mode_changes, 2);
  const auto dist = oracle::dijkstra(lat, s);
  EXPECT_NEAR(path.total_cost, dist[static_cast<std::size_t>(g)], 1e-9);

  // Consecutive nodes are adjacent; mode changes are vertical.
  for (std::size_t k = 1; k < path.nodes.size(); ++k) {
    const LatticeNode& a = lat.node(path.nodes[k - 1].id);
    const LatticeNode& b = lat.node(path.nodes[k].id);
    EXPECT_LE(std::abs(a.i - b.i), 1);
    EXPECT_LE(std::abs(a.j - b.j), 1);
    if (a.mode != b.mode) {
      EXPECT_EQ(a.i, b.i);
      EXPECT_EQ(a.j, b.j);
    }
    EXPECT_TRUE(b.free);
  }
}

TEST(AStar, SealedGoalIsUnreachable) {
  World w(6.0, 6.0);
  // Room walls reach the ceiling, so flight cannot get in either.
  w.block(Vec3(3.5, 3.5, 0), Vec3(3.6, 6.0, 1.6));
  w.block(Vec3(3.5, 3.5, 0), Vec3(6.0, 3.6, 1.6));
  w.block(Vec3(0, 0, 1.5), Vec3(6.0, 6.0, 1.6));
  w.edt.update();
  LatticeParams p = params_for(6.0, 6.0);
  const Lattice lat = Lattice::build(w.edt, p);
  const int s = *lat.nearest_free(Vec3(0.6, 0.6, 0.25), MobilityMode::Ground);
  const int g = *lat.nearest_free(Vec3(5.1, 5.1, 0.25), MobilityMode::Ground);
  EXPECT_FALSE(astar_search(lat, s, g).reachable);
}

TEST(AStar, MatchesDijkstraOnRandomWorlds) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pos(0.3, 3.3);
  std::uniform_real_distribution<double> height(0.2, 1.6);
  for (int trial = 0; trial < 20; ++trial) {
    World w(3.6, 3.6);
    for (int b = 0; b < 6; ++b) {
      const Vec3 lo(pos(rng), pos(rng), 0.0);
      w.block(lo, lo + Vec3(0.3, 0.3, height(rng)));
    }
    w.edt.update();
    LatticeParams p = params_for(3.6, 3.6);
    p.aerial_levels = {0.8};
    const Lattice lat = Lattice::build(w.edt, p);
    ASSERT_LE(lat.size(), 1000u);
    std::vector<int> free_ids;
    for (std::size_t k = 0; k < lat.size(); ++k)
      if (lat.node(static_cast<int>(k)).free) free_ids.push_back(static_cast<int>(k));
    ASSERT_GT(free_ids.size(), 2u);
    std::uniform_int_distribution<std::size_t> pick(0, free_ids.size() - 1);
    const int s = free_ids[pick(rng)];
    const int g = free_ids[pick(rng)];
    const auto dist = oracle::dijkstra(lat, s);
    const HybridPath path = astar_search(lat, s, g);
    const double d = dist[static_cast<std::size_t>(g)];
    ASSERT_EQ(path.reachable, std::isfinite(d));
    if (path.reachable) {
      ASSERT_NEAR(path.total_cost, d, 1e-9 * std::max(1.0, d));
    }
  }
}

TEST(AStar, HeuristicAdmissibleOnExpandedNodes) {
  World w = blocked_corridor();
  const Lattice lat = Lattice::build(w.edt, params_for(6.0, 1.8));
  const int s = *lat.nearest_free(Vec3(0.6, 0.9, 0.25), MobilityMode::Ground);
  const int g = *lat.nearest_free(Vec3(5.4, 0.9, 0.25), MobilityMode::Ground);
  SearchOptions opt;
  opt.record_expanded = true;
  const HybridPath path = astar_search(lat, s, g, opt);
  ASSERT_FALSE(path.expanded.empty());
  // Edges are symmetric, so Dijkstra from the goal gives the cost-to-go.
  const auto to_go = oracle::dijkstra(lat, g);
  const Vec3 goal = lat.node(g).position;
  for (int id : path.expanded) {
    const double h = (lat.node(id).position - goal).norm();
    ASSERT_LE(h, to_go[static_cast<std::size_t>(id)] + 1e-9);
  }
}

TEST(AStar, PrefersGroundDetourWhenCheaper) {
  // A wall with a gap: rolling around costs about 2.4 m extra, flying over
  // saves that but pays the per-metre surcharge and two transitions.
  World w(6.0, 6.0);
  w.block(Vec3(2.95, 0.0, 0), Vec3(3.05, 4.5, 0.4));
  w.edt.update();
  const LatticeParams p = params_for(6.0, 6.0);
  const Lattice lat = Lattice::build(w.edt, p);
  const int s = *lat.nearest_free(Vec3(1.5, 1.5, 0.25), MobilityMode::Ground);
  const int g = *lat.nearest_free(Vec3(4.5, 1.5, 0.25), MobilityMode::Ground);
  const HybridPath path = astar_search(lat, s, g);
  ASSERT_TRUE(path.reachable);
  EXPECT_EQ(path.aerial_count(), 0u);
}

TEST(NextWaypoint, LookaheadAndTransition) {
  HybridPath path;
  path.reachable = true;
  for (int k = 0; k < 10; ++k)
    path.nodes.push_back({k, Vec3(0.3 * k, 0, 0.25), k >= 3 && k <= 5 ? MobilityMode::Aerial : MobilityMode::Ground});
  path.nodes[3].position.z() = 0.8;
  HybridPath ground = path;
  for (auto& n : ground.nodes) n.mode = MobilityMode::Ground;

  const WaypointResult a = next_waypoint(ground, Vec3(0, 0, 0.25), 3, MobilityMode::Ground);
  EXPECT_EQ(a.closest, 0u);
  EXPECT_EQ(a.goal.position, ground.nodes[3].position);
  EXPECT_EQ(a.goal.mode, MobilityMode::Ground);
  EXPECT_FALSE(a.transition);

  const WaypointResult b = next_waypoint(path, Vec3(0, 0, 0.25), 4, MobilityMode::Ground);
  EXPECT_EQ(b.goal.mode, MobilityMode::Aerial);
  EXPECT_TRUE(b.transition);
  EXPECT_EQ(b.goal.position, path.nodes[3].position);

  const WaypointResult c = next_waypoint(ground, Vec3(2.6, 0, 0.25), 4, MobilityMode::Ground);
  EXPECT_EQ(c.goal.position, ground.nodes.back().position);

  EXPECT_TRUE(next_waypoint(ground, Vec3(1.0, 4.0, 0.25), 4, MobilityMode::Ground).replan);
  EXPECT_THROW(next_waypoint(HybridPath{}, Vec3::Zero(), 4, MobilityMode::Ground), std::invalid_argument);
}

TEST(NextWaypoint, ClosestNodeMatchesLinearScan) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.2);
  HybridPath path;
  path.reachable = true;
  for (int k = 0; k < 40; ++k) path.nodes.push_back({k, Vec3(0.3 * k, std::sin(0.3 * k), 0.25), MobilityMode::Ground});
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = static_cast<std::size_t>(trial % 40);
    const Vec3 pose = path.nodes[k].position + Vec3(noise(rng), noise(rng), 0.0);
    std::size_t best = 0;
    for (std::size_t m = 1; m < path.nodes.size(); ++m)
      if ((path.nodes[m].position - pose).norm() < (path.nodes[best].position - pose).norm()) best = m;
    ASSERT_EQ(next_waypoint(path, pose, 4, MobilityMode::Ground).closest, best);
  }
}

TEST(PathExport, OneLinePerNode) {
  HybridPath path;
  path.nodes.push_back({0, Vec3(0, 0, 0.25), MobilityMode::Ground, 0.0});
  path.nodes.push_back({1, Vec3(0.3, 0, 0.8), MobilityMode::Aerial, 4.5});
  std::ostringstream out;
  write_path_text(out, path);
  std::istringstream in(out.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    std::istringstream f(line);
    double x, y, z, c;
    std::string mode;
    ASSERT_TRUE(f >> x >> y >> z >> mode >> c) << line;
    ++lines;
  }
  EXPECT_EQ(lines, 2);
  EXPECT_NE(out.str().find("aerial"), std::string::npos);
}

}  // namespace
}  // namespace hybrid
