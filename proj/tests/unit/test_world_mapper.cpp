#include "hybrid/world_mapper.hpp"
#include "hybrid/scene.hpp"
#include "hybrid/sensors.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

namespace hybrid {
namespace {

GridGeometry box_grid(double size = 4.0) {
  return GridGeometry::covering(Vec3(0, 0, 0), Vec3(size, size, 2.0), 0.1);
}

TEST(Occupancy, RepeatedHitsOccupyEndpointAndFreeRay) {
  OccupancyMap map(box_grid(), OccupancyParams{});
  const Vec3 origin(0.55, 0.55, 0.55);
  const Vec3 hit(1.55, 0.55, 0.55);
  map.integrate_scan(origin, {hit});
  EXPECT_TRUE(map.occupied_at(hit));
  for (int n = 1; n < 10; ++n) map.integrate_scan(origin, {hit});
  const auto& g = map.grid();
  EXPECT_DOUBLE_EQ(map.log_odds(g.index_of(hit)), 3.5);
  for (double x = 0.65; x < 1.5; x += 0.1) {
    const Index3 v = g.index_of(Vec3(x, 0.55, 0.55));
    EXPECT_FALSE(map.occupied(v));
    EXPECT_LT(map.log_odds(v), 0.0);
    EXPECT_GE(map.log_odds(v), -3.5);
  }
}

TEST(Occupancy, HitCountFollowsClampedSum) {
  OccupancyMap map(box_grid(), OccupancyParams{});
  const Vec3 hit(2.05, 2.05, 1.05);
  const Index3 v = map.grid().index_of(hit);
  for (int k = 1; k <= 8; ++k) {
    map.integrate_scan(Vec3(0.55, 2.05, 1.05), {hit});
    ASSERT_NEAR(map.log_odds(v), std::min(k * 0.85, 3.5), 1e-12);
  }
}

TEST(Occupancy, EmptyScanChangesNothing) {
  OccupancyMap map(box_grid(), OccupancyParams{});
  map.integrate_scan(Vec3(1, 1, 1), {Vec3(2, 1, 1)});
  std::ostringstream before, after;
  map.write_text(before);
  const OccupancyChanges c = map.integrate_scan(Vec3(1, 1, 1), {});
  map.write_text(after);
  EXPECT_TRUE(c.empty());
  EXPECT_EQ(before.str(), after.str());
}

TEST(Occupancy, RejectsRaysBeyondMaxRange) {
  OccupancyParams p;
  p.max_range = 1.0;
  OccupancyMap map(box_grid(), p);
  const OccupancyChanges c = map.integrate_scan(Vec3(0.5, 0.5, 0.5), {Vec3(3.5, 0.5, 0.5)});
  EXPECT_EQ(c.rejected_rays, 1u);
  EXPECT_TRUE(map.occupied_voxels().empty());
}

TEST(Occupancy, WallScanLiesOnWallSurface) {
  Scene world;
  world.footprint_max = Vec2(4, 4);
  world.walls.push_back({Vec2(3.0, 0.0), Vec2(3.0, 4.0), 1.5});
  OccupancyMap map(box_grid(), OccupancyParams{});
  AerialState pose;
  pose.p_w = Vec3(1.0, 2.0, 0.25);
  std::vector<Vec3> cloud;
  for (const Vec3& b : simulate_lidar(pose, world, LidarSpec{})) cloud.push_back(pose.p_w + pose.attitude.matrix() * b);
  map.integrate_scan(pose.p_w, cloud);
  const auto occ = map.occupied_voxels();
  ASSERT_FALSE(occ.empty());
  for (const Index3& v : occ) EXPECT_LE(std::abs(map.grid().center(v).x() - 3.0), 0.1 + 1e-9);
}

TEST(Occupancy, ClearOnFailureEdgeOnly) {
  OccupancyMap map(box_grid(), OccupancyParams{});
  map.integrate_scan(Vec3(1, 1, 1), {Vec3(2, 1, 1)});
  EXPECT_TRUE(map.handle_localization_event(true).empty());
  EXPECT_FALSE(map.occupied_voxels().empty());
  const OccupancyChanges c = map.handle_localization_event(false);
  EXPECT_EQ(c.newly_freed.size(), 1u);
  const auto& g = map.grid();
  for (std::size_t i = 0; i < g.size(); ++i) ASSERT_TRUE(map.unknown(g.unflat(i)));
  EXPECT_TRUE(map.handle_localization_event(false).empty());
}

TEST(Occupancy, PostFailureMapMatchesFreshRebuild) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.3, 3.7);
  auto scan = [&] {
    std::vector<Vec3> s;
    for (int i = 0; i < 30; ++i) s.emplace_back(u(rng), u(rng), 1.0);
    return s;
  };
  const Vec3 origin(2.0, 2.0, 1.0);
  OccupancyMap map(box_grid(), OccupancyParams{});
  for (int i = 0; i < 4; ++i) map.integrate_scan(origin, scan());
  map.handle_localization_event(false);
  map.handle_localization_event(true);
  OccupancyMap fresh(box_grid(), OccupancyParams{});
  for (int i = 0; i < 3; ++i) {
    const auto s = scan();
    map.integrate_scan(origin, s);
    fresh.integrate_scan(origin, s);
  }
  std::ostringstream a, b;
  map.write_text(a);
  fresh.write_text(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Occupancy, TextExportHeaderAndOrder) {
  OccupancyMap map(box_grid(), OccupancyParams{});
  map.integrate_scan(Vec3(0.5, 0.5, 0.5), {Vec3(1.05, 2.05, 0.55), Vec3(2.05, 0.55, 0.55)});
  std::ostringstream out;
  map.write_text(out);
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("# resolution", 0), 0u);
  EXPECT_NE(s.find("# origin"), std::string::npos);
  const auto occ = map.occupied_voxels();
  EXPECT_TRUE(std::is_sorted(occ.begin(), occ.end(), [](const Index3& a, const Index3& b) {
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
  }));
}

TEST(DistanceField, EmptyGridIsDmax) {
  DistanceField edt(box_grid(2.0), 2.0);
  edt.update();
  EXPECT_DOUBLE_EQ(edt.distance(Index3(3, 3, 3)), 2.0);
  EXPECT_EQ(edt.squared_voxel_distance(Index3(3, 3, 3)), -1);
}

TEST(DistanceField, LoneObstacleDistances) {
  DistanceField edt(box_grid(2.0), 2.0);
  edt.set_occupied(Index3(10, 10, 10));
  edt.update();
  EXPECT_DOUBLE_EQ(edt.distance(Index3(10, 10, 10)), 0.0);
  EXPECT_NEAR(edt.distance(Index3(11, 10, 10)), 0.1, 1e-12);
  EXPECT_NEAR(edt.distance(Index3(10, 13, 10)), 0.3, 1e-12);
  const auto out = edt.distance_at(Vec3(-5, 0, 0));
  EXPECT_FALSE(out.in_map);
  EXPECT_EQ(out.distance, 2.0);
}

TEST(DistanceField, IncrementalMatchesBruteForce) {
  const GridGeometry grid = GridGeometry::covering(Vec3::Zero(), Vec3(2.0, 2.0, 2.0), 0.1);
  ASSERT_EQ(grid.dims, Index3(20, 20, 20));
  DistanceField edt(grid, 0.8);
  std::vector<std::uint8_t> occ(grid.size(), 0);
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> coord(0, 19);
  std::bernoulli_distribution insert(0.6);
  for (int event = 0; event < 50; ++event) {
    const Index3 v(coord(rng), coord(rng), coord(rng));
    if (insert(rng)) {
      occ[grid.flat(v)] = 1;
      edt.set_occupied(v);
    } else {
      // Delete an existing obstacle when there is one.
      std::vector<std::size_t> on;
      for (std::size_t i = 0; i < occ.size(); ++i)
        if (occ[i]) on.push_back(i);
      if (on.empty()) continue;
      const std::size_t i = on[std::uniform_int_distribution<std::size_t>(0, on.size() - 1)(rng)];
      occ[i] = 0;
      edt.set_free(grid.unflat(i));
    }
    edt.update();
    const auto oracle = oracle::brute_force_edt(grid, occ, edt.d_max_squared_voxels());
    for (std::size_t i = 0; i < grid.size(); ++i)
      ASSERT_EQ(edt.squared_voxel_distance(grid.unflat(i)), oracle[i]) << "event " << event << " voxel " << i;
  }
}

TEST(PointIndex, MatchesLinearScan) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<Vec3> pts;
  for (int i = 0; i < 1000; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
  const PointIndex index(pts);
  for (int q = 0; q < 100; ++q) {
    const Vec3 p(u(rng), u(rng), u(rng));
    double best = 1e18;
    for (const Vec3& s : pts) best = std::min(best, (s - p).norm());
    ASSERT_EQ(index.nearest_distance(p, -1.0), best);
  }
}

TEST(PointIndex, SmallCases) {
  const PointIndex one(std::vector<Vec3>{Vec3(1, 2, 3)});
  EXPECT_EQ(one.nearest(Vec3(0, 0, 0))->point, Vec3(1, 2, 3));
  const PointIndex dup(std::vector<Vec3>{Vec3(1, 1, 1), Vec3(1, 1, 1), Vec3(2, 2, 2)});
  EXPECT_EQ(dup.nearest_distance(Vec3(1, 1, 1), -1.0), 0.0);
  const PointIndex empty;
  EXPECT_FALSE(empty.nearest(Vec3::Zero()).has_value());
  EXPECT_EQ(empty.nearest_distance(Vec3::Zero(), 2.0), 2.0);
}

TEST(WorldMapper, CollisionIndexStaysInCropWindow) {
  const GridGeometry grid = GridGeometry::covering(Vec3::Zero(), Vec3(12, 12, 3), 0.1);
  WorldMapper mapper(grid, MapperParams{});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.2, 11.8);
  std::vector<Vec3> pts;
  for (int i = 0; i < 400; ++i) pts.emplace_back(u(rng), u(rng), 1.0);
  for (int i = 0; i < 3; ++i) mapper.integrate_scan(Vec3(6, 6, 1), pts, true);
  const Vec3 center(3.0, 4.0, 1.0);
  const PointIndex index = mapper.build_collision_index(center, {});
  ASSERT_FALSE(index.empty());
  for (const Vec3& p : index.points()) {
    ASSERT_LE(std::abs(p.x() - center.x()), 2.5 + 1e-9);
    ASSERT_LE(std::abs(p.y() - center.y()), 2.5 + 1e-9);
    ASSERT_LE(std::abs(p.z() - center.z()), 1.5 + 1e-9);
  }
}

TEST(WorldMapper, FloorReturnsDropped) {
  const PointIndex idx = build_cloud_index({Vec3(1, 0, 0.02), Vec3(2, 0, 0.5)}, 0.1);
  EXPECT_EQ(idx.size(), 1u);
}

TEST(WorldMapper, FailureClearsMapAndEdt) {
  const GridGeometry grid = GridGeometry::covering(Vec3::Zero(), Vec3(4, 4, 2), 0.1);
  WorldMapper mapper(grid, MapperParams{});
  mapper.integrate_scan(Vec3(1, 1, 1), {Vec3(2.05, 1.05, 1.05)}, true);
  EXPECT_NEAR(mapper.edt().distance_at(Vec3(2.05, 1.05, 1.05)).distance, 0.0, 1e-12);
  mapper.integrate_scan(Vec3(1, 1, 1), {Vec3(2.05, 1.05, 1.05)}, false);
  EXPECT_TRUE(mapper.map().occupied_voxels().empty());
  EXPECT_EQ(mapper.edt().distance_at(Vec3(2.05, 1.05, 1.05)).distance, 2.0);
}

TEST(WorldMapper, Deterministic) {
  const GridGeometry grid = GridGeometry::covering(Vec3::Zero(), Vec3(4, 4, 2), 0.1);
  WorldMapper a(grid, MapperParams{});
  WorldMapper b(grid, MapperParams{});
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.2, 3.8);
  for (int s = 0; s < 5; ++s) {
    std::vector<Vec3> pts;
    for (int i = 0; i < 50; ++i) pts.emplace_back(u(rng), u(rng), 0.8);
    a.integrate_scan(Vec3(2, 2, 1), pts, true);
    b.integrate_scan(Vec3(2, 2, 1), pts, true);
  }
  std::ostringstream ta, tb;
  a.map().write_text(ta);
  b.map().write_text(tb);
  EXPECT_EQ(ta.str(), tb.str());
}

}  // namespace
}  // namespace hybrid
