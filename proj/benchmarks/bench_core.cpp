#include "hybrid/distance_field.hpp"
#include "hybrid/global_planner.hpp"
#include "hybrid/local_planner.hpp"
#include "hybrid/mission/scenario.hpp"
#include "hybrid/sensors.hpp"
#include "hybrid/vehicle_sim.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

using namespace hybrid;

GridGeometry cube_grid(int n) {
  GridGeometry g;
  g.resolution = 0.1;
  g.dims = Index3(n, n, n);
  return g;
}

void BM_EdtInsert(benchmark::State& state) {
  const GridGeometry grid = cube_grid(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> cell(0, grid.size() - 1);
  for (auto _ : state) {
    state.PauseTiming();
    DistanceField edt(grid, 1.0);
    state.ResumeTiming();
    for (int i = 0; i < 50; ++i) edt.set_occupied(grid.unflat(cell(rng)));
    edt.update();
    benchmark::DoNotOptimize(edt.squared_voxel_distance(Index3(0, 0, 0)));
  }
}
BENCHMARK(BM_EdtInsert)->Arg(20)->Arg(40);

void BM_EdtDelete(benchmark::State& state) {
  const GridGeometry grid = cube_grid(30);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> cell(0, grid.size() - 1);
  std::vector<std::size_t> cells(200);
  for (auto& c : cells) c = cell(rng);
  for (auto _ : state) {
    state.PauseTiming();
    DistanceField edt(grid, 1.0);
    for (std::size_t c : cells) edt.set_occupied(grid.unflat(c));
    edt.update();
    state.ResumeTiming();
    for (int i = 0; i < 50; ++i) edt.set_free(grid.unflat(cells[i]));
    edt.update();
  }
}
BENCHMARK(BM_EdtDelete);

void BM_AStarCourse(benchmark::State& state) {
  // Walls are zero-thickness, so anything within half a voxel counts as solid.
  // The boxes are dropped so the search has to take the long ground route.
  const Scene world = builtin_scenario("paper-course").world.without_removable();
  const GridGeometry grid = GridGeometry::covering(Vec3::Zero(), Vec3(4.5, 4.8, 1.6), 0.1);
  DistanceField edt(grid, 2.0);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (world.distance_to_obstacles(grid.center(grid.unflat(i))) <= 0.5 * grid.resolution) edt.set_occupied(grid.unflat(i));
  edt.update();
  LatticeParams p;
  p.bounds_min = Vec2::Zero();
  p.bounds_max = Vec2(4.5, 4.8);
  p.allow_aerial = false;
  const Lattice lat = Lattice::build(edt, p);
  const auto s = lat.nearest_free(Vec3(1.5, 0.6, p.ground_z), MobilityMode::Ground);
  const auto g = lat.nearest_free(Vec3(3.9, 3.0, p.ground_z), MobilityMode::Ground);
  HybridPath path;
  for (auto _ : state) {
    path = astar_search(lat, *s, *g);
    benchmark::DoNotOptimize(path.total_cost);
  }
  state.counters["nodes"] = static_cast<double>(path.nodes.size());
  state.counters["reachable"] = path.reachable ? 1 : 0;
}
BENCHMARK(BM_AStarCourse)->Unit(benchmark::kMillisecond);

void BM_PlanStep(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> xy(-3.0, 3.0), z(0.0, 1.6);
  std::vector<Vec3> pts;
  for (int i = 0; i < state.range(0); ++i) pts.emplace_back(xy(rng), xy(rng), z(rng));
  const PointIndex index(pts);
  PlannerInput in;
  in.mode = MobilityMode::Aerial;
  in.position = Vec3(0, 0, 1.0);
  in.goal = {Vec3(2.5, 0.5, 1.0), MobilityMode::Aerial};
  for (auto _ : state) {
    LocalPlanner planner{PlannerParams{}};
    benchmark::DoNotOptimize(planner.plan_step(in, index).selected);
  }
}
BENCHMARK(BM_PlanStep)->Arg(100)->Arg(2000);

void BM_LidarScan(benchmark::State& state) {
  const Scenario sc = builtin_scenario("paper-course");
  AerialState pose;
  pose.p_w = Vec3(1.5, 0.6, 0.25);
  const LidarSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_lidar(pose, sc.world, spec).size());
}
BENCHMARK(BM_LidarScan)->Unit(benchmark::kMicrosecond);

void BM_StepAerial(benchmark::State& state) {
  const VehicleParams vp;
  AerialState s;
  const ControlInput u{vp.hover_thrust(), Vec3(0.01, -0.01, 0.0)};
  for (auto _ : state) {
    s = step_aerial(s, u, 0.004, vp);
    benchmark::DoNotOptimize(s.p_w);
  }
}
BENCHMARK(BM_StepAerial);

}  // namespace
BENCHMARK_MAIN();
