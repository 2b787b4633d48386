#ifndef HYBRID_TESTS_ORACLES_HPP
#define HYBRID_TESTS_ORACLES_HPP

// Independent reference implementations used as test oracles. None of these
// call into the code they check.

#include "hybrid/distance_field.hpp"
#include "hybrid/global_planner.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <vector>

namespace hybrid::oracle {

/// Squared voxel distance to the nearest occupied voxel, -1 beyond dmax2.
inline std::vector<int> brute_force_edt(const GridGeometry& grid, const std::vector<std::uint8_t>& occupied,
                                        int dmax2) {
  std::vector<Index3> sites;
  for (std::size_t i = 0; i < occupied.size(); ++i)
    if (occupied[i]) sites.push_back(grid.unflat(i));
  std::vector<int> out(grid.size(), -1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Index3 v = grid.unflat(i);
    int best = std::numeric_limits<int>::max();
    for (const Index3& s : sites) best = std::min(best, (v - s).squaredNorm());
    out[i] = best <= dmax2 ? best : -1;
  }
  return out;
}

/// Dijkstra over the lattice's own neighbour function. Returns the cost to
/// every node (infinity where unreachable).
inline std::vector<double> dijkstra(const Lattice& lattice, int source) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(lattice.size(), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;
  dist[static_cast<std::size_t>(source)] = 0.0;
  open.push({0.0, source});
  std::vector<LatticeEdge> edges;
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    lattice.neighbors(u, edges);
    for (const LatticeEdge& e : edges) {
      const double nd = d + e.cost;
      if (nd < dist[static_cast<std::size_t>(e.to)]) {
        dist[static_cast<std::size_t>(e.to)] = nd;
        open.push({nd, e.to});
      }
    }
  }
  return dist;
}

/// Dense linear solve for the degree-9 boundary polynomial of one axis:
/// position and velocity at both ends, derivatives 2..4 zero at both ends.
inline Eigen::Matrix<double, 10, 1> boundary_poly(double p0, double v0, double p1, double v1, double T) {
  Eigen::Matrix<double, 10, 10> a = Eigen::Matrix<double, 10, 10>::Zero();
  Eigen::Matrix<double, 10, 1> b = Eigen::Matrix<double, 10, 1>::Zero();
  auto row = [&](int r, double t, int k) {
    for (int i = k; i < 10; ++i) {
      double f = 1.0;
      for (int j = 0; j < k; ++j) f *= i - j;
      a(r, i) = f * std::pow(t, i - k);
    }
  };
  for (int k = 0; k < 5; ++k) {
    row(k, 0.0, k);
    row(5 + k, T, k);
  }
  b(0) = p0;
  b(1) = v0;
  b(5) = p1;
  b(6) = v1;
  return a.fullPivLu().solve(b);
}

inline double poly_derivative(const Eigen::Matrix<double, 10, 1>& c, int k, double t) {
  double acc = 0.0;
  for (int i = k; i < 10; ++i) {
    double f = 1.0;
    for (int j = 0; j < k; ++j) f *= i - j;
    acc += c(i) * f * std::pow(t, i - k);
  }
  return acc;
}

/// 4x4 quad-X mixing matrix (rows: F, M_x, M_y, M_z) for the motor order
/// front-right, rear-left, front-left, rear-right.
inline Eigen::Matrix4d mixing_matrix(double arm_length, double yaw_coeff) {
  const double d = arm_length / std::sqrt(2.0);
  Eigen::Matrix4d m;
  m << 1, 1, 1, 1,
      -d, d, d, -d,
      -d, d, -d, d,
      yaw_coeff, yaw_coeff, -yaw_coeff, -yaw_coeff;
  return m;
}

/// Scalar bisection for a monotone function on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace hybrid::oracle

#endif  // HYBRID_TESTS_ORACLES_HPP
