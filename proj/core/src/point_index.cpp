#include "hybrid/point_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hybrid {

PointIndex::PointIndex(std::vector<Vec3> points) : points_(std::move(points)) {
  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  nodes_.reserve(points_.size());
  root_ = build(order, 0, order.size());
}

int PointIndex::build(std::vector<std::size_t>& order, std::size_t lo, std::size_t hi) {
  if (lo >= hi) return -1;
  Vec3 mn = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 mx = -mn;
  for (std::size_t i = lo; i < hi; ++i) {
    mn = mn.cwiseMin(points_[order[i]]);
    mx = mx.cwiseMax(points_[order[i]]);
  }
  int axis = 0;
  (mx - mn).maxCoeff(&axis);
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(order.begin() + lo, order.begin() + mid, order.begin() + hi,
                   [&](std::size_t a, std::size_t b) { return points_[a][axis] < points_[b][axis]; });
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({order[mid], axis, -1, -1});
  const int left = build(order, lo, mid);
  const int right = build(order, mid + 1, hi);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void PointIndex::search(int node, const Vec3& q, std::size_t& best, double& best_d2) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Vec3& p = points_[n.point];
  const double d2 = (p - q).squaredNorm();
  if (d2 < best_d2 || (d2 == best_d2 && n.point < best)) {
    best_d2 = d2;
    best = n.point;
  }
  const double diff = q[n.axis] - p[n.axis];
  const int near = diff < 0.0 ? n.left : n.right;
  const int far = diff < 0.0 ? n.right : n.left;
  search(near, q, best, best_d2);
  if (diff * diff <= best_d2) search(far, q, best, best_d2);
}

std::optional<PointIndex::Nearest> PointIndex::nearest(const Vec3& query) const {
  if (root_ < 0) return std::nullopt;
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  search(root_, query, best, best_d2);
  return Nearest{points_[best], std::sqrt(best_d2), best};
}

double PointIndex::nearest_distance(const Vec3& query, double empty_value) const {
  const auto n = nearest(query);
  return n ? n->distance : empty_value;
}

}  // namespace hybrid
