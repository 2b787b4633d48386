#ifndef HYBRID_POINT_INDEX_HPP
#define HYBRID_POINT_INDEX_HPP

#include "hybrid/geometry.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace hybrid {

/// Static 3-D k-d tree with exact nearest-neighbour queries.
class PointIndex {
 public:
  struct Nearest {
    Vec3 point = Vec3::Zero();
    double distance = 0.0;
    std::size_t index = 0;  // position in the input vector
  };

  PointIndex() = default;
  explicit PointIndex(std::vector<Vec3> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Vec3>& points() const { return points_; }

  /// Empty when the index has no points.
  std::optional<Nearest> nearest(const Vec3& query) const;

  /// Distance to the closest point, or `empty_value` for an empty index.
  double nearest_distance(const Vec3& query, double empty_value) const;

 private:
  struct Node {
    std::size_t point = 0;
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  int build(std::vector<std::size_t>& order, std::size_t lo, std::size_t hi);
  void search(int node, const Vec3& q, std::size_t& best, double& best_d2) const;

  std::vector<Vec3> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace hybrid

#endif  // HYBRID_POINT_INDEX_HPP
