#ifndef HYBRID_DISTANCE_FIELD_HPP
#define HYBRID_DISTANCE_FIELD_HPP

#include "hybrid/occupancy.hpp"

#include <cstdint>
#include <queue>
#include <vector>

namespace hybrid {

/// Incrementally maintained Euclidean distance transform over a voxel grid.
///
/// Each voxel stores the squared voxel distance to its nearest occupied
/// voxel and that voxel's index. Occupancy edits are queued and propagated by
/// raise/lower wavefronts ordered by squared distance. Distances are
/// truncated at d_max.
class DistanceField {
 public:
  DistanceField(const GridGeometry& grid, double d_max);

  const GridGeometry& grid() const { return grid_; }
  double d_max() const { return d_max_; }
  int d_max_squared_voxels() const { return dmax2_; }

  void set_occupied(const Index3& v);
  void set_free(const Index3& v);
  void apply(const OccupancyChanges& changes);

  /// Propagates all queued edits.
  void update();

  bool occupied(const Index3& v) const { return occupied_[grid_.flat(v)] != 0; }

  /// Squared distance in voxel units, or -1 when beyond d_max.
  int squared_voxel_distance(const Index3& v) const;

  /// Distance in meters, truncated at d_max.
  double distance(const Index3& v) const;

  struct Lookup {
    double distance = 0.0;
    bool in_map = true;
  };
  /// EDT of the voxel containing p; d_max with in_map = false outside the grid.
  Lookup distance_at(const Vec3& p) const;

 private:
  static constexpr int kFar = 1 << 30;
  static constexpr std::int64_t kNoSite = -1;

  struct Entry {
    int key;
    std::int64_t cell;
    bool operator>(const Entry& o) const { return key != o.key ? key > o.key : cell > o.cell; }
  };

  void push(std::int64_t cell, int key);
  void process_raise(std::int64_t cell);
  void process_lower(std::int64_t cell);

  GridGeometry grid_;
  double d_max_;
  int dmax2_;
  std::vector<int> dist2_;
  std::vector<std::int64_t> site_;
  std::vector<std::uint8_t> occupied_;
  std::vector<std::uint8_t> to_raise_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open_;
  std::vector<Index3> offsets_;
};

}  // namespace hybrid

#endif  // HYBRID_DISTANCE_FIELD_HPP
