#ifndef HYBRID_OCCUPANCY_HPP
#define HYBRID_OCCUPANCY_HPP

#include "hybrid/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace hybrid {

using Index3 = Eigen::Vector3i;

/// Axis-aligned voxel lattice. Voxel (i, j, k) covers
/// [origin + res * (i, j, k), origin + res * (i + 1, j + 1, k + 1)).
struct GridGeometry {
  Vec3 origin = Vec3::Zero();
  double resolution = 0.1;
  Index3 dims = Index3::Zero();

  /// Grid covering [min, max] at the given resolution.
  static GridGeometry covering(const Vec3& min, const Vec3& max, double resolution);

  std::size_t size() const {
    return static_cast<std::size_t>(dims.x()) * static_cast<std::size_t>(dims.y()) *
           static_cast<std::size_t>(dims.z());
  }
  bool contains(const Index3& v) const {
    return (v.array() >= 0).all() && (v.array() < dims.array()).all();
  }
  Index3 index_of(const Vec3& p) const;
  Vec3 center(const Index3& v) const { return origin + resolution * (v.cast<double>() + Vec3::Constant(0.5)); }
  std::size_t flat(const Index3& v) const {
    return (static_cast<std::size_t>(v.z()) * dims.y() + v.y()) * dims.x() + v.x();
  }
  Index3 unflat(std::size_t i) const;
};

/// Voxels traversed by the segment a -> b (Amanatides-Woo), in order, ending
/// with the voxel containing b. Voxels outside the grid are skipped.
std::vector<Index3> traverse_segment(const GridGeometry& grid, const Vec3& a, const Vec3& b);

struct OccupancyParams {
  double resolution = 0.1;
  double log_odds_hit = 0.85;
  double log_odds_miss = -0.4;
  double log_odds_min = -3.5;
  double log_odds_max = 3.5;
  double occupied_threshold = 0.5;
  double max_range = 8.0;
  /// Returns below this height are treated as floor and never marked occupied.
  double ground_clip_z = 0.1;

  void validate() const;
};

/// Occupancy flips produced by one update.
struct OccupancyChanges {
  std::vector<Index3> newly_occupied;
  std::vector<Index3> newly_freed;
  std::size_t rejected_rays = 0;

  bool empty() const { return newly_occupied.empty() && newly_freed.empty(); }
};

/// Dense log-odds voxel map.
class OccupancyMap {
 public:
  OccupancyMap(const GridGeometry& grid, const OccupancyParams& params);

  const GridGeometry& grid() const { return grid_; }
  const OccupancyParams& params() const { return params_; }

  /// Ray-casts every return (world frame) from the sensor origin: traversed
  /// voxels get the miss update, the end voxel the hit update. Each voxel is
  /// updated at most once per scan; a hit wins over a miss.
  OccupancyChanges integrate_scan(const Vec3& sensor_origin, const std::vector<Vec3>& points_w);

  /// Resets every voxel to unknown on an ok -> failed localization edge.
  OccupancyChanges handle_localization_event(bool localization_ok);

  /// Resets every voxel to unknown.
  OccupancyChanges clear();

  double log_odds(const Index3& v) const { return log_odds_[grid_.flat(v)]; }
  bool occupied(const Index3& v) const { return log_odds(v) > params_.occupied_threshold; }
  bool occupied_at(const Vec3& p) const;
  /// True while the voxel has never been observed since the last clear.
  bool unknown(const Index3& v) const { return log_odds(v) == 0.0; }

  /// Occupied voxels in lexicographic (x, y, z) index order.
  std::vector<Index3> occupied_voxels() const;

  /// Centers of occupied voxels inside the axis-aligned window around center.
  std::vector<Vec3> occupied_centers_in(const Vec3& center, const Vec3& extent) const;

  /// Text export: "# resolution", "# origin" headers then one "x y z" line
  /// per occupied voxel center.
  void write_text(std::ostream& out) const;

 private:
  GridGeometry grid_;
  OccupancyParams params_;
  std::vector<double> log_odds_;
  std::vector<std::uint32_t> scan_stamp_;
  std::vector<std::uint8_t> scan_hit_;
  std::uint32_t scan_id_ = 0;
  bool last_localization_ok_ = true;
};

}  // namespace hybrid

#endif  // HYBRID_OCCUPANCY_HPP
