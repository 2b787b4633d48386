#ifndef HYBRID_WORLD_MAPPER_HPP
#define HYBRID_WORLD_MAPPER_HPP

#include "hybrid/distance_field.hpp"
#include "hybrid/occupancy.hpp"
#include "hybrid/point_index.hpp"

#include <vector>

namespace hybrid {

struct MapperParams {
  OccupancyParams occupancy;
  double edt_d_max = 2.0;
  /// Size of the window around the vehicle used for collision checking.
  Vec3 crop_extent{5.0, 5.0, 3.0};

  void validate() const;
};

/// Occupancy map, its distance transform and the collision point index.
///
/// The map accumulates over the whole scenario volume; only the collision
/// index is cropped to the window around the vehicle.
class WorldMapper {
 public:
  WorldMapper(const GridGeometry& grid, const MapperParams& params);

  const OccupancyMap& map() const { return map_; }
  const DistanceField& edt() const { return edt_; }
  const MapperParams& params() const { return params_; }

  /// Inserts a world-frame scan when localization is valid, otherwise handles
  /// the failure edge. Returns the occupancy flips that reached the EDT.
  OccupancyChanges integrate_scan(const Vec3& sensor_origin, const std::vector<Vec3>& points_w,
                                  bool localization_ok);

  /// Clears the map on an ok -> failed edge and brings the EDT up to date.
  OccupancyChanges handle_localization_event(bool localization_ok);

  /// Index over the occupied voxel centers inside the crop window around
  /// `center` plus the instantaneous world-frame cloud (floor returns dropped).
  PointIndex build_collision_index(const Vec3& center, const std::vector<Vec3>& cloud_w) const;

 private:
  MapperParams params_;
  OccupancyMap map_;
  DistanceField edt_;
};

/// Index over the instantaneous cloud only, floor returns dropped.
PointIndex build_cloud_index(const std::vector<Vec3>& cloud_w, double ground_clip_z);

}  // namespace hybrid

#endif  // HYBRID_WORLD_MAPPER_HPP
