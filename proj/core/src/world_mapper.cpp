#include "hybrid/world_mapper.hpp"

#include <stdexcept>

namespace hybrid {

void MapperParams::validate() const {
  occupancy.validate();
  if (!(edt_d_max > 0.0)) throw std::invalid_argument("mapping.edt_d_max: must be positive");
  if (!(crop_extent.array() > 0.0).all()) throw std::invalid_argument("mapping.crop_extent: must be positive");
}

WorldMapper::WorldMapper(const GridGeometry& grid, const MapperParams& params)
    : params_(params), map_(grid, params.occupancy), edt_(grid, params.edt_d_max) {
  params_.validate();
}

OccupancyChanges WorldMapper::integrate_scan(const Vec3& sensor_origin, const std::vector<Vec3>& points_w,
                                             bool localization_ok) {
  if (!localization_ok) return handle_localization_event(false);
  OccupancyChanges changes = map_.handle_localization_event(true);
  OccupancyChanges scan = map_.integrate_scan(sensor_origin, points_w);
  edt_.apply(changes);
  edt_.apply(scan);
  edt_.update();
  return scan;
}

OccupancyChanges WorldMapper::handle_localization_event(bool localization_ok) {
  OccupancyChanges changes = map_.handle_localization_event(localization_ok);
  edt_.apply(changes);
  edt_.update();
  return changes;
}

PointIndex WorldMapper::build_collision_index(const Vec3& center, const std::vector<Vec3>& cloud_w) const {
  std::vector<Vec3> pts = map_.occupied_centers_in(center, params_.crop_extent);
  for (const Vec3& p : cloud_w)
    if (p.z() >= params_.occupancy.ground_clip_z) pts.push_back(p);
  return PointIndex(std::move(pts));
}

PointIndex build_cloud_index(const std::vector<Vec3>& cloud_w, double ground_clip_z) {
  std::vector<Vec3> pts;
  pts.reserve(cloud_w.size());
  for (const Vec3& p : cloud_w)
    if (p.z() >= ground_clip_z) pts.push_back(p);
  return PointIndex(std::move(pts));
}

}  // namespace hybrid
