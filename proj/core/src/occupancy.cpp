#include "hybrid/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace hybrid {

GridGeometry GridGeometry::covering(const Vec3& min, const Vec3& max, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be positive");
  if (!(max.array() > min.array()).all()) throw std::invalid_argument("grid bounds are empty");
  GridGeometry g;
  g.origin = min;
  g.resolution = resolution;
  for (int i = 0; i < 3; ++i) g.dims[i] = static_cast<int>(std::ceil((max[i] - min[i]) / resolution - 1e-9));
  return g;
}

Index3 GridGeometry::index_of(const Vec3& p) const {
  const Vec3 u = (p - origin) / resolution;
  return Index3(static_cast<int>(std::floor(u.x())), static_cast<int>(std::floor(u.y())),
                static_cast<int>(std::floor(u.z())));
}

Index3 GridGeometry::unflat(std::size_t i) const {
  const int x = static_cast<int>(i % dims.x());
  i /= dims.x();
  const int y = static_cast<int>(i % dims.y());
  return Index3(x, y, static_cast<int>(i / dims.y()));
}

std::vector<Index3> traverse_segment(const GridGeometry& grid, const Vec3& a, const Vec3& b) {
  std::vector<Index3> out;
  const Vec3 ua = (a - grid.origin) / grid.resolution;
  const Vec3 ub = (b - grid.origin) / grid.resolution;
  Index3 v = grid.index_of(a);
  const Index3 end = grid.index_of(b);
  const Vec3 d = ub - ua;
  Index3 step;
  Vec3 t_max;
  Vec3 t_delta;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (d[i] > 0.0) {
      step[i] = 1;
      t_delta[i] = 1.0 / d[i];
      t_max[i] = (std::floor(ua[i]) + 1.0 - ua[i]) / d[i];
    } else if (d[i] < 0.0) {
      step[i] = -1;
      t_delta[i] = -1.0 / d[i];
      t_max[i] = (ua[i] - std::floor(ua[i])) / -d[i];
    } else {
      step[i] = 0;
      t_delta[i] = kInf;
      t_max[i] = kInf;
    }
  }
  const int max_steps = (end - v).cwiseAbs().sum() + 1;
  for (int n = 0; n <= max_steps; ++n) {
    if (grid.contains(v)) out.push_back(v);
    if (v == end) break;
    int axis = 0;
    t_max.minCoeff(&axis);
    if (t_max[axis] > 1.0) break;
    v[axis] += step[axis];
    t_max[axis] += t_delta[axis];
  }
  // Rounding can stop the walk one voxel short of the end point.
  if (grid.contains(end) && (out.empty() || out.back() != end)) out.push_back(end);
  return out;
}

void OccupancyParams::validate() const {
  if (!(resolution > 0.0)) throw std::invalid_argument("mapping.resolution: must be positive");
  if (!(log_odds_hit > 0.0)) throw std::invalid_argument("mapping.log_odds_hit: must be positive");
  if (!(log_odds_miss < 0.0)) throw std::invalid_argument("mapping.log_odds_miss: must be negative");
  if (!(log_odds_min < 0.0 && log_odds_max > 0.0)) throw std::invalid_argument("mapping log-odds clamps invalid");
  if (!(occupied_threshold >= 0.0 && occupied_threshold < log_odds_max))
    throw std::invalid_argument("mapping.occupied_threshold: must lie in [0, log_odds_max)");
  if (!(max_range > 0.0)) throw std::invalid_argument("mapping.max_range: must be positive");
}

OccupancyMap::OccupancyMap(const GridGeometry& grid, const OccupancyParams& params)
    : grid_(grid),
      params_(params),
      log_odds_(grid.size(), 0.0),
      scan_stamp_(grid.size(), 0),
      scan_hit_(grid.size(), 0) {
  params_.validate();
  if (grid.size() == 0) throw std::invalid_argument("occupancy map: empty grid");
}

OccupancyChanges OccupancyMap::integrate_scan(const Vec3& sensor_origin, const std::vector<Vec3>& points_w) {
  OccupancyChanges changes;
  ++scan_id_;
  std::vector<std::size_t> touched;
  auto mark = [&](const Index3& v, bool hit) {
    const std::size_t i = grid_.flat(v);
    if (scan_stamp_[i] != scan_id_) {
      scan_stamp_[i] = scan_id_;
      scan_hit_[i] = hit ? 1 : 0;
      touched.push_back(i);
    } else if (hit) {
      scan_hit_[i] = 1;
    }
  };

  std::vector<const Vec3*> accepted;
  accepted.reserve(points_w.size());
  for (const Vec3& p : points_w) {
    if (!p.allFinite() || (p - sensor_origin).norm() > params_.max_range) {
      ++changes.rejected_rays;
      continue;
    }
    accepted.push_back(&p);
    const Index3 v = grid_.index_of(p);
    if (p.z() >= params_.ground_clip_z && grid_.contains(v)) mark(v, true);
  }
  for (const Vec3* p : accepted) {
    const Index3 end = grid_.index_of(*p);
    for (const Index3& v : traverse_segment(grid_, sensor_origin, *p)) {
      if (v == end) break;
      mark(v, false);
    }
  }

  for (std::size_t i : touched) {
    const bool before = log_odds_[i] > params_.occupied_threshold;
    const double delta = scan_hit_[i] ? params_.log_odds_hit : params_.log_odds_miss;
    log_odds_[i] = std::clamp(log_odds_[i] + delta, params_.log_odds_min, params_.log_odds_max);
    const bool after = log_odds_[i] > params_.occupied_threshold;
    if (after && !before) changes.newly_occupied.push_back(grid_.unflat(i));
    if (before && !after) changes.newly_freed.push_back(grid_.unflat(i));
  }
  return changes;
}

OccupancyChanges OccupancyMap::handle_localization_event(bool localization_ok) {
  OccupancyChanges changes;
  if (last_localization_ok_ && !localization_ok) changes = clear();
  last_localization_ok_ = localization_ok;
  return changes;
}

OccupancyChanges OccupancyMap::clear() {
  OccupancyChanges changes;
  for (std::size_t i = 0; i < log_odds_.size(); ++i) {
    if (log_odds_[i] > params_.occupied_threshold) changes.newly_freed.push_back(grid_.unflat(i));
    log_odds_[i] = 0.0;
  }
  return changes;
}

bool OccupancyMap::occupied_at(const Vec3& p) const {
  const Index3 v = grid_.index_of(p);
  return grid_.contains(v) && occupied(v);
}

std::vector<Index3> OccupancyMap::occupied_voxels() const {
  std::vector<Index3> out;
  for (int x = 0; x < grid_.dims.x(); ++x)
    for (int y = 0; y < grid_.dims.y(); ++y)
      for (int z = 0; z < grid_.dims.z(); ++z)
        if (occupied(Index3(x, y, z))) out.emplace_back(x, y, z);
  return out;
}

std::vector<Vec3> OccupancyMap::occupied_centers_in(const Vec3& center, const Vec3& extent) const {
  std::vector<Vec3> out;
  const Vec3 lo = center - 0.5 * extent;
  const Vec3 hi = center + 0.5 * extent;
  const Index3 a = grid_.index_of(lo).cwiseMax(Index3::Zero());
  const Index3 b = grid_.index_of(hi).cwiseMin(grid_.dims - Index3::Ones());
  for (int z = a.z(); z <= b.z(); ++z)
    for (int y = a.y(); y <= b.y(); ++y)
      for (int x = a.x(); x <= b.x(); ++x) {
        const Index3 v(x, y, z);
        if (!occupied(v)) continue;
        const Vec3 c = grid_.center(v);
        if ((c.array() >= lo.array()).all() && (c.array() <= hi.array()).all()) out.push_back(c);
      }
  return out;
}

void OccupancyMap::write_text(std::ostream& out) const {
  out << "# resolution " << grid_.resolution << '\n';
  out << "# origin " << grid_.origin.x() << ' ' << grid_.origin.y() << ' ' << grid_.origin.z() << '\n';
  for (const Index3& v : occupied_voxels()) {
    const Vec3 c = grid_.center(v);
    out << c.x() << ' ' << c.y() << ' ' << c.z() << '\n';
  }
}

}  // namespace hybrid
