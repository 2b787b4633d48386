#include "hybrid/distance_field.hpp"

#include <cmath>
#include <stdexcept>

namespace hybrid {

DistanceField::DistanceField(const GridGeometry& grid, double d_max)
    : grid_(grid),
      d_max_(d_max),
      dist2_(grid.size(), kFar),
      site_(grid.size(), kNoSite),
      occupied_(grid.size(), 0),
      to_raise_(grid.size(), 0) {
  if (!(d_max > 0.0)) throw std::invalid_argument("edt.d_max: must be positive");
  if (grid.size() == 0) throw std::invalid_argument("edt: empty grid");
  const double r = d_max / grid.resolution;
  dmax2_ = static_cast<int>(std::floor(r * r + 1e-9));
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (dx != 0 || dy != 0 || dz != 0) offsets_.emplace_back(dx, dy, dz);
}

void DistanceField::push(std::int64_t cell, int key) { open_.push({key, cell}); }

void DistanceField::set_occupied(const Index3& v) {
  const std::int64_t c = static_cast<std::int64_t>(grid_.flat(v));
  if (occupied_[c]) return;
  occupied_[c] = 1;
  to_raise_[c] = 0;
  site_[c] = c;
  dist2_[c] = 0;
  push(c, 0);
}

void DistanceField::set_free(const Index3& v) {
  const std::int64_t c = static_cast<std::int64_t>(grid_.flat(v));
  if (!occupied_[c]) return;
  occupied_[c] = 0;
  site_[c] = kNoSite;
  dist2_[c] = kFar;
  to_raise_[c] = 1;
  push(c, 0);
}

void DistanceField::apply(const OccupancyChanges& changes) {
  for (const Index3& v : changes.newly_freed) set_free(v);
  for (const Index3& v : changes.newly_occupied) set_occupied(v);
}

void DistanceField::update() {
  while (!open_.empty()) {
    const Entry e = open_.top();
    open_.pop();
    if (to_raise_[e.cell]) {
      process_raise(e.cell);
    } else if (site_[e.cell] != kNoSite && occupied_[site_[e.cell]] && dist2_[e.cell] == e.key) {
      process_lower(e.cell);
    }
  }
}

void DistanceField::process_raise(std::int64_t cell) {
  const Index3 v = grid_.unflat(static_cast<std::size_t>(cell));
  for (const Index3& off : offsets_) {
    const Index3 n = v + off;
    if (!grid_.contains(n)) continue;
    const std::int64_t nc = static_cast<std::int64_t>(grid_.flat(n));
    if (to_raise_[nc] || site_[nc] == kNoSite) continue;
    if (!occupied_[site_[nc]]) {
      // Neighbour pointed at a removed obstacle: invalidate and keep raising.
      const int old = dist2_[nc];
      site_[nc] = kNoSite;
      dist2_[nc] = kFar;
      to_raise_[nc] = 1;
      push(nc, old);
    } else {
      push(nc, dist2_[nc]);
    }
  }
  to_raise_[cell] = 0;
}

void DistanceField::process_lower(std::int64_t cell) {
  const Index3 v = grid_.unflat(static_cast<std::size_t>(cell));
  const std::int64_t s = site_[cell];
  const Index3 sv = grid_.unflat(static_cast<std::size_t>(s));
  for (const Index3& off : offsets_) {
    const Index3 n = v + off;
    if (!grid_.contains(n)) continue;
    const std::int64_t nc = static_cast<std::int64_t>(grid_.flat(n));
    if (to_raise_[nc]) continue;
    const int d2 = (n - sv).squaredNorm();
    if (d2 > dmax2_) continue;
    if (d2 < dist2_[nc]) {
      dist2_[nc] = d2;
      site_[nc] = s;
      push(nc, d2);
    }
  }
}

int DistanceField::squared_voxel_distance(const Index3& v) const {
  const int d2 = dist2_[grid_.flat(v)];
  return d2 <= dmax2_ ? d2 : -1;
}

double DistanceField::distance(const Index3& v) const {
  const int d2 = squared_voxel_distance(v);
  if (d2 < 0) return d_max_;
  return std::min(d_max_, std::sqrt(static_cast<double>(d2)) * grid_.resolution);
}

DistanceField::Lookup DistanceField::distance_at(const Vec3& p) const {
  const Index3 v = grid_.index_of(p);
  if (!grid_.contains(v)) return {d_max_, false};
  return {distance(v), true};
}

}  // namespace hybrid
