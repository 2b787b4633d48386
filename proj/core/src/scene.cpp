#include "hybrid/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hybrid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

std::optional<double> ray_wall(const Vec3& o, const Vec3& d, const Wall& w) {
  const Vec2 o2 = o.head<2>();
  const Vec2 d2 = d.head<2>();
  const Vec2 e = w.b - w.a;
  const double denom = cross2(d2, e);
  if (std::abs(denom) < 1e-12) return std::nullopt;
  const Vec2 ao = w.a - o2;
  const double t = cross2(ao, e) / denom;
  const double s = cross2(ao, d2) / denom;
  if (t <= 0.0 || s < 0.0 || s > 1.0) return std::nullopt;
  const double z = o.z() + t * d.z();
  if (z < 0.0 || z > w.height) return std::nullopt;
  return t;
}

std::optional<double> ray_box(const Vec3& o, const Vec3& d, const Box& b) {
  double t_near = -kInf;
  double t_far = kInf;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) < 1e-15) {
      if (o[i] < b.min[i] || o[i] > b.max[i]) return std::nullopt;
      continue;
    }
    double t1 = (b.min[i] - o[i]) / d[i];
    double t2 = (b.max[i] - o[i]) / d[i];
    if (t1 > t2) std::swap(t1, t2);
    t_near = std::max(t_near, t1);
    t_far = std::min(t_far, t2);
    if (t_near > t_far) return std::nullopt;
  }
  if (t_far <= 0.0) return std::nullopt;
  return t_near > 0.0 ? t_near : 0.0;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double s = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + s * ab)).norm();
}

}  // namespace

std::optional<double> Scene::raycast(const Vec3& origin, const Vec3& dir, double max_range) const {
  double best = kInf;
  for (const Wall& w : walls)
    if (auto t = ray_wall(origin, dir, w)) best = std::min(best, *t);
  for (const Box& b : boxes)
    if (auto t = ray_box(origin, dir, b)) best = std::min(best, *t);
  if (has_floor && dir.z() < 0.0 && origin.z() > 0.0) best = std::min(best, -origin.z() / dir.z());
  if (ceiling_height && dir.z() > 0.0 && origin.z() < *ceiling_height) {
    const double t = (*ceiling_height - origin.z()) / dir.z();
    const Vec2 hit = origin.head<2>() + t * dir.head<2>();
    if ((hit.array() >= footprint_min.array()).all() && (hit.array() <= footprint_max.array()).all())
      best = std::min(best, t);
  }
  if (best <= max_range) return best;
  return std::nullopt;
}

double Scene::distance_to_obstacles(const Vec3& p) const {
  double best = kInf;
  for (const Wall& w : walls) {
    const double dh = point_segment_distance(p.head<2>(), w.a, w.b);
    const double dz = p.z() < 0.0 ? -p.z() : std::max(0.0, p.z() - w.height);
    best = std::min(best, std::hypot(dh, dz));
  }
  for (const Box& b : boxes) {
    const Vec3 q = p.cwiseMax(b.min).cwiseMin(b.max);
    best = std::min(best, (p - q).norm());
  }
  if (ceiling_height) {
    const Vec2 xy = p.head<2>();
    if ((xy.array() >= footprint_min.array()).all() && (xy.array() <= footprint_max.array()).all())
      best = std::min(best, std::abs(*ceiling_height - p.z()));
  }
  return best;
}

Scene Scene::without_removable() const {
  Scene out = *this;
  out.boxes.erase(std::remove_if(out.boxes.begin(), out.boxes.end(), [](const Box& b) { return b.removable; }),
                  out.boxes.end());
  return out;
}

}  // namespace hybrid
