#include "hybrid/mission/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hybrid {

Circuit::Circuit(std::vector<Vec2> points) : points_(std::move(points)) {
  if (points_.size() < 3) throw std::invalid_argument("circuit: needs at least three points");
  cumulative_.push_back(0.0);
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const double len = (points_[(k + 1) % points_.size()] - points_[k]).norm();
    if (!(len > 0.0)) throw std::invalid_argument("circuit: repeated point");
    cumulative_.push_back(cumulative_.back() + len);
  }
}

Vec2 Circuit::point_at(double s) const {
  const double L = length();
  s = std::fmod(s, L);
  if (s < 0.0) s += L;
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()) - 1, points_.size() - 1);
  const Vec2& a = points_[k];
  const Vec2& b = points_[(k + 1) % points_.size()];
  const double t = (s - cumulative_[k]) / (cumulative_[k + 1] - cumulative_[k]);
  return a + t * (b - a);
}

double Circuit::project(const Vec2& p) const {
  double best = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const Vec2& a = points_[k];
    const Vec2 ab = points_[(k + 1) % points_.size()] - a;
    const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    const double d = (a + t * ab - p).squaredNorm();
    if (d < best) {
      best = d;
      best_s = cumulative_[k] + t * (cumulative_[k + 1] - cumulative_[k]);
    }
  }
  return best_s;
}

double Circuit::project_near(const Vec2& p, double s_from, double back, double ahead) const {
  // Dense sampling of the window; segments are short and the window is a few metres.
  constexpr double kStep = 0.01;
  double best = std::numeric_limits<double>::infinity();
  double best_s = s_from;
  for (double s = s_from - back; s <= s_from + ahead + 1e-12; s += kStep) {
    const double d = (point_at(s) - p).squaredNorm();
    if (d < best) {
      best = d;
      best_s = s;
    }
  }
  return best_s;
}

ProgressTracker::ProgressTracker(const Circuit& circuit, double start_s) : circuit_(&circuit), s_(start_s) {}

double ProgressTracker::update(const Vec2& p) {
  s_ = std::max(s_, circuit_->project_near(p, s_, 0.0, 1.0));
  return s_;
}

}  // namespace hybrid
