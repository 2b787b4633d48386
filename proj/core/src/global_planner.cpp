#include "hybrid/global_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace hybrid {

void LatticeParams::validate() const {
  if (!(spacing > 0.0)) throw std::invalid_argument("lattice.spacing: must be positive");
  if (!(bounds_max.array() > bounds_min.array()).all()) throw std::invalid_argument("lattice bounds are empty");
  if (!(vehicle_radius > 0.0)) throw std::invalid_argument("lattice.vehicle_radius: must be positive");
  if (margin < 0.0 || d_safe < 0.0 || w_obs < 0.0 || c_fly < 0.0 || transition_cost < 0.0)
    throw std::invalid_argument("lattice costs must be >= 0");
  for (std::size_t k = 0; k < aerial_levels.size(); ++k) {
    if (!(aerial_levels[k] > ground_z)) throw std::invalid_argument("lattice.aerial_levels: must lie above ground_z");
    if (k > 0 && !(aerial_levels[k] > aerial_levels[k - 1]))
      throw std::invalid_argument("lattice.aerial_levels: must be increasing");
  }
  if (!allow_ground && !allow_aerial) throw std::invalid_argument("lattice: no mobility mode allowed");
}

double node_cost(double d, MobilityMode mode, const LatticeParams& params) {
  const double obstacle = params.w_obs * std::max(0.0, params.d_safe - d);
  return obstacle + (mode == MobilityMode::Aerial ? params.c_fly : 0.0);
}

namespace {

// Nodes sit on voxel corners, so take the worst voxel within half a voxel.
double node_clearance(const DistanceField& edt, const Vec3& p) {
  const double h = 0.49 * edt.grid().resolution;
  double d = edt.distance_at(p).distance;
  for (int c = 0; c < 8; ++c) {
    const Vec3 q = p + Vec3((c & 1) ? h : -h, (c & 2) ? h : -h, (c & 4) ? h : -h);
    d = std::min(d, edt.distance_at(q).distance);
  }
  return d;
}

}  // namespace

Lattice Lattice::build(const DistanceField& edt, const LatticeParams& params,
                       const std::function<bool(const Vec2&)>& region) {
  params.validate();
  Lattice lat;
  lat.params_ = params;
  const Vec2 span = params.bounds_max - params.bounds_min;
  lat.nx_ = static_cast<int>(std::floor(span.x() / params.spacing + 1e-9)) + 1;
  lat.ny_ = static_cast<int>(std::floor(span.y() / params.spacing + 1e-9)) + 1;
  lat.layers_ = 1 + static_cast<int>(params.aerial_levels.size());
  lat.nodes_.resize(static_cast<std::size_t>(lat.nx_) * lat.ny_ * lat.layers_);
  const double free_clearance = params.vehicle_radius + params.margin;
  for (int layer = 0; layer < lat.layers_; ++layer) {
    for (int j = 0; j < lat.ny_; ++j) {
      for (int i = 0; i < lat.nx_; ++i) {
        LatticeNode& n = lat.nodes_[static_cast<std::size_t>(lat.id(i, j, layer - 1))];
        n.i = i;
        n.j = j;
        n.level = layer - 1;
        n.mode = layer == 0 ? MobilityMode::Ground : MobilityMode::Aerial;
        const double z = layer == 0 ? params.ground_z : params.aerial_levels[static_cast<std::size_t>(layer - 1)];
        n.position = Vec3(params.bounds_min.x() + i * params.spacing, params.bounds_min.y() + j * params.spacing, z);
        n.clearance = node_clearance(edt, n.position);
        n.cost = node_cost(n.clearance, n.mode, params);
        const bool allowed = n.mode == MobilityMode::Ground ? params.allow_ground : params.allow_aerial;
        n.free = allowed && n.clearance > free_clearance && (!region || region(n.position.head<2>()));
      }
    }
  }
  return lat;
}

std::size_t Lattice::free_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const LatticeNode& n) { return n.free; }));
}

int Lattice::id(int i, int j, int level) const {
  const int layer = level + 1;
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_ || layer < 0 || layer >= layers_) return -1;
  return (layer * ny_ + j) * nx_ + i;
}

double edge_cost(const LatticeNode& a, const LatticeNode& b, const LatticeParams& params) {
  const double length = (a.position - b.position).norm();
  double c = length * (1.0 + 0.5 * (a.cost + b.cost));
  if (a.mode != b.mode) c += params.transition_cost;
  return c;
}

void Lattice::neighbors(int id, std::vector<LatticeEdge>& out) const {
  out.clear();
  const LatticeNode& n = node(id);
  if (!n.free) return;
  auto add = [&](int to) {
    if (to < 0) return;
    const LatticeNode& m = node(to);
    if (!m.free) return;
    out.push_back({to, edge_cost(n, m, params_), m.mode != n.mode});
  };
  if (n.mode == MobilityMode::Ground) {
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di)
        if (di != 0 || dj != 0) add(this->id(n.i + di, n.j + dj, -1));
    add(this->id(n.i, n.j, 0));
    return;
  }
  for (int dl = -1; dl <= 1; ++dl) {
    const int level = n.level + dl;
    if (level < 0) continue;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di)
        if (di != 0 || dj != 0 || dl != 0) add(this->id(n.i + di, n.j + dj, level));
  }
  if (n.level == 0) add(this->id(n.i, n.j, -1));
}

std::optional<int> Lattice::nearest_free(const Vec3& p, MobilityMode mode) const {
  std::optional<int> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const LatticeNode& n = nodes_[k];
    if (!n.free || n.mode != mode) continue;
    const double d = (n.position - p).norm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(k);
    }
  }
  return best;
}

std::size_t HybridPath::aerial_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const PathNode& n) { return n.mode == MobilityMode::Aerial; }));
}

HybridPath astar_search(const Lattice& lattice, int start, int goal, const SearchOptions& options) {
  HybridPath path;
  const int n = static_cast<int>(lattice.size());
  if (start < 0 || goal < 0 || start >= n || goal >= n)
    throw std::invalid_argument("astar_search: start or goal outside the lattice");
  if (!lattice.node(start).free || !lattice.node(goal).free) return path;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> g(static_cast<std::size_t>(n), kInf);
  std::vector<int> changes(static_cast<std::size_t>(n), std::numeric_limits<int>::max());
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<char> closed(static_cast<std::size_t>(n), 0);
  const Vec3 goal_p = lattice.node(goal).position;

  struct Entry {
    double f;
    int changes;
    int id;
    double g;
    bool operator>(const Entry& o) const {
      if (f != o.f) return f > o.f;
      if (changes != o.changes) return changes > o.changes;
      return id > o.id;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  g[start] = 0.0;
  changes[start] = 0;
  open.push({(lattice.node(start).position - goal_p).norm(), 0, start, 0.0});

  std::vector<LatticeEdge> edges;
  while (!open.empty()) {
    const Entry e = open.top();
    open.pop();
    if (closed[e.id] || e.g != g[e.id] || e.changes != changes[e.id]) continue;
    closed[e.id] = 1;
    if (options.record_expanded) path.expanded.push_back(e.id);
    if (e.id == goal) break;
    lattice.neighbors(e.id, edges);
    for (const LatticeEdge& edge : edges) {
      if (closed[edge.to]) continue;
      const double ng = g[e.id] + edge.cost;
      const int nc = changes[e.id] + (edge.transition ? 1 : 0);
      if (ng < g[edge.to] || (ng == g[edge.to] && nc < changes[edge.to])) {
        g[edge.to] = ng;
        changes[edge.to] = nc;
        parent[edge.to] = e.id;
        open.push({ng + (lattice.node(edge.to).position - goal_p).norm(), nc, edge.to, ng});
      }
    }
  }
  if (!closed[goal]) return path;

  std::vector<int> ids;
  for (int v = goal; v >= 0; v = parent[v]) ids.push_back(v);
  std::reverse(ids.begin(), ids.end());
  for (int id : ids) {
    const LatticeNode& node = lattice.node(id);
    path.nodes.push_back({id, node.position, node.mode, g[id]});
  }
  path.total_cost = g[goal];
  path.mode_changes = changes[goal];
  path.reachable = true;
  return path;
}

WaypointResult next_waypoint(const HybridPath& path, const Vec3& pose, int n, MobilityMode current_mode) {
  if (path.nodes.empty()) throw std::invalid_argument("next_waypoint: empty path");
  const bool any_same = std::any_of(path.nodes.begin(), path.nodes.end(),
                                    [&](const PathNode& p) { return p.mode == current_mode; });
  double best_any = std::numeric_limits<double>::infinity();
  double best_d = std::numeric_limits<double>::infinity();
  std::size_t closest = 0;
  for (std::size_t k = 0; k < path.nodes.size(); ++k) {
    const double d = (path.nodes[k].position - pose).norm();
    best_any = std::min(best_any, d);
    if (any_same && path.nodes[k].mode != current_mode) continue;
    if (d < best_d) {
      best_d = d;
      closest = k;
    }
  }

  WaypointResult out;
  out.closest = closest;
  out.replan = best_any > kReplanDistance;
  std::size_t target = std::min(closest + static_cast<std::size_t>(std::max(n, 0)), path.nodes.size() - 1);
  for (std::size_t k = closest + 1; k <= target; ++k) {
    if (path.nodes[k].mode != current_mode) {
      target = k;
      out.transition = true;
      break;
    }
  }
  out.goal.position = path.nodes[target].position;
  out.goal.mode = path.nodes[target].mode;
  if (!out.transition && out.goal.mode != current_mode) out.transition = true;
  return out;
}

void write_path_text(std::ostream& out, const HybridPath& path) {
  for (const PathNode& n : path.nodes)
    out << n.position.x() << ' ' << n.position.y() << ' ' << n.position.z() << ' ' << to_string(n.mode) << ' '
        << n.cumulative_cost << '\n';
}

}  // namespace hybrid
