#ifndef HYBRID_GLOBAL_PLANNER_HPP
#define HYBRID_GLOBAL_PLANNER_HPP

#include "hybrid/distance_field.hpp"
#include "hybrid/local_planner.hpp"
#include "hybrid/vehicle_sim.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace hybrid {

/// Take-off energy at hover power over 3 s, in metres of rolling at the
/// calibrated rolling power and 0.3 m/s.
inline constexpr double kDefaultTransitionCost = 3.0 * kCalibratedHoverPower / (kCalibratedRollingPower / 0.3);

struct LatticeParams {
  Vec2 bounds_min = Vec2::Zero();
  Vec2 bounds_max = Vec2::Zero();
  double spacing = 0.3;
  double ground_z = 0.25;
  std::vector<double> aerial_levels{0.8, 1.2};
  double vehicle_radius = 0.3;
  double margin = 0.05;
  double d_safe = 0.6;
  double w_obs = 5.0;
  /// Per-metre flight surcharge; the default is the hover/rolling power
  /// ratio minus one.
  double c_fly = kCalibratedHoverPower / kCalibratedRollingPower - 1.0;
  double transition_cost = kDefaultTransitionCost;
  bool allow_ground = true;
  bool allow_aerial = true;

  void validate() const;
};

/// Obstacle-distance penalty plus the flight surcharge for aerial nodes.
double node_cost(double d, MobilityMode mode, const LatticeParams& params);

struct LatticeNode {
  Vec3 position = Vec3::Zero();
  MobilityMode mode = MobilityMode::Ground;
  int i = 0;
  int j = 0;
  int level = -1;  // -1 ground, otherwise index into aerial_levels
  double clearance = 0.0;
  double cost = 0.0;
  bool free = false;
};

struct LatticeEdge {
  int to = 0;
  double cost = 0.0;
  bool transition = false;
};

/// Free-space lattice: a ground layer (8-connected) and aerial layers
/// (26-connected) joined by vertical take-off/landing links.
class Lattice {
 public:
  /// Nodes outside `region` (when given) are excluded like occupied ones.
  static Lattice build(const DistanceField& edt, const LatticeParams& params,
                       const std::function<bool(const Vec2&)>& region = {});

  const LatticeParams& params() const { return params_; }
  std::size_t size() const { return nodes_.size(); }
  const LatticeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t free_count() const;
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  /// Node id for grid cell (i, j) on a layer, or -1 outside the lattice.
  int id(int i, int j, int level) const;

  /// Outgoing edges of a free node towards free neighbours.
  void neighbors(int id, std::vector<LatticeEdge>& out) const;

  /// Closest free node in the requested mode, if any.
  std::optional<int> nearest_free(const Vec3& p, MobilityMode mode) const;

 private:
  LatticeParams params_;
  int nx_ = 0;
  int ny_ = 0;
  int layers_ = 0;
  std::vector<LatticeNode> nodes_;
};

/// Cost of moving between adjacent nodes: length times one plus the mean node
/// cost, plus the transition cost on mode-changing links.
double edge_cost(const LatticeNode& a, const LatticeNode& b, const LatticeParams& params);

struct PathNode {
  int id = 0;
  Vec3 position = Vec3::Zero();
  MobilityMode mode = MobilityMode::Ground;
  double cumulative_cost = 0.0;
};

struct HybridPath {
  std::vector<PathNode> nodes;
  double total_cost = 0.0;
  bool reachable = false;
  int mode_changes = 0;
  /// Expansion order, recorded only on request.
  std::vector<int> expanded;

  std::size_t aerial_count() const;
};

struct SearchOptions {
  bool record_expanded = false;
};

/// A* with the straight-line distance heuristic. Ties are broken by f, then
/// by fewer mode changes, then by node id.
HybridPath astar_search(const Lattice& lattice, int start, int goal, const SearchOptions& options = {});

struct WaypointResult {
  LocalGoal goal;
  bool transition = false;
  bool replan = false;
  std::size_t closest = 0;
};

inline constexpr double kReplanDistance = 3.0;

/// Local goal n nodes past the path node closest to the pose. The lookahead
/// stops at the first node of a different mode, which is returned with that
/// mode and the transition flag. Throws std::invalid_argument on an empty path.
WaypointResult next_waypoint(const HybridPath& path, const Vec3& pose, int n, MobilityMode current_mode);

/// One line per node: "x y z mode cumulative_cost".
void write_path_text(std::ostream& out, const HybridPath& path);

}  // namespace hybrid

#endif  // HYBRID_GLOBAL_PLANNER_HPP
