#ifndef HYBRID_MISSION_SCENARIO_HPP
#define HYBRID_MISSION_SCENARIO_HPP

#include "hybrid/control.hpp"
#include "hybrid/global_planner.hpp"
#include "hybrid/local_planner.hpp"
#include "hybrid/scene.hpp"
#include "hybrid/sensors.hpp"
#include "hybrid/vehicle_sim.hpp"
#include "hybrid/world_mapper.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybrid {

/// Invalid or unreadable scenario; the message names the offending field.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Rates {
  double control = 250.0;
  double local = 10.0;
  double global = 1.5;
};

struct MissionSettings {
  double timeout_s = 240.0;
  /// A lap counts once progress along the circuit exceeds this ...
  double completion_distance = 15.0;
  /// ... and the vehicle is back within this radius of the start.
  double completion_radius = 0.5;
  /// Global goal: this far ahead of the tracked progress along the circuit.
  double goal_lead = 2.0;
  int waypoint_lookahead = 4;
  double p_ref = 650.0;
};

struct Scenario {
  std::string name;
  Scene world;
  Vec2 start_xy = Vec2::Zero();
  double start_yaw = 0.0;
  /// Closed centerline of the lap, first point = start.
  std::vector<Vec2> circuit;
  VehicleParams vehicle;
  Gains gains;
  PlannerParams planner;
  LatticeParams lattice;
  MapperParams mapper;
  LidarSpec lidar;
  PoseNoise pose_noise;
  std::vector<FailureWindow> failures;
  Rates rates;
  MissionSettings mission;
  std::uint64_t seed = 1;
  /// Mapped volume.
  Vec3 map_min = Vec3::Zero();
  Vec3 map_max = Vec3::Zero();

  /// Throws ScenarioError naming the first inconsistent field.
  void validate() const;
};

/// Names accepted by builtin_scenario().
std::vector<std::string> builtin_scenario_names();

/// Throws ScenarioError for an unknown name.
Scenario builtin_scenario(const std::string& name);

/// Parses a JSON scenario document.
Scenario scenario_from_json(const std::string& text);

/// Reads a JSON scenario file, or a built-in scenario when `path` is one of
/// the built-in names.
Scenario load_scenario(const std::string& path);

/// Serializes every field scenario_from_json understands.
std::string scenario_to_json(const Scenario& s);

}  // namespace hybrid

#endif  // HYBRID_MISSION_SCENARIO_HPP
