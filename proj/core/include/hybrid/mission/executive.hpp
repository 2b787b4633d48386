#ifndef HYBRID_MISSION_EXECUTIVE_HPP
#define HYBRID_MISSION_EXECUTIVE_HPP

#include "hybrid/global_planner.hpp"
#include "hybrid/mission/energy.hpp"
#include "hybrid/mission/scenario.hpp"
#include "hybrid/mission/telemetry.hpp"
#include "hybrid/occupancy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hybrid {

enum class MissionPolicy { RollOnly, FlyOnly, Hybrid };

const char* to_string(MissionPolicy p);

/// Accepts "roll", "fly" and "hybrid". Throws std::invalid_argument otherwise.
MissionPolicy parse_policy(const std::string& name);

struct MissionResult {
  MissionStatus status = MissionStatus::Running;
  std::vector<TelemetryRecord> telemetry;
  EnergyReport energy;
  int takeoffs = 0;
  int landings = 0;
  double duration_s = 0.0;
  double distance_m = 0.0;
  double energy_j = 0.0;
  /// Time in flight or in a transition over the mission time.
  double flight_fraction = 0.0;
  /// Progress along the circuit from the true position (m).
  double progress_m = 0.0;
  std::optional<OccupancyMap> final_map;
  HybridPath last_path;
};

/// Fixed-step closed loop: simulation and control at the control rate,
/// perception and local planning at the local rate, global planning at the
/// global rate. Deterministic for a given scenario and seed.
MissionResult run_mission(const Scenario& scenario, MissionPolicy policy);

}  // namespace hybrid

#endif  // HYBRID_MISSION_EXECUTIVE_HPP
