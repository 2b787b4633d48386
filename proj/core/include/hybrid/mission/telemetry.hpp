#ifndef HYBRID_MISSION_TELEMETRY_HPP
#define HYBRID_MISSION_TELEMETRY_HPP

#include "hybrid/control.hpp"
#include "hybrid/sensors.hpp"
#include "hybrid/vehicle_sim.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hybrid {

enum class MissionStatus { Running, Completed, Collision, Timeout };

const char* to_string(MissionStatus s);

struct TelemetryRecord {
  double t = 0.0;
  AerialState truth;
  PoseEstimate estimate;
  MobilityMode mode = MobilityMode::Ground;
  Transition transition = Transition::None;
  Setpoint setpoint;
  ControlInput u;
  MotorThrusts thrusts;
  double power_w = 0.0;
  double energy_j = 0.0;
  double distance_m = 0.0;
  bool saturated = false;
  bool localization_ok = true;
  MissionStatus status = MissionStatus::Running;
};

inline constexpr const char* kTelemetryVersionLine = "# hybridsim-telemetry v1";
inline constexpr const char* kTelemetryHeader = "t,px,py,pz,yaw,mode,transition,thrust,power_w,energy_j,dist_m,status";

/// Version line, column header, then one fixed-precision row per record.
void write_telemetry_csv(std::ostream& out, const std::vector<TelemetryRecord>& records);

/// Reads the CSV columns back. Fields without a column keep their defaults.
/// Throws std::runtime_error naming the line on malformed input.
std::vector<TelemetryRecord> read_telemetry_csv(std::istream& in);

}  // namespace hybrid

#endif  // HYBRID_MISSION_TELEMETRY_HPP
