#ifndef HYBRID_MISSION_STEP_RESPONSE_HPP
#define HYBRID_MISSION_STEP_RESPONSE_HPP

#include "hybrid/control.hpp"
#include "hybrid/vehicle_sim.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hybrid {

enum class StepAxis { Pitch, Velocity, Yaw };

const char* to_string(StepAxis a);

/// Throws std::invalid_argument for anything but "pitch", "velocity", "yaw".
StepAxis parse_step_axis(const std::string& name);

struct StepMetrics {
  double rise_time = 0.0;    // 10 % to 90 % of the step
  double settle_time = 0.0;  // last entry into the +-5 % band
  double overshoot = 0.0;    // fraction of the step
  double final_value = 0.0;
  bool settled = true;
  bool diverged = false;
};

struct StepSample {
  double t = 0.0;
  double setpoint = 0.0;
  double value = 0.0;
};

struct StepResponse {
  StepAxis axis = StepAxis::Pitch;
  double magnitude = 0.0;
  std::vector<StepSample> trace;
  StepMetrics metrics;
};

struct StepOptions {
  double duration = 10.0;
  double dt = 1.0 / 250.0;
};

/// Metrics of a response y(t) to a step from 0 to `target` applied at t[0].
/// A zero step yields all-zero metrics.
StepMetrics step_metrics(const std::vector<StepSample>& trace, double target);

/// Closed-loop rolling step from rest. Pitch drives the pitch loop alone,
/// velocity runs the full chain in velocity mode, yaw commands a heading with
/// the position setpoint at the vehicle.
StepResponse step_response_experiment(StepAxis axis, double magnitude, const Gains& gains,
                                      const VehicleParams& params, const StepOptions& options = {});

/// "t,setpoint,value" rows.
void write_step_trace_csv(std::ostream& out, const StepResponse& r);

}  // namespace hybrid

#endif  // HYBRID_MISSION_STEP_RESPONSE_HPP
