#include "hybrid/mission/step_response.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hybrid {

const char* to_string(StepAxis a) {
  switch (a) {
    case StepAxis::Velocity:
      return "velocity";
    case StepAxis::Yaw:
      return "yaw";
    case StepAxis::Pitch:
      break;
  }
  return "pitch";
}

StepAxis parse_step_axis(const std::string& name) {
  if (name == "pitch") return StepAxis::Pitch;
  if (name == "velocity") return StepAxis::Velocity;
  if (name == "yaw") return StepAxis::Yaw;
  throw std::invalid_argument("axis: expected pitch, velocity or yaw, got '" + name + "'");
}

StepMetrics step_metrics(const std::vector<StepSample>& trace, double target) {
  StepMetrics m;
  if (trace.empty() || target == 0.0) return m;
  const double t0 = trace.front().t;
  m.final_value = trace.back().value;

  double peak = 0.0;
  double t10 = -1.0, t90 = -1.0, last_outside = t0;
  bool ever_outside = false;
  for (const StepSample& s : trace) {
    const double y = s.value / target;
    if (!std::isfinite(y) || std::abs(y) > 10.0) {
      m.diverged = true;
      m.settled = false;
      return m;
    }
    peak = std::max(peak, y);
    if (t10 < 0.0 && y >= 0.1) t10 = s.t;
    if (t90 < 0.0 && y >= 0.9) t90 = s.t;
    if (std::abs(y - 1.0) > 0.05) {
      last_outside = s.t;
      ever_outside = true;
    }
  }
  m.overshoot = std::max(0.0, peak - 1.0);
  m.rise_time = (t10 >= 0.0 && t90 >= 0.0) ? t90 - t10 : trace.back().t - t0;
  m.settled = std::abs(trace.back().value / target - 1.0) <= 0.05;
  if (!m.settled) {
    m.settle_time = trace.back().t - t0;
  } else {
    // The first sample after the last excursion is inside the band.
    double settle = t0;
    if (ever_outside) {
      for (const StepSample& s : trace)
        if (s.t > last_outside) {
          settle = s.t;
          break;
        }
    }
    m.settle_time = settle - t0;
  }
  return m;
}

StepResponse step_response_experiment(StepAxis axis, double magnitude, const Gains& gains,
                                      const VehicleParams& params, const StepOptions& options) {
  if (!std::isfinite(magnitude)) throw std::invalid_argument("magnitude: must be finite");
  if (!(options.duration > 0.0)) throw std::invalid_argument("duration: must be positive");
  gains.validate();
  params.validate();

  StepResponse out;
  out.axis = axis;
  out.magnitude = magnitude;
  GroundState s;
  ControllerState state;
  const double dt = options.dt;
  const std::size_t steps = static_cast<std::size_t>(std::llround(options.duration / dt));
  out.trace.push_back({0.0, magnitude, 0.0});

  for (std::size_t k = 1; k <= steps; ++k) {
    ControlInput u;
    if (axis == StepAxis::Pitch) {
      u.thrust = params.rolling_thrust();
      u.moment_b = Vec3(0.0, rolling_pitch(magnitude, s, gains, state, dt), 0.0);
    } else {
      Setpoint sp;
      sp.mode = MobilityMode::Ground;
      if (axis == StepAxis::Velocity) {
        sp.position_valid = false;
        sp.velocity_ff = Vec3(magnitude, 0.0, 0.0);
      } else {
        sp.position = Vec3(s.p_w.x(), s.p_w.y(), 0.0);
        sp.yaw = magnitude;
      }
      u = rolling_step(sp, s, gains, params, state, dt).u;
    }
    // The vehicle applies what the motors can deliver.
    u = unmix_motors(allocate_motors(u, params).thrusts, params);
    s = step_ground(s, u, dt, params);

    double value = 0.0;
    switch (axis) {
      case StepAxis::Pitch:
        value = s.pitch_b;
        break;
      case StepAxis::Velocity:
        value = s.v_w.dot(Vec2(std::cos(s.yaw.radians()), std::sin(s.yaw.radians())));
        break;
      case StepAxis::Yaw:
        // Unwrapped relative to the target so a pi step does not alias.
        value = magnitude - s1_distance(magnitude, s.yaw.radians());
        break;
    }
    out.trace.push_back({static_cast<double>(k) * dt, magnitude, value});
    if (!std::isfinite(value)) break;
  }
  out.metrics = step_metrics(out.trace, magnitude);
  return out;
}

void write_step_trace_csv(std::ostream& out, const StepResponse& r) {
  out << "t,setpoint,value\n";
  char buf[96];
  for (const StepSample& s : r.trace) {
    std::snprintf(buf, sizeof buf, "%.6f,%.9f,%.9f\n", s.t, s.setpoint, s.value);
    out << buf;
  }
}

}  // namespace hybrid
