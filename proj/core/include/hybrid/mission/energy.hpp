#ifndef HYBRID_MISSION_ENERGY_HPP
#define HYBRID_MISSION_ENERGY_HPP

#include "hybrid/mission/telemetry.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace hybrid {

/// Default power of a comparable wheel-less aerial vehicle (W).
inline constexpr double kDefaultReferencePower = 650.0;

struct ModePower {
  double mean_w = 0.0;
  double stddev_w = 0.0;
  double time_s = 0.0;
};

struct EnergyReport {
  /// Steady segments only; empty when the mode never occurs outside a transition.
  std::optional<ModePower> rolling;
  std::optional<ModePower> flying;
  double transition_time_s = 0.0;
  double total_time_s = 0.0;
  double total_energy_j = 0.0;
  double distance_m = 0.0;
  double p_ref = kDefaultReferencePower;
  /// Empty unless both steady averages are available.
  std::optional<double> break_even_fraction;
};

/// r* = (P_fly - P_ref) / (P_fly - P_roll). Throws std::invalid_argument when
/// P_fly <= P_roll.
double break_even_fraction(double p_fly, double p_roll, double p_ref);

/// Per-mode time-weighted power statistics. Each record stands for the
/// interval up to the next one; rows inside a transition are excluded from
/// the averages.
EnergyReport energy_report(const std::vector<TelemetryRecord>& records, double p_ref = kDefaultReferencePower);

/// Cumulative trapezoidal integral of power over the records.
std::vector<double> integrate_energy(const std::vector<TelemetryRecord>& records);

/// "key: value" lines; unavailable fields print as "n/a".
void write_energy_report(std::ostream& out, const EnergyReport& report);

}  // namespace hybrid

#endif  // HYBRID_MISSION_ENERGY_HPP
