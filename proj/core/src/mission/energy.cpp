#include "hybrid/mission/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hybrid {

double break_even_fraction(double p_fly, double p_roll, double p_ref) {
  if (!(p_fly > p_roll)) throw std::invalid_argument("break_even_fraction: flying power must exceed rolling power");
  return (p_fly - p_ref) / (p_fly - p_roll);
}

namespace {

// Weighted incremental mean and variance (West's update).
struct Accumulator {
  double w = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double p, double dt) {
    if (!(dt > 0.0)) return;
    w += dt;
    const double delta = p - mean;
    mean += delta * dt / w;
    m2 += dt * delta * (p - mean);
  }

  std::optional<ModePower> result() const {
    if (!(w > 0.0)) return std::nullopt;
    ModePower m;
    m.mean_w = mean;
    m.stddev_w = std::sqrt(std::max(0.0, m2 / w));
    m.time_s = w;
    return m;
  }
};

}  // namespace

EnergyReport energy_report(const std::vector<TelemetryRecord>& records, double p_ref) {
  EnergyReport rep;
  rep.p_ref = p_ref;
  if (records.empty()) return rep;
  Accumulator roll, fly;
  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    const TelemetryRecord& r = records[k];
    const double dt = records[k + 1].t - r.t;
    if (r.transition != Transition::None) {
      rep.transition_time_s += dt;
      continue;
    }
    (r.mode == MobilityMode::Ground ? roll : fly).add(r.power_w, dt);
  }
  rep.rolling = roll.result();
  rep.flying = fly.result();
  rep.total_time_s = records.back().t - records.front().t;
  rep.total_energy_j = records.back().energy_j - records.front().energy_j;
  rep.distance_m = records.back().distance_m - records.front().distance_m;
  if (rep.rolling && rep.flying && rep.flying->mean_w > rep.rolling->mean_w)
    rep.break_even_fraction = break_even_fraction(rep.flying->mean_w, rep.rolling->mean_w, p_ref);
  return rep;
}

std::vector<double> integrate_energy(const std::vector<TelemetryRecord>& records) {
  std::vector<double> e(records.size(), 0.0);
  for (std::size_t k = 1; k < records.size(); ++k)
    e[k] = e[k - 1] + 0.5 * (records[k].power_w + records[k - 1].power_w) * (records[k].t - records[k - 1].t);
  return e;
}

void write_energy_report(std::ostream& out, const EnergyReport& r) {
  char buf[128];
  auto num = [&](const char* key, double v, const char* unit) {
    std::snprintf(buf, sizeof buf, "%s: %.3f%s\n", key, v, unit);
    out << buf;
  };
  auto mode = [&](const char* name, const std::optional<ModePower>& m) {
    const std::string prefix(name);
    if (!m) {
      out << prefix << "_power_w: n/a\n" << prefix << "_power_sigma_w: n/a\n" << prefix << "_time_s: n/a\n";
      return;
    }
    num((prefix + "_power_w").c_str(), m->mean_w, "");
    num((prefix + "_power_sigma_w").c_str(), m->stddev_w, "");
    num((prefix + "_time_s").c_str(), m->time_s, "");
  };
  mode("rolling", r.rolling);
  mode("flying", r.flying);
  num("transition_time_s", r.transition_time_s, "");
  num("total_time_s", r.total_time_s, "");
  num("total_energy_j", r.total_energy_j, "");
  num("distance_m", r.distance_m, "");
  num("p_ref_w", r.p_ref, "");
  if (r.break_even_fraction) {
    std::snprintf(buf, sizeof buf, "break_even_fraction: %.4f\n", *r.break_even_fraction);
    out << buf;
  } else {
    out << "break_even_fraction: n/a\n";
  }
}

}  // namespace hybrid
