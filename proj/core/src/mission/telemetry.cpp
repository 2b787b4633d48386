#include "hybrid/mission/telemetry.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hybrid {

const char* to_string(MissionStatus s) {
  switch (s) {
    case MissionStatus::Completed:
      return "completed";
    case MissionStatus::Collision:
      return "collision";
    case MissionStatus::Timeout:
      return "timeout";
    case MissionStatus::Running:
      break;
  }
  return "running";
}

void write_telemetry_csv(std::ostream& out, const std::vector<TelemetryRecord>& records) {
  out << kTelemetryVersionLine << '\n' << kTelemetryHeader << '\n';
  char buf[320];
  for (const TelemetryRecord& r : records) {
    const Vec3& p = r.truth.p_w;
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f,%s,%s,%.6f,%.6f,%.6f,%.6f,%s\n", r.t, p.x(), p.y(), p.z(),
                  r.truth.attitude.yaw(), to_string(r.mode), to_string(r.transition), r.u.thrust, r.power_w,
                  r.energy_j, r.distance_m, to_string(r.status));
    out << buf;
  }
}

namespace {

MobilityMode parse_mode(const std::string& s, std::size_t line) {
  if (s == "ground") return MobilityMode::Ground;
  if (s == "aerial") return MobilityMode::Aerial;
  throw std::runtime_error("telemetry line " + std::to_string(line) + ": unknown mode '" + s + "'");
}

Transition parse_transition(const std::string& s, std::size_t line) {
  if (s == "none") return Transition::None;
  if (s == "takeoff") return Transition::TakeOff;
  if (s == "land") return Transition::Land;
  throw std::runtime_error("telemetry line " + std::to_string(line) + ": unknown transition '" + s + "'");
}

MissionStatus parse_status(const std::string& s, std::size_t line) {
  if (s == "running") return MissionStatus::Running;
  if (s == "completed") return MissionStatus::Completed;
  if (s == "collision") return MissionStatus::Collision;
  if (s == "timeout") return MissionStatus::Timeout;
  throw std::runtime_error("telemetry line " + std::to_string(line) + ": unknown status '" + s + "'");
}

double parse_number(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw std::runtime_error("telemetry line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<TelemetryRecord> read_telemetry_csv(std::istream& in) {
  std::vector<TelemetryRecord> out;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kTelemetryHeader)
        throw std::runtime_error("telemetry line " + std::to_string(lineno) + ": unexpected header");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() != 12)
      throw std::runtime_error("telemetry line " + std::to_string(lineno) + ": expected 12 columns");
    TelemetryRecord r;
    r.t = parse_number(cols[0], lineno);
    r.truth.p_w = Vec3(parse_number(cols[1], lineno), parse_number(cols[2], lineno), parse_number(cols[3], lineno));
    r.truth.attitude = BodyAttitude::from_euler_zyx(parse_number(cols[4], lineno), 0.0, 0.0);
    r.mode = parse_mode(cols[5], lineno);
    r.transition = parse_transition(cols[6], lineno);
    r.u.thrust = parse_number(cols[7], lineno);
    r.power_w = parse_number(cols[8], lineno);
    r.energy_j = parse_number(cols[9], lineno);
    r.distance_m = parse_number(cols[10], lineno);
    r.status = parse_status(cols[11], lineno);
    out.push_back(r);
  }
  if (!header_seen) throw std::runtime_error("telemetry: missing header");
  return out;
}

}  // namespace hybrid
