#include "hybrid/mission/scenario.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace hybrid {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ScenarioError(path + ": " + what); }

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void opt(const json& j, const std::string& path, const char* key, double& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  out = v.get<double>();
}

void opt(const json& j, const std::string& path, const char* key, int& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  out = v.get<int>();
}

void opt(const json& j, const std::string& path, const char* key, bool& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(join(path, key), "expected true or false");
  out = v.get<bool>();
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != N) fail(path, "expected an array of " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) fail(path, "expected numbers");
    out[i] = v[static_cast<std::size_t>(i)].get<double>();
  }
  return out;
}

template <int N>
void opt(const json& j, const std::string& path, const char* key, Eigen::Matrix<double, N, 1>& out) {
  if (j.contains(key)) out = vec<N>(j.at(key), join(path, key));
}

void opt(const json& j, const std::string& path, const char* key, std::vector<double>& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_array()) fail(join(path, key), "expected an array of numbers");
  out.clear();
  for (const json& e : v) {
    if (!e.is_number()) fail(join(path, key), "expected an array of numbers");
    out.push_back(e.get<double>());
  }
}

const json* section(const json& j, const std::string& path, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) fail(join(path, key), "missing required section");
    return nullptr;
  }
  if (!j.at(key).is_object()) fail(join(path, key), "expected an object");
  return &j.at(key);
}

void require_key(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(join(path, key), "missing required field");
}

json to_json(const Vec2& v) { return json::array({v.x(), v.y()}); }
json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

void check(bool ok, const char* path, const char* what) {
  if (!ok) fail(path, what);
}

template <class F>
void rethrow_as_scenario_error(F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
}

}  // namespace

void Scenario::validate() const {
  check(circuit.size() >= 3, "circuit", "needs at least three points");
  check(rates.control > 0.0 && rates.local > 0.0 && rates.global > 0.0, "rates", "must be positive");
  check(rates.control >= rates.local && rates.local >= rates.global, "rates", "must satisfy control >= local >= global");
  check(1.0 / rates.control <= 0.02, "rates.control", "integration step must not exceed 0.02 s");
  check(mission.timeout_s > 0.0, "mission.timeout_s", "must be positive");
  check(mission.completion_radius > 0.0, "mission.completion_radius", "must be positive");
  check(mission.waypoint_lookahead >= 1, "mission.waypoint_lookahead", "must be >= 1");
  check(mission.goal_lead > 0.0, "mission.goal_lead", "must be positive");
  check((map_max.array() > map_min.array()).all(), "map", "map_max must exceed map_min");
  for (const Wall& w : world.walls) check(w.height > 0.0 && (w.a - w.b).norm() > 0.0, "world.walls", "degenerate wall");
  for (const Box& b : world.boxes) check((b.max.array() > b.min.array()).all(), "world.boxes", "empty box");
  for (const FailureWindow& f : failures) check(f.t_end > f.t_start, "failures", "t_end must exceed t_start");
  rethrow_as_scenario_error([&] {
    vehicle.validate();
    gains.validate();
    planner.validate();
    lattice.validate();
    mapper.validate();
    lidar.validate();
  });
}

std::vector<std::string> builtin_scenario_names() { return {"paper-course"}; }

Scenario builtin_scenario(const std::string& name) {
  if (name != "paper-course") throw ScenarioError("scenario: unknown built-in '" + name + "'");
  Scenario s;
  s.name = name;
  const double h = 1.5;
  auto wall = [&](double ax, double ay, double bx, double by) { s.world.walls.push_back({Vec2(ax, ay), Vec2(bx, by), h}); };
  // Outer enclosure, 4.5 m x 4.8 m.
  wall(0.0, 0.0, 4.5, 0.0);
  wall(4.5, 0.0, 4.5, 4.8);
  wall(4.5, 4.8, 0.0, 4.8);
  wall(0.0, 4.8, 0.0, 0.0);
  // Internal walls forming three hairpins and the return leg.
  wall(1.2, 1.2, 3.3, 1.2);
  wall(1.2, 1.2, 1.2, 3.6);
  wall(2.4, 2.4, 4.5, 2.4);
  wall(1.2, 3.6, 3.3, 3.6);
  auto block = [&](double x, double y0, double y1, const char* label) {
    s.world.boxes.push_back({Vec3(x - 0.05, y0, 0.0), Vec3(x + 0.05, y1, 0.4), true, label});
  };
  block(2.4, 0.0, 1.2, "R1");
  block(2.7, 1.2, 2.4, "R2");
  block(2.1, 3.6, 4.8, "R3");
  s.world.ceiling_height = h;
  s.world.footprint_min = Vec2(0.0, 0.0);
  s.world.footprint_max = Vec2(4.5, 4.8);

  s.start_xy = Vec2(1.5, 0.6);
  s.start_yaw = 0.0;
  s.circuit = {{1.5, 0.6}, {3.9, 0.6}, {3.9, 1.8}, {1.8, 1.8}, {1.8, 3.0},
               {3.9, 3.0}, {3.9, 4.2}, {0.6, 4.2}, {0.6, 0.6}};

  s.lattice.bounds_min = Vec2(0.0, 0.0);
  s.lattice.bounds_max = Vec2(4.5, 4.8);
  s.lattice.ground_z = s.vehicle.wheel_radius;
  s.map_min = Vec3(-0.5, -0.5, 0.0);
  s.map_max = Vec3(5.0, 5.3, 2.0);
  s.seed = 7;
  return s;
}

Scenario scenario_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  if (!doc.is_object()) fail("scenario", "expected a JSON object");

  Scenario s;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("name", "expected a string");
    s.name = doc["name"].get<std::string>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) fail("seed", "expected an integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }

  const json& world = *section(doc, "", "world", true);
  if (world.contains("walls")) {
    if (!world["walls"].is_array()) fail("world.walls", "expected an array");
    std::size_t k = 0;
    for (const json& w : world["walls"]) {
      const std::string path = "world.walls[" + std::to_string(k++) + "]";
      require_key(w, path, "a");
      require_key(w, path, "b");
      Wall wall;
      wall.a = vec<2>(w["a"], path + ".a");
      wall.b = vec<2>(w["b"], path + ".b");
      opt(w, path, "height", wall.height);
      s.world.walls.push_back(wall);
    }
  }
  if (world.contains("boxes")) {
    if (!world["boxes"].is_array()) fail("world.boxes", "expected an array");
    std::size_t k = 0;
    for (const json& b : world["boxes"]) {
      const std::string path = "world.boxes[" + std::to_string(k++) + "]";
      require_key(b, path, "min");
      require_key(b, path, "max");
      Box box;
      box.min = vec<3>(b["min"], path + ".min");
      box.max = vec<3>(b["max"], path + ".max");
      opt(b, path, "removable", box.removable);
      if (b.contains("label")) box.label = b["label"].get<std::string>();
      s.world.boxes.push_back(box);
    }
  }
  if (world.contains("ceiling_height")) {
    double c = 0.0;
    opt(world, "world", "ceiling_height", c);
    s.world.ceiling_height = c;
  }
  opt(world, "world", "footprint_min", s.world.footprint_min);
  opt(world, "world", "footprint_max", s.world.footprint_max);
  opt(world, "world", "has_floor", s.world.has_floor);

  const json& start = *section(doc, "", "start", true);
  require_key(start, "start", "x");
  require_key(start, "start", "y");
  opt(start, "start", "x", s.start_xy.x());
  opt(start, "start", "y", s.start_xy.y());
  opt(start, "start", "yaw", s.start_yaw);

  require_key(doc, "", "circuit");
  if (!doc["circuit"].is_array()) fail("circuit", "expected an array of [x, y] points");
  for (std::size_t k = 0; k < doc["circuit"].size(); ++k)
    s.circuit.push_back(vec<2>(doc["circuit"][k], "circuit[" + std::to_string(k) + "]"));

  const json& v = *section(doc, "", "vehicle", true);
  require_key(v, "vehicle", "mass");
  opt(v, "vehicle", "mass", s.vehicle.mass);
  opt(v, "vehicle", "inertia_diag", s.vehicle.inertia_diag);
  opt(v, "vehicle", "arm_length", s.vehicle.arm_length);
  opt(v, "vehicle", "yaw_moment_coeff", s.vehicle.yaw_moment_coeff);
  opt(v, "vehicle", "wheel_radius", s.vehicle.wheel_radius);
  opt(v, "vehicle", "body_radius", s.vehicle.body_radius);
  opt(v, "vehicle", "max_total_thrust", s.vehicle.max_total_thrust);
  s.vehicle.motor_power_coeff = calibrate_power_coeff(kCalibratedHoverPower, s.vehicle.mass);
  opt(v, "vehicle", "motor_power_coeff", s.vehicle.motor_power_coeff);
  opt(v, "vehicle", "idle_power", s.vehicle.idle_power);
  opt(v, "vehicle", "rolling_thrust_fraction", s.vehicle.rolling_thrust_fraction);
  opt(v, "vehicle", "ground_yaw_bandwidth", s.vehicle.ground_yaw_bandwidth);

  if (const json* g = section(doc, "", "gains", false)) {
    if (const json* r = section(*g, "gains", "rolling", false)) {
      RollingGains& rg = s.gains.rolling;
      const std::string p = "gains.rolling";
      opt(*r, p, "pos_kp", rg.pos_kp);
      opt(*r, p, "yaw_kp", rg.yaw_kp);
      opt(*r, p, "yaw_kd", rg.yaw_kd);
      opt(*r, p, "vel_kd", rg.vel_kd);
      opt(*r, p, "vel_ki", rg.vel_ki);
      opt(*r, p, "pitch_kp", rg.pitch_kp);
      opt(*r, p, "pitch_kd", rg.pitch_kd);
      opt(*r, p, "pitch_ki", rg.pitch_ki);
    }
    if (const json* f = section(*g, "gains", "flying", false)) {
      FlyingGains& fg = s.gains.flying;
      const std::string p = "gains.flying";
      opt(*f, p, "pos_kp", fg.pos_kp);
      opt(*f, p, "vel_kp", fg.vel_kp);
      opt(*f, p, "vel_ki", fg.vel_ki);
      opt(*f, p, "vel_kd", fg.vel_kd);
      opt(*f, p, "att_kp", fg.att_kp);
      opt(*f, p, "rate_kp", fg.rate_kp);
      opt(*f, p, "rate_ki", fg.rate_ki);
      opt(*f, p, "rate_kd", fg.rate_kd);
    }
    if (const json* l = section(*g, "gains", "limits", false)) {
      ControlLimits& cl = s.gains.limits;
      const std::string p = "gains.limits";
      opt(*l, p, "ground_speed_max", cl.ground_speed_max);
      opt(*l, p, "pitch_max", cl.pitch_max);
      opt(*l, p, "yaw_deadband", cl.yaw_deadband);
      opt(*l, p, "integral_limit", cl.integral_limit);
      opt(*l, p, "yaw_rate_filter_tau", cl.yaw_rate_filter_tau);
      opt(*l, p, "tilt_max", cl.tilt_max);
      opt(*l, p, "speed_max_xy", cl.speed_max_xy);
      opt(*l, p, "speed_max_z", cl.speed_max_z);
      opt(*l, p, "body_rate_max", cl.body_rate_max);
      opt(*l, p, "takeoff_rate", cl.takeoff_rate);
      opt(*l, p, "takeoff_clearance", cl.takeoff_clearance);
      opt(*l, p, "land_speed", cl.land_speed);
      opt(*l, p, "land_tolerance", cl.land_tolerance);
      opt(*l, p, "land_dwell", cl.land_dwell);
      opt(*l, p, "transition_timeout", cl.transition_timeout);
    }
  }

  if (const json* p = section(doc, "", "planner", false)) {
    PlannerParams& pp = s.planner;
    opt(*p, "planner", "horizon", pp.horizon);
    opt(*p, "planner", "n_azimuth", pp.n_azimuth);
    opt(*p, "planner", "arc_half_span", pp.arc_half_span);
    opt(*p, "planner", "aerial_elevations", pp.aerial_elevations);
    opt(*p, "planner", "vehicle_radius", pp.vehicle_radius);
    opt(*p, "planner", "buffer", pp.buffer);
    opt(*p, "planner", "goal_weight", pp.goal_weight);
    opt(*p, "planner", "cruise_speed", pp.cruise_speed);
    opt(*p, "planner", "lookahead", pp.lookahead);
    opt(*p, "planner", "query_points", pp.query_points);
    opt(*p, "planner", "transition_radius", pp.transition_radius);
    opt(*p, "planner", "floor_is_obstacle_in_flight", pp.floor_is_obstacle_in_flight);
  }

  s.lattice.ground_z = s.vehicle.wheel_radius;
  if (const json* l = section(doc, "", "lattice", false)) {
    LatticeParams& lp = s.lattice;
    opt(*l, "lattice", "bounds_min", lp.bounds_min);
    opt(*l, "lattice", "bounds_max", lp.bounds_max);
    opt(*l, "lattice", "spacing", lp.spacing);
    opt(*l, "lattice", "ground_z", lp.ground_z);
    opt(*l, "lattice", "aerial_levels", lp.aerial_levels);
    opt(*l, "lattice", "vehicle_radius", lp.vehicle_radius);
    opt(*l, "lattice", "margin", lp.margin);
    opt(*l, "lattice", "d_safe", lp.d_safe);
    opt(*l, "lattice", "w_obs", lp.w_obs);
    opt(*l, "lattice", "c_fly", lp.c_fly);
    opt(*l, "lattice", "transition_cost", lp.transition_cost);
  }

  if (const json* m = section(doc, "", "mapping", false)) {
    OccupancyParams& op = s.mapper.occupancy;
    opt(*m, "mapping", "resolution", op.resolution);
    opt(*m, "mapping", "log_odds_hit", op.log_odds_hit);
    opt(*m, "mapping", "log_odds_miss", op.log_odds_miss);
    opt(*m, "mapping", "log_odds_min", op.log_odds_min);
    opt(*m, "mapping", "log_odds_max", op.log_odds_max);
    opt(*m, "mapping", "occupied_threshold", op.occupied_threshold);
    opt(*m, "mapping", "max_range", op.max_range);
    opt(*m, "mapping", "ground_clip_z", op.ground_clip_z);
    opt(*m, "mapping", "edt_d_max", s.mapper.edt_d_max);
    opt(*m, "mapping", "crop_extent", s.mapper.crop_extent);
    opt(*m, "mapping", "map_min", s.map_min);
    opt(*m, "mapping", "map_max", s.map_max);
  }

  if (const json* l = section(doc, "", "lidar", false)) {
    opt(*l, "lidar", "rings", s.lidar.rings);
    opt(*l, "lidar", "min_elevation", s.lidar.min_elevation);
    opt(*l, "lidar", "max_elevation", s.lidar.max_elevation);
    opt(*l, "lidar", "azimuth_resolution", s.lidar.azimuth_resolution);
    opt(*l, "lidar", "min_range", s.lidar.min_range);
    opt(*l, "lidar", "max_range", s.lidar.max_range);
    opt(*l, "lidar", "wheel_occlusion_half_width", s.lidar.wheel_occlusion_half_width);
    opt(*l, "lidar", "wheel_occlusion", s.lidar.wheel_occlusion);
    opt(*l, "lidar", "range_noise_sigma", s.lidar.range_noise_sigma);
  }

  if (const json* n = section(doc, "", "pose_noise", false)) {
    opt(*n, "pose_noise", "position_sigma", s.pose_noise.position_sigma);
    opt(*n, "pose_noise", "yaw_sigma", s.pose_noise.yaw_sigma);
    opt(*n, "pose_noise", "velocity_sigma", s.pose_noise.velocity_sigma);
  }
  if (doc.contains("failures")) {
    if (!doc["failures"].is_array()) fail("failures", "expected an array");
    std::size_t k = 0;
    for (const json& f : doc["failures"]) {
      const std::string path = "failures[" + std::to_string(k++) + "]";
      require_key(f, path, "t_start");
      require_key(f, path, "t_end");
      FailureWindow w;
      opt(f, path, "t_start", w.t_start);
      opt(f, path, "t_end", w.t_end);
      s.failures.push_back(w);
    }
  }
  if (const json* r = section(doc, "", "rates", false)) {
    opt(*r, "rates", "control", s.rates.control);
    opt(*r, "rates", "local", s.rates.local);
    opt(*r, "rates", "global", s.rates.global);
  }
  if (const json* m = section(doc, "", "mission", false)) {
    opt(*m, "mission", "timeout_s", s.mission.timeout_s);
    opt(*m, "mission", "completion_distance", s.mission.completion_distance);
    opt(*m, "mission", "completion_radius", s.mission.completion_radius);
    opt(*m, "mission", "goal_lead", s.mission.goal_lead);
    opt(*m, "mission", "waypoint_lookahead", s.mission.waypoint_lookahead);
    opt(*m, "mission", "p_ref", s.mission.p_ref);
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  for (const std::string& name : builtin_scenario_names())
    if (path == name) return builtin_scenario(name);
  std::ifstream in(path);
  if (!in) throw ScenarioError("scenario: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["seed"] = s.seed;
  json walls = json::array();
  for (const Wall& w : s.world.walls) walls.push_back({{"a", to_json(w.a)}, {"b", to_json(w.b)}, {"height", w.height}});
  json boxes = json::array();
  for (const Box& b : s.world.boxes)
    boxes.push_back({{"min", to_json(b.min)}, {"max", to_json(b.max)}, {"removable", b.removable}, {"label", b.label}});
  doc["world"] = {{"walls", walls},
                  {"boxes", boxes},
                  {"footprint_min", to_json(s.world.footprint_min)},
                  {"footprint_max", to_json(s.world.footprint_max)},
                  {"has_floor", s.world.has_floor}};
  if (s.world.ceiling_height) doc["world"]["ceiling_height"] = *s.world.ceiling_height;
  doc["start"] = {{"x", s.start_xy.x()}, {"y", s.start_xy.y()}, {"yaw", s.start_yaw}};
  json circuit = json::array();
  for (const Vec2& p : s.circuit) circuit.push_back(to_json(p));
  doc["circuit"] = circuit;

  const VehicleParams& v = s.vehicle;
  doc["vehicle"] = {{"mass", v.mass},
                    {"inertia_diag", to_json(v.inertia_diag)},
                    {"arm_length", v.arm_length},
                    {"yaw_moment_coeff", v.yaw_moment_coeff},
                    {"wheel_radius", v.wheel_radius},
                    {"body_radius", v.body_radius},
                    {"max_total_thrust", v.max_total_thrust},
                    {"motor_power_coeff", v.motor_power_coeff},
                    {"idle_power", v.idle_power},
                    {"rolling_thrust_fraction", v.rolling_thrust_fraction},
                    {"ground_yaw_bandwidth", v.ground_yaw_bandwidth}};

  const RollingGains& rg = s.gains.rolling;
  const FlyingGains& fg = s.gains.flying;
  const ControlLimits& cl = s.gains.limits;
  doc["gains"]["rolling"] = {{"pos_kp", rg.pos_kp},     {"yaw_kp", rg.yaw_kp},     {"yaw_kd", rg.yaw_kd},
                             {"vel_kd", rg.vel_kd},     {"vel_ki", rg.vel_ki},     {"pitch_kp", rg.pitch_kp},
                             {"pitch_kd", rg.pitch_kd}, {"pitch_ki", rg.pitch_ki}};
  doc["gains"]["flying"] = {{"pos_kp", to_json(fg.pos_kp)},   {"vel_kp", to_json(fg.vel_kp)},
                            {"vel_ki", to_json(fg.vel_ki)},   {"vel_kd", to_json(fg.vel_kd)},
                            {"att_kp", to_json(fg.att_kp)},   {"rate_kp", to_json(fg.rate_kp)},
                            {"rate_ki", to_json(fg.rate_ki)}, {"rate_kd", to_json(fg.rate_kd)}};
  doc["gains"]["limits"] = {{"ground_speed_max", cl.ground_speed_max},
                            {"pitch_max", cl.pitch_max},
                            {"yaw_deadband", cl.yaw_deadband},
                            {"integral_limit", cl.integral_limit},
                            {"yaw_rate_filter_tau", cl.yaw_rate_filter_tau},
                            {"tilt_max", cl.tilt_max},
                            {"speed_max_xy", cl.speed_max_xy},
                            {"speed_max_z", cl.speed_max_z},
                            {"body_rate_max", cl.body_rate_max},
                            {"takeoff_rate", cl.takeoff_rate},
                            {"takeoff_clearance", cl.takeoff_clearance},
                            {"land_speed", cl.land_speed},
                            {"land_tolerance", cl.land_tolerance},
                            {"land_dwell", cl.land_dwell},
                            {"transition_timeout", cl.transition_timeout}};

  const PlannerParams& pp = s.planner;
  doc["planner"] = {{"horizon", pp.horizon},
                    {"n_azimuth", pp.n_azimuth},
                    {"arc_half_span", pp.arc_half_span},
                    {"aerial_elevations", pp.aerial_elevations},
                    {"vehicle_radius", pp.vehicle_radius},
                    {"buffer", pp.buffer},
                    {"goal_weight", pp.goal_weight},
                    {"cruise_speed", pp.cruise_speed},
                    {"lookahead", pp.lookahead},
                    {"query_points", pp.query_points},
                    {"transition_radius", pp.transition_radius},
                    {"floor_is_obstacle_in_flight", pp.floor_is_obstacle_in_flight}};

  const LatticeParams& lp = s.lattice;
  doc["lattice"] = {{"bounds_min", to_json(lp.bounds_min)},
                    {"bounds_max", to_json(lp.bounds_max)},
                    {"spacing", lp.spacing},
                    {"ground_z", lp.ground_z},
                    {"aerial_levels", lp.aerial_levels},
                    {"vehicle_radius", lp.vehicle_radius},
                    {"margin", lp.margin},
                    {"d_safe", lp.d_safe},
                    {"w_obs", lp.w_obs},
                    {"c_fly", lp.c_fly},
                    {"transition_cost", lp.transition_cost}};

  const OccupancyParams& op = s.mapper.occupancy;
  doc["mapping"] = {{"resolution", op.resolution},
                    {"log_odds_hit", op.log_odds_hit},
                    {"log_odds_miss", op.log_odds_miss},
                    {"log_odds_min", op.log_odds_min},
                    {"log_odds_max", op.log_odds_max},
                    {"occupied_threshold", op.occupied_threshold},
                    {"max_range", op.max_range},
                    {"ground_clip_z", op.ground_clip_z},
                    {"edt_d_max", s.mapper.edt_d_max},
                    {"crop_extent", to_json(s.mapper.crop_extent)},
                    {"map_min", to_json(s.map_min)},
                    {"map_max", to_json(s.map_max)}};

  doc["lidar"] = {{"rings", s.lidar.rings},
                  {"min_elevation", s.lidar.min_elevation},
                  {"max_elevation", s.lidar.max_elevation},
                  {"azimuth_resolution", s.lidar.azimuth_resolution},
                  {"min_range", s.lidar.min_range},
                  {"max_range", s.lidar.max_range},
                  {"wheel_occlusion_half_width", s.lidar.wheel_occlusion_half_width},
                  {"wheel_occlusion", s.lidar.wheel_occlusion},
                  {"range_noise_sigma", s.lidar.range_noise_sigma}};
  doc["pose_noise"] = {{"position_sigma", s.pose_noise.position_sigma},
                       {"yaw_sigma", s.pose_noise.yaw_sigma},
                       {"velocity_sigma", s.pose_noise.velocity_sigma}};
  json failures = json::array();
  for (const FailureWindow& f : s.failures) failures.push_back({{"t_start", f.t_start}, {"t_end", f.t_end}});
  doc["failures"] = failures;
  doc["rates"] = {{"control", s.rates.control}, {"local", s.rates.local}, {"global", s.rates.global}};
  doc["mission"] = {{"timeout_s", s.mission.timeout_s},
                    {"completion_distance", s.mission.completion_distance},
                    {"completion_radius", s.mission.completion_radius},
                    {"goal_lead", s.mission.goal_lead},
                    {"waypoint_lookahead", s.mission.waypoint_lookahead},
                    {"p_ref", s.mission.p_ref}};
  return doc.dump(2) + "\n";
}

}  // namespace hybrid
