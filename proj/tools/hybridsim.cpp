#include "hybrid/mission/energy.hpp"
#include "hybrid/mission/executive.hpp"
#include "hybrid/mission/scenario.hpp"
#include "hybrid/mission/step_response.hpp"
#include "hybrid/mission/telemetry.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace fs = std::filesystem;
using namespace hybrid;

namespace {

constexpr int kExitCompleted = 0;
constexpr int kExitCollision = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitConfig = 4;

int exit_code(MissionStatus s) {
  switch (s) {
    case MissionStatus::Collision:
      return kExitCollision;
    case MissionStatus::Timeout:
    case MissionStatus::Running:
      return kExitTimeout;
    case MissionStatus::Completed:
      break;
  }
  return kExitCompleted;
}

struct RunArgs {
  std::string scenario = "paper-course";
  std::string policy = "hybrid";
  std::optional<std::uint64_t> seed;
  std::string out = ".";
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--scenario", a.scenario, "Scenario JSON file or built-in name")->capture_default_str();
  cmd->add_option("--policy", a.policy, "roll, fly or hybrid")
      ->check(CLI::IsMember({"roll", "fly", "hybrid"}))
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "Overrides the scenario seed");
}

MissionResult run(const RunArgs& a) {
  Scenario s = load_scenario(a.scenario);
  if (a.seed) s.seed = *a.seed;
  return run_mission(s, parse_policy(a.policy));
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  return out;
}

void print_summary(const MissionResult& r) {
  std::printf("status: %s\nduration_s: %.3f\ndistance_m: %.3f\nenergy_j: %.3f\ntakeoffs: %d\nlandings: %d\n"
              "flight_fraction: %.4f\n",
              to_string(r.status), r.duration_s, r.distance_m, r.energy_j, r.takeoffs, r.landings,
              r.flight_fraction);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid rolling/flying vehicle simulator"};
  app.require_subcommand(1);

  RunArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a closed-loop mission and write telemetry");
  add_run_options(simulate, sim);
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();

  std::string telemetry_path;
  double p_ref = kDefaultReferencePower;
  auto* energy = app.add_subcommand("energy-report", "Summarize power and energy from a telemetry CSV");
  energy->add_option("--telemetry", telemetry_path, "Telemetry CSV")->required();
  energy->add_option("--p-ref", p_ref, "Reference aerial-vehicle power (W)")->capture_default_str();

  std::string axis;
  double magnitude = 0.0;
  double duration = 10.0;
  std::string step_scenario = "paper-course";
  std::string trace_path;
  auto* step = app.add_subcommand("step-response", "Closed-loop step response of a rolling controller");
  step->add_option("--axis", axis, "pitch, velocity or yaw")
      ->required()
      ->check(CLI::IsMember({"pitch", "velocity", "yaw"}));
  step->add_option("--magnitude", magnitude, "Step size (rad, m/s or rad)")->required();
  step->add_option("--duration", duration, "Simulated time (s)")->capture_default_str();
  step->add_option("--scenario", step_scenario, "Scenario supplying gains and vehicle")->capture_default_str();
  step->add_option("--trace", trace_path, "Write the response trace CSV here");

  RunArgs map_args;
  std::string map_out = "map.txt";
  auto* export_map = app.add_subcommand("export-map", "Run a mission and write the final occupancy map");
  add_run_options(export_map, map_args);
  export_map->add_option("--out", map_out, "Output file")->capture_default_str();

  RunArgs path_args;
  std::string path_out = "path.txt";
  auto* export_path = app.add_subcommand("export-path", "Run a mission and write the last global path");
  add_run_options(export_path, path_args);
  export_path->add_option("--out", path_out, "Output file")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*simulate) {
      const MissionResult r = run(sim);
      const fs::path dir(sim.out);
      {
        std::ofstream out = open_out(dir / "telemetry.csv");
        write_telemetry_csv(out, r.telemetry);
      }
      {
        std::ofstream out = open_out(dir / "energy.txt");
        write_energy_report(out, r.energy);
      }
      print_summary(r);
      return exit_code(r.status);
    }
    if (*energy) {
      std::ifstream in(telemetry_path);
      if (!in) throw std::invalid_argument("telemetry: cannot open '" + telemetry_path + "'");
      write_energy_report(std::cout, energy_report(read_telemetry_csv(in), p_ref));
      return 0;
    }
    if (*step) {
      const Scenario s = load_scenario(step_scenario);
      StepOptions opt;
      opt.duration = duration;
      opt.dt = 1.0 / s.rates.control;
      const StepResponse r = step_response_experiment(parse_step_axis(axis), magnitude, s.gains, s.vehicle, opt);
      if (!trace_path.empty()) {
        std::ofstream out = open_out(trace_path);
        write_step_trace_csv(out, r);
      }
      const StepMetrics& m = r.metrics;
      std::printf("axis: %s\nmagnitude: %.6f\nrise_time_s: %.4f\nsettle_time_s: %.4f\novershoot: %.4f\n"
                  "final_value: %.6f\nsettled: %s\ndiverged: %s\n",
                  to_string(r.axis), r.magnitude, m.rise_time, m.settle_time, m.overshoot, m.final_value,
                  m.settled ? "yes" : "no", m.diverged ? "yes" : "no");
      return m.diverged ? 1 : 0;
    }
    if (*export_map) {
      const MissionResult r = run(map_args);
      std::ofstream out = open_out(map_out);
      r.final_map->write_text(out);
      print_summary(r);
      return exit_code(r.status);
    }
    if (*export_path) {
      const MissionResult r = run(path_args);
      std::ofstream out = open_out(path_out);
      write_path_text(out, r.last_path);
      print_summary(r);
      return exit_code(r.status);
    }
  } catch (const ScenarioError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
