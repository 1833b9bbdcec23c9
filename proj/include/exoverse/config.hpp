#pragma once

#include <string>

#include "exoverse/sim.hpp"

namespace exoverse {

/// Everything a closed-loop run needs, with defaults materialized. The JSON
/// form mirrors the struct fields in snake_case; unknown keys are rejected.
struct RunConfig {
  SimConfig sim;
  BodyModel body = default_body();
  RobotModel robot = default_robot();
  ControllerGains gains;
  double cycle_duration = 1.4;  // s
  double walking_speed = kNominalWalkingSpeed;
  std::string gait = "synthetic";  // "synthetic" or a gait CSV path
};

std::string run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);

}  // namespace exoverse
