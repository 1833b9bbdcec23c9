#include "exoverse/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exoverse/environment.hpp"

namespace exoverse {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto* k : known) ok = ok || it.key() == k;
    if (!ok) throw ValidationError("unknown key '" + it.key() + "' in " + where);
  }
}

json vec2_to_json(Vec2 v) { return json::array({v.hip, v.knee}); }

Vec2 vec2_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) {
    throw ValidationError(where + " must be a 2-element array [hip, knee]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json segment_to_json(const SegmentParams& s) {
  return {{"length", s.length},
          {"radius", s.radius},
          {"mass", s.mass},
          {"moment", s.moment},
          {"first_moment_axial", s.first_moment_axial},
          {"first_moment_transverse", s.first_moment_transverse}};
}

SegmentParams segment_from_json(const json& j, SegmentParams base, const std::string& where) {
  reject_unknown(j,
                 {"length", "radius", "mass", "moment", "first_moment_axial",
                  "first_moment_transverse"},
                 where);
  base.length = j.value("length", base.length);
  base.radius = j.value("radius", base.radius);
  base.mass = j.value("mass", base.mass);
  base.moment = j.value("moment", base.moment);
  base.first_moment_axial = j.value("first_moment_axial", base.first_moment_axial);
  base.first_moment_transverse = j.value("first_moment_transverse", base.first_moment_transverse);
  return base;
}

json body_to_json(const BodyModel& b) {
  return {{"thigh", segment_to_json(b.thigh)},
          {"shank", segment_to_json(b.shank)},
          {"rho_body", b.rho_body}};
}

BodyModel body_from_json(const json& j, BodyModel base, const std::string& where) {
  reject_unknown(j, {"thigh", "shank", "rho_body"}, where);
  if (j.contains("thigh")) base.thigh = segment_from_json(j["thigh"], base.thigh, where + ".thigh");
  if (j.contains("shank")) base.shank = segment_from_json(j["shank"], base.shank, where + ".shank");
  base.rho_body = j.value("rho_body", base.rho_body);
  return base;
}

json env_to_json(const EnvironmentSpec& env) {
  return {{"name", env.name},         {"g", env.g},
          {"rho_fluid", env.rho_fluid}, {"mu_fluid", env.mu_fluid},
          {"ref_velocity", env.ref_velocity}, {"char_length", env.char_length}};
}

EnvironmentSpec env_from_json(const json& j, const std::string& where) {
  if (j.is_string()) return find_environment(j.get<std::string>());
  if (!j.is_object()) {
    throw ValidationError(where + " must be an environment name or an object");
  }
  const auto envs = environments_from_json(j.dump());
  return envs.front();
}

}  // namespace

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["dt"] = cfg.sim.dt;
  j["n_cycles"] = cfg.sim.n_cycles;
  j["cycle_duration"] = cfg.cycle_duration;
  j["gait"] = cfg.gait;
  j["walking_speed"] = cfg.walking_speed;
  j["virtual_env"] = env_to_json(cfg.sim.virtual_env);
  j["real_env"] = env_to_json(cfg.sim.real_env);
  j["sensor_noise_std"] = cfg.sim.sensor_noise_std;
  j["model_error"] = cfg.sim.model_error;
  j["seed"] = cfg.sim.seed;
  j["grf"] = {{"body_weight", cfg.sim.grf.body_weight},
              {"stance_window", vec2_to_json(cfg.sim.grf.stance_window)},
              {"peak_scale", cfg.sim.grf.peak_scale},
              {"lever_arm", vec2_to_json(cfg.sim.grf.lever_arm)}};
  j["human_tracking"] = {{"kp", vec2_to_json(cfg.sim.human.kp)},
                         {"kd", vec2_to_json(cfg.sim.human.kd)}};
  j["body"] = body_to_json(cfg.body);
  j["robot"] = {{"links", body_to_json(cfg.robot.links)},
                {"friction_viscous", vec2_to_json(cfg.robot.friction_viscous)},
                {"friction_coulomb", vec2_to_json(cfg.robot.friction_coulomb)},
                {"actuator_limit", vec2_to_json(cfg.robot.actuator_limit)}};
  j["gains"] = {{"kp", vec2_to_json(cfg.gains.kp)},
                {"kd", vec2_to_json(cfg.gains.kd)},
                {"derivative_filter_tau", cfg.gains.derivative_filter_tau}};
  return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  reject_unknown(j,
                 {"dt", "n_cycles", "cycle_duration", "gait", "walking_speed", "virtual_env",
                  "real_env", "sensor_noise_std", "model_error", "seed", "grf", "human_tracking",
                  "body", "robot", "gains"},
                 "config");

  RunConfig cfg;
  try {
    cfg.sim.dt = j.value("dt", cfg.sim.dt);
    cfg.sim.n_cycles = j.value("n_cycles", cfg.sim.n_cycles);
    cfg.cycle_duration = j.value("cycle_duration", cfg.cycle_duration);
    cfg.gait = j.value("gait", cfg.gait);
    cfg.walking_speed = j.value("walking_speed", cfg.walking_speed);
    if (j.contains("virtual_env")) cfg.sim.virtual_env = env_from_json(j["virtual_env"], "virtual_env");
    if (j.contains("real_env")) cfg.sim.real_env = env_from_json(j["real_env"], "real_env");
    cfg.sim.sensor_noise_std = j.value("sensor_noise_std", cfg.sim.sensor_noise_std);
    cfg.sim.model_error = j.value("model_error", cfg.sim.model_error);
    cfg.sim.seed = j.value("seed", cfg.sim.seed);
    if (j.contains("grf")) {
      const json& g = j["grf"];
      reject_unknown(g, {"body_weight", "stance_window", "peak_scale", "lever_arm"}, "grf");
      cfg.sim.grf.body_weight = g.value("body_weight", cfg.sim.grf.body_weight);
      if (g.contains("stance_window")) {
        cfg.sim.grf.stance_window = vec2_from_json(g["stance_window"], "grf.stance_window");
      }
      cfg.sim.grf.peak_scale = g.value("peak_scale", cfg.sim.grf.peak_scale);
      if (g.contains("lever_arm")) {
        cfg.sim.grf.lever_arm = vec2_from_json(g["lever_arm"], "grf.lever_arm");
      }
    }
    if (j.contains("human_tracking")) {
      const json& h = j["human_tracking"];
      reject_unknown(h, {"kp", "kd"}, "human_tracking");
      if (h.contains("kp")) cfg.sim.human.kp = vec2_from_json(h["kp"], "human_tracking.kp");
      if (h.contains("kd")) cfg.sim.human.kd = vec2_from_json(h["kd"], "human_tracking.kd");
    }
    if (j.contains("body")) cfg.body = body_from_json(j["body"], cfg.body, "body");
    if (j.contains("robot")) {
      const json& r = j["robot"];
      reject_unknown(r, {"links", "friction_viscous", "friction_coulomb", "actuator_limit"},
                     "robot");
      if (r.contains("links")) cfg.robot.links = body_from_json(r["links"], cfg.robot.links, "robot.links");
      if (r.contains("friction_viscous")) {
        cfg.robot.friction_viscous = vec2_from_json(r["friction_viscous"], "robot.friction_viscous");
      }
      if (r.contains("friction_coulomb")) {
        cfg.robot.friction_coulomb = vec2_from_json(r["friction_coulomb"], "robot.friction_coulomb");
      }
      if (r.contains("actuator_limit")) {
        cfg.robot.actuator_limit = vec2_from_json(r["actuator_limit"], "robot.actuator_limit");
      }
    }
    if (j.contains("gains")) {
      const json& g = j["gains"];
      reject_unknown(g, {"kp", "kd", "derivative_filter_tau"}, "gains");
      if (g.contains("kp")) cfg.gains.kp = vec2_from_json(g["kp"], "gains.kp");
      if (g.contains("kd")) cfg.gains.kd = vec2_from_json(g["kd"], "gains.kd");
      cfg.gains.derivative_filter_tau =
          g.value("derivative_filter_tau", cfg.gains.derivative_filter_tau);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }

  validate(cfg.sim);
  validate(cfg.body);
  validate(cfg.robot);
  validate(cfg.gains);
  if (!(cfg.cycle_duration > 0.0)) throw ValidationError("cycle_duration must be positive");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_config_from_json(buf.str());
}

}  // namespace exoverse
