#include "exoverse/environment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exoverse/errors.hpp"

namespace exoverse {

void validate(const EnvironmentSpec& env) {
  if (env.name.empty()) throw ValidationError("environment name must not be empty");
  if (!(env.g >= 0.0) || !std::isfinite(env.g)) {
    throw ValidationError("environment '" + env.name + "': g must be nonnegative");
  }
  if (!(env.rho_fluid >= 0.0) || !std::isfinite(env.rho_fluid)) {
    throw ValidationError("environment '" + env.name + "': rho_fluid must be nonnegative");
  }
  if (env.rho_fluid > 0.0 && !(env.mu_fluid > 0.0)) {
    throw ValidationError("environment '" + env.name +
                          "': mu_fluid must be positive for a fluid environment");
  }
  if (!std::isfinite(env.mu_fluid)) {
    throw ValidationError("environment '" + env.name + "': mu_fluid must be finite");
  }
  if (!(env.ref_velocity >= 0.0) || !std::isfinite(env.ref_velocity)) {
    throw ValidationError("environment '" + env.name + "': ref_velocity must be nonnegative");
  }
  if (!(env.char_length > 0.0) || !std::isfinite(env.char_length)) {
    throw ValidationError("environment '" + env.name + "': char_length must be positive");
  }
}

double reynolds_number(const EnvironmentSpec& env) {
  if (!(env.mu_fluid > 0.0)) {
    throw ValidationError("reynolds_number: mu_fluid must be positive");
  }
  return env.rho_fluid * env.char_length * env.ref_velocity / env.mu_fluid;
}

double drag_coefficient(double reynolds, double re_floor) {
  if (reynolds < 0.0 || !std::isfinite(reynolds)) {
    throw ValidationError("drag_coefficient: Reynolds number must be nonnegative");
  }
  const double re = std::max(reynolds, re_floor);
  return 1.18 + 6.8 / std::pow(re, 0.89) + 1.96 / std::sqrt(re) -
         0.0004 * re / (1.0 + 3.64e-7 * re * re);
}

FluidConstants fluid_constants(const EnvironmentSpec& env, double re_floor) {
  validate(env);
  FluidConstants fc;
  fc.reynolds = reynolds_number(env);
  fc.drag_coeff = drag_coefficient(fc.reynolds, re_floor);
  return fc;
}

std::vector<EnvironmentSpec> builtin_environments() {
  const double air_rho = 1.20;
  const double air_mu = 1.8e-4;
  return {
      {"water", 9.81, 998.2, 1e-3},
      {"olive_oil", 9.81, 800.0, 0.1},
      {"honey", 9.81, 1420.0, 5.0},
      {"peanut_butter", 9.81, 1283.0, 250.0},
      {"earth", 9.81, air_rho, air_mu},
      {"moon", 1.63, air_rho, air_mu},
      {"mars", 3.71, air_rho, air_mu},
      {"jupiter", 24.5, air_rho, air_mu},
  };
}

EnvironmentSpec find_environment(const std::string& name) {
  for (auto& env : builtin_environments()) {
    if (env.name == name) return env;
  }
  std::string names;
  for (auto& env : builtin_environments()) {
    if (!names.empty()) names += ", ";
    names += env.name;
  }
  throw ValidationError("unknown environment '" + name + "' (valid: " + names + ")");
}

const std::vector<CatalogReference>& catalog_reference() {
  static const std::vector<CatalogReference> ref = {
      {"water", 109800.0, 1.17}, {"olive_oil", 880.0, 0.99},    {"honey", 31.0, 1.84},
      {"peanut_butter", 0.56, 15.1}, {"earth", 733.0, 1.03},
  };
  return ref;
}

namespace {

nlohmann::json env_to_json(const EnvironmentSpec& env) {
  const FluidConstants fc = fluid_constants(env);
  return {{"name", env.name},
          {"g", env.g},
          {"rho_fluid", env.rho_fluid},
          {"mu_fluid", env.mu_fluid},
          {"ref_velocity", env.ref_velocity},
          {"char_length", env.char_length},
          {"reynolds", fc.reynolds},
          {"drag_coeff", fc.drag_coeff}};
}

EnvironmentSpec env_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("environment entry must be a JSON object");
  static const char* known[] = {"name",         "g",           "rho_fluid", "mu_fluid",
                                "ref_velocity", "char_length", "reynolds",  "drag_coeff"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto* k : known) ok = ok || it.key() == k;
    if (!ok) throw ValidationError("unknown key '" + it.key() + "' in environment entry");
  }
  EnvironmentSpec env;
  try {
    env.name = j.at("name").get<std::string>();
    env.g = j.at("g").get<double>();
    env.rho_fluid = j.at("rho_fluid").get<double>();
    env.mu_fluid = j.at("mu_fluid").get<double>();
    env.ref_velocity = j.value("ref_velocity", env.ref_velocity);
    env.char_length = j.value("char_length", env.char_length);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad environment entry: ") + e.what());
  }
  validate(env);
  return env;
}

}  // namespace

std::string environments_to_json(const std::vector<EnvironmentSpec>& envs) {
  nlohmann::json arr = nlohmann::json::array();
  for (auto& env : envs) arr.push_back(env_to_json(env));
  return arr.dump(2) + "\n";
}

std::vector<EnvironmentSpec> environments_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid environment JSON: ") + e.what());
  }
  std::vector<EnvironmentSpec> envs;
  if (doc.is_object()) {
    envs.push_back(env_from_json(doc));
    return envs;
  }
  if (!doc.is_array()) throw ValidationError("environment JSON must be an array or an object");
  for (auto& j : doc) envs.push_back(env_from_json(j));
  std::vector<std::string> seen;
  for (auto& env : envs) {
    for (auto& s : seen) {
      if (s == env.name) throw ValidationError("duplicate environment name '" + env.name + "'");
    }
    seen.push_back(env.name);
  }
  return envs;
}

std::vector<EnvironmentSpec> load_environments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open environment file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return environments_from_json(buf.str());
}

}  // namespace exoverse
