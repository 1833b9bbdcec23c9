#pragma once

#include <string>
#include <vector>

#include "exoverse/types.hpp"

namespace exoverse {

/// Virtual-environment properties. Reynolds number and drag coefficient are
/// derived once per environment from the fixed reference velocity and
/// characteristic length, not from instantaneous segment speed.
struct EnvironmentSpec {
  std::string name;
  double g = 9.81;          // m/s^2
  double rho_fluid = 0.0;   // kg/m^3
  double mu_fluid = 1e-3;   // Pa*s
  double ref_velocity = 0.55;  // m/s
  double char_length = 0.2;    // m
};

void validate(const EnvironmentSpec& env);

struct FluidConstants {
  double reynolds = 0.0;
  double drag_coeff = 0.0;
};

double reynolds_number(const EnvironmentSpec& env);

/// Smooth-cylinder drag coefficient as a function of Reynolds number. The
/// formula is singular at Re = 0; below `re_floor` it is evaluated at the
/// floor instead (still fluid keeps a finite, large coefficient).
double drag_coefficient(double reynolds, double re_floor = 1e-3);

FluidConstants fluid_constants(const EnvironmentSpec& env, double re_floor = 1e-3);

/// The built-in catalog: water, olive oil, honey, peanut butter, and the
/// gravities of the Earth, Moon, Mars and Jupiter (all three planets use
/// Earth-like air as the ambient fluid).
std::vector<EnvironmentSpec> builtin_environments();

EnvironmentSpec find_environment(const std::string& name);

/// Published reference values used as a regression fixture for the catalog.
struct CatalogReference {
  std::string name;
  double reynolds;
  double drag_coeff;
};
const std::vector<CatalogReference>& catalog_reference();

/// JSON catalog schema: array of objects with keys name, g, rho_fluid,
/// mu_fluid, ref_velocity, char_length, reynolds, drag_coeff. The two derived
/// keys are emitted for inspection and ignored on load; unknown keys are
/// rejected.
std::string environments_to_json(const std::vector<EnvironmentSpec>& envs);
std::vector<EnvironmentSpec> environments_from_json(const std::string& text);
std::vector<EnvironmentSpec> load_environments(const std::string& path);

}  // namespace exoverse
