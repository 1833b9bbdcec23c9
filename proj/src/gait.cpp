#include "exoverse/gait.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace exoverse {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kClosureTolDeg = 0.5;

// Normal-gait Fourier coefficients (a0, a1, b1, ..., a6, b6) in degrees on
// the gait-percent axis, fitted offline to normal-gait kinematic norms
// (hip flexion -10..30 deg, knee flexion 0..60 deg with the swing peak near
// 70% GC, fit RMS well under 1 deg).
constexpr std::array<double, 13> kHipFourier = {
    12.199032186318862,   19.754322636107602,  -5.48969478889782,
    -2.8169391270169712,  -0.289458946064054,  -0.4257722288010129,
    1.5189766074463773,   -0.06011643805712944, -0.20149241597746217,
    -0.09906567808300205, 0.11684741543116284, -0.01713805390139514,
    -0.09354635311564202,
};
constexpr std::array<double, 13> kKneeFourier = {
    18.80944482738693,    -0.6521008303098768, -15.572876544343885,
    -13.16563763360449,   6.658454077214439,   1.2594987393404684,
    5.098613915399735,    0.5036137356351122,  -1.2290271000519302,
    -0.7751086344960466,  -0.010019442597227477, 0.07683828414865672,
    0.20168309739263002,
};

// Harmonic phases wrap through fmod so that p = 100 closes exactly onto p = 0.
double fourier_deg(const std::array<double, 13>& c, double p, double amp_scale) {
  double v = c[0];
  for (int k = 1; k <= 6; ++k) {
    const double ph = 2.0 * std::numbers::pi * std::fmod(k * p, 100.0) / 100.0;
    v += amp_scale * (c[2 * k - 1] * std::cos(ph) + c[2 * k] * std::sin(ph));
  }
  return v;
}

double parse_number(const std::string& field, int line_no, const char* column) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0') || !std::isfinite(v)) {
    throw ValidationError("line " + std::to_string(line_no) + ": cannot parse " + column +
                          " value '" + field + "'");
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto a = field.find_first_not_of(" \t\r");
    const auto b = field.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  return out;
}

}  // namespace

void validate(const GaitTrajectory& traj, const JointLimits& limits) {
  if (traj.samples.empty()) throw ValidationError("gait trajectory is empty");
  if (std::abs(traj.samples.front().gc_percent) > 1e-9) {
    throw ValidationError("gait trajectory must start at 0% GC");
  }
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    if (s.gc_percent < 0.0 || s.gc_percent > 100.0) {
      throw ValidationError("sample " + std::to_string(i) + ": gc_percent outside [0, 100]");
    }
    if (i > 0 && !(s.gc_percent > traj.samples[i - 1].gc_percent)) {
      throw ValidationError("sample " + std::to_string(i) + ": gc_percent not strictly increasing");
    }
    JointState state;
    state.theta = {s.hip, s.knee};
    try {
      validate(state, limits);
    } catch (const ValidationError& e) {
      throw ValidationError("sample " + std::to_string(i) + ": " + e.what());
    }
  }
  const auto& first = traj.samples.front();
  const auto& last = traj.samples.back();
  if (std::abs(last.gc_percent - 100.0) < 1e-9) {
    if (std::abs(last.hip - first.hip) > kClosureTolDeg * kDegToRad ||
        std::abs(last.knee - first.knee) > kClosureTolDeg * kDegToRad) {
      throw ValidationError("trajectory endpoints at 0% and 100% differ by more than 0.5 deg");
    }
  }
}

GaitTrajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gait file: " + path);

  GaitTrajectory traj;
  traj.source = path;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "gc_percent,hip_deg,knee_deg") {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": expected header 'gc_percent,hip_deg,knee_deg', got '" + line +
                              "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 3) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 3 columns, got " +
                            std::to_string(fields.size()));
    }
    GaitSample s;
    s.gc_percent = parse_number(fields[0], line_no, "gc_percent");
    s.hip = parse_number(fields[1], line_no, "hip_deg") * kDegToRad;
    s.knee = parse_number(fields[2], line_no, "knee_deg") * kDegToRad;
    if (!traj.samples.empty() && !(s.gc_percent > traj.samples.back().gc_percent)) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": gc_percent not strictly increasing");
    }
    traj.samples.push_back(s);
  }
  if (!header_seen) throw ValidationError(path + ": missing header line");
  validate(traj);
  return traj;
}

void save_trajectory(const GaitTrajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write gait file: " + path);
  out << "gc_percent,hip_deg,knee_deg\n";
  char buf[128];
  for (const auto& s : traj.samples) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g\n", s.gc_percent, s.hip / kDegToRad,
                  s.knee / kDegToRad);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

GaitKinematics to_kinematics(const GaitTrajectory& traj, double cycle_duration,
                             double walking_speed) {
  validate(traj);
  if (traj.samples.size() < 4) {
    throw ValidationError("gait trajectory too coarse for spline differentiation (< 4 samples)");
  }
  if (!(cycle_duration > 0.0) || !std::isfinite(cycle_duration)) {
    throw ValidationError("cycle duration must be positive");
  }

  std::vector<double> gc, hip, knee;
  for (const auto& s : traj.samples) {
    if (std::abs(s.gc_percent - 100.0) < 1e-9) break;  // duplicate of the 0% sample
    gc.push_back(s.gc_percent);
    hip.push_back(s.hip);
    knee.push_back(s.knee);
  }
  auto curves = std::make_shared<GaitCurves>(
      GaitCurves{PeriodicSpline(gc, hip, 100.0), PeriodicSpline(gc, knee, 100.0)});

  GaitKinematics kin;
  kin.cycle_duration = cycle_duration;
  kin.walking_speed = walking_speed;
  kin.curves = curves;
  const auto n = static_cast<std::size_t>(std::llround(cycle_duration / 0.001));
  if (n < 100) throw ValidationError("cycle duration too short (need at least 100 samples)");
  kin.dt = cycle_duration / static_cast<double>(n);

  const double scale = 100.0 / cycle_duration;  // d(gc_percent)/dt
  kin.states.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double p = 100.0 * static_cast<double>(k) / static_cast<double>(n);
    JointState& s = kin.states[k];
    s.theta = {curves->hip.value(p), curves->knee.value(p)};
    s.theta_dot = {curves->hip.derivative(p) * scale, curves->knee.derivative(p) * scale};
    s.theta_ddot = {curves->hip.second_derivative(p) * scale * scale,
                    curves->knee.second_derivative(p) * scale * scale};
    validate(s);
  }
  return kin;
}

JointState GaitKinematics::at_time(double t) const {
  if (!curves) throw ValidationError("kinematics carries no continuous curves");
  const double p = gc_percent(t);
  const double scale = 100.0 / cycle_duration;
  JointState s;
  s.theta = {curves->hip.value(p), curves->knee.value(p)};
  s.theta_dot = {curves->hip.derivative(p) * scale, curves->knee.derivative(p) * scale};
  s.theta_ddot = {curves->hip.second_derivative(p) * scale * scale,
                  curves->knee.second_derivative(p) * scale * scale};
  return s;
}

double GaitKinematics::gc_percent(double t) const {
  double frac = std::fmod(t / cycle_duration, 1.0);
  if (frac < 0.0) frac += 1.0;
  return 100.0 * frac;
}

GaitTrajectory synthetic_normal_gait(double walking_speed) {
  if (!(walking_speed >= 0.1 && walking_speed <= 2.0)) {
    throw ValidationError("walking speed must lie in [0.1, 2.0] m/s");
  }
  // Excursions shrink mildly below nominal speed and are capped at the
  // nominal curves so the generator stays inside the normal-gait norms.
  const double amp = std::min(1.0, 0.85 + 0.15 * walking_speed / kNominalWalkingSpeed);

  GaitTrajectory traj;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "synthetic_normal_gait(speed=%.3f)", walking_speed);
  traj.source = buf;
  traj.samples.reserve(101);
  for (int p = 0; p <= 100; ++p) {
    GaitSample s;
    s.gc_percent = p;
    s.hip = fourier_deg(kHipFourier, p, amp) * kDegToRad;
    s.knee = fourier_deg(kKneeFourier, p, amp) * kDegToRad;
    traj.samples.push_back(s);
  }
  validate(traj);
  return traj;
}

}  // namespace exoverse
