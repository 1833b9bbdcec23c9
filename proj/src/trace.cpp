#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exoverse/sim.hpp"
#include "exoverse/version.hpp"

namespace exoverse {

const char* const kTraceCsvHeader =
    "t,theta1,theta2,dtheta1,dtheta2,tau_M1,tau_M2,tau_R1,tau_R2,tau_int1,tau_int2,"
    "grav1,grav2,buoy1,buoy2,drag1,drag2,grf";

double SimTrace::gc_percent(std::size_t i) const {
  double frac = std::fmod(t[i] / cycle_duration, 1.0);
  if (frac < 0.0) frac += 1.0;
  return 100.0 * frac;
}

namespace {

constexpr int kColumnCount = 18;

void append_number(std::string& out, double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), ptr);
}

std::array<double, kColumnCount> row_values(const SimTrace& trace, std::size_t i) {
  const auto& s = trace.states[i];
  const auto& q = trace.torques[i];
  const auto& b = trace.breakdown[i];
  return {trace.t[i],    s.theta.hip,   s.theta.knee,  s.theta_dot.hip, s.theta_dot.knee,
          q.tau_m.hip,   q.tau_m.knee,  q.tau_r.hip,   q.tau_r.knee,    q.tau_int.hip,
          q.tau_int.knee, b.gravity.hip, b.gravity.knee, b.buoyancy.hip, b.buoyancy.knee,
          b.drag.hip,    b.drag.knee,   trace.grf[i]};
}

}  // namespace

void save_trace_csv(const SimTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace file: " + path);
  out << kTraceCsvHeader << '\n';
  std::string line;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    line.clear();
    const auto vals = row_values(trace, i);
    for (int c = 0; c < kColumnCount; ++c) {
      if (c) line.push_back(',');
      append_number(line, vals[c]);
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw IoError("write failed: " + path);
}

void save_trace_sidecar(const SimTrace& trace, const std::string& path) {
  nlohmann::json j;
  j["tool_version"] = kVersion;
  j["environment"] = trace.environment;
  j["dt"] = trace.dt;
  j["cycle_duration"] = trace.cycle_duration;
  j["samples"] = trace.size();
  j["seed"] = trace.seed;
  j["warnings"] = trace.warnings;
  if (!trace.config_echo.empty()) {
    j["config"] = nlohmann::json::parse(trace.config_echo);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write sidecar file: " + path);
  out << j.dump(2) << '\n';
}

SimTrace load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceCsvHeader) {
    throw ValidationError(path + ": unexpected trace header '" + line + "'");
  }

  SimTrace trace;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<double, kColumnCount> v{};
    std::istringstream ss(line);
    std::string field;
    int c = 0;
    while (std::getline(ss, field, ',')) {
      if (c >= kColumnCount) break;
      try {
        v[c] = std::stod(field);
      } catch (const std::exception&) {
        throw ValidationError(path + " line " + std::to_string(line_no) +
                              ": cannot parse value '" + field + "'");
      }
      ++c;
    }
    if (c != kColumnCount) {
      throw ValidationError(path + " line " + std::to_string(line_no) + ": expected " +
                            std::to_string(kColumnCount) + " columns, got " + std::to_string(c));
    }
    trace.t.push_back(v[0]);
    JointState s;
    s.theta = {v[1], v[2]};
    s.theta_dot = {v[3], v[4]};
    trace.states.push_back(s);
    ControlTorques q;
    q.tau_m = {v[5], v[6]};
    q.tau_r = {v[7], v[8]};
    q.tau_int = {v[9], v[10]};
    trace.torques.push_back(q);
    TorqueBreakdown b;
    b.gravity = {v[11], v[12]};
    b.buoyancy = {v[13], v[14]};
    b.drag = {v[15], v[16]};
    b.total = b.gravity + b.buoyancy + b.drag;
    trace.breakdown.push_back(b);
    trace.grf.push_back(v[17]);
  }
  if (trace.size() < 2) throw ValidationError(path + ": trace has fewer than 2 samples");
  trace.dt = trace.t[1] - trace.t[0];
  trace.cycle_duration = trace.dt * static_cast<double>(trace.size());

  const std::string sidecar = path + ".meta.json";
  if (std::ifstream meta(sidecar); meta) {
    try {
      nlohmann::json j = nlohmann::json::parse(meta);
      trace.environment = j.value("environment", "");
      trace.cycle_duration = j.value("cycle_duration", trace.cycle_duration);
      trace.dt = j.value("dt", trace.dt);
      trace.seed = j.value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception&) {
      trace.warnings.push_back("unreadable sidecar: " + sidecar);
    }
  }
  return trace;
}

std::vector<std::string> trace_column_names() {
  std::vector<std::string> names;
  std::istringstream ss(kTraceCsvHeader);
  std::string field;
  while (std::getline(ss, field, ',')) names.push_back(field);
  return names;
}

std::vector<double> trace_column(const SimTrace& trace, const std::string& name) {
  const auto names = trace_column_names();
  int idx = -1;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) idx = static_cast<int>(i);
  }
  if (idx < 0) throw ValidationError("unknown trace column '" + name + "'");
  std::vector<double> out(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) out[i] = row_values(trace, i)[idx];
  return out;
}

}  // namespace exoverse
