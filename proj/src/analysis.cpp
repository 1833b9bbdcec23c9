#include "exoverse/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "exoverse/filters.hpp"

namespace exoverse {

double rms(std::span<const double> x) {
  if (x.empty()) throw ValidationError("rms of an empty series");
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

std::array<RmsRow, 2> rms_components(const SimTrace& trace, std::optional<GcWindow> window) {
  if (trace.size() == 0) throw ValidationError("rms_components: empty trace");
  const GcWindow w = window.value_or(GcWindow{});
  if (!(w.begin < w.end)) throw ValidationError("rms_components: empty gait-cycle window");

  double acc[2][3] = {};
  std::size_t count = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double gc = trace.gc_percent(i);
    if (gc < w.begin || gc >= w.end) continue;
    ++count;
    const auto& b = trace.breakdown[i];
    for (int j = 0; j < 2; ++j) {
      acc[j][0] += b.gravity[j] * b.gravity[j];
      acc[j][1] += b.buoyancy[j] * b.buoyancy[j];
      acc[j][2] += b.drag[j] * b.drag[j];
    }
  }
  if (count == 0) throw ValidationError("rms_components: window selects no samples");

  std::array<RmsRow, 2> rows;
  for (int j = 0; j < 2; ++j) {
    rows[j].environment = trace.environment;
    rows[j].joint = j == 0 ? "hip" : "knee";
    rows[j].gravity = std::sqrt(acc[j][0] / static_cast<double>(count));
    rows[j].buoyancy = std::sqrt(acc[j][1] / static_cast<double>(count));
    rows[j].drag = std::sqrt(acc[j][2] / static_cast<double>(count));
  }
  return rows;
}

std::string rms_table_text(const RmsTable& table) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-6s %-16s %10s %10s %10s %12s\n", "joint", "environment",
                "gravity", "buoyancy", "drag", "buoy/grav");
  out << buf;
  for (const auto& r : table) {
    const double ratio = r.gravity > 0.0 ? r.buoyancy / r.gravity : 0.0;
    std::snprintf(buf, sizeof(buf), "%-6s %-16s %10.3f %10.3f %10.3f %12.4f\n", r.joint.c_str(),
                  r.environment.c_str(), r.gravity, r.buoyancy, r.drag, ratio);
    out << buf;
  }
  return out.str();
}

std::string rms_table_csv(const RmsTable& table) {
  std::ostringstream out;
  out << "joint,environment,gravity_rms,buoyancy_rms,drag_rms,buoy_grav_ratio\n";
  char buf[160];
  for (const auto& r : table) {
    const double ratio = r.gravity > 0.0 ? r.buoyancy / r.gravity : 0.0;
    std::snprintf(buf, sizeof(buf), "%s,%s,%.10g,%.10g,%.10g,%.10g\n", r.joint.c_str(),
                  r.environment.c_str(), r.gravity, r.buoyancy, r.drag, ratio);
    out << buf;
  }
  return out.str();
}

std::string rms_table_json(const RmsTable& table) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : table) {
    arr.push_back({{"joint", r.joint},
                   {"environment", r.environment},
                   {"gravity_rms", r.gravity},
                   {"buoyancy_rms", r.buoyancy},
                   {"drag_rms", r.drag},
                   {"buoy_grav_ratio", r.gravity > 0.0 ? r.buoyancy / r.gravity : 0.0}});
  }
  return arr.dump(2) + "\n";
}

double pearson_r(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("pearson_r: series lengths differ");
  const auto n = static_cast<double>(a.size());
  if (a.size() < 2) throw ValidationError("pearson_r: need at least 2 samples");

  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw ValidationError("pearson_r: undefined for a zero-variance series");
  }
  return sab / std::sqrt(saa * sbb);
}

void validate(const EnvelopeParams& params) {
  if (!(params.sample_rate > 0.0)) throw ValidationError("sample rate must be positive");
  if (!(params.band_low > 0.0 && params.band_low < params.band_high &&
        params.band_high < params.sample_rate / 2.0)) {
    throw ValidationError("band edges must satisfy 0 < low < high < sample_rate/2");
  }
  if (!(params.low_pass > 0.0 && params.low_pass < params.sample_rate / 2.0)) {
    throw ValidationError("lowpass cutoff must lie in (0, sample_rate/2)");
  }
}

std::vector<double> emg_envelope(std::span<const double> raw, const EnvelopeParams& params) {
  validate(params);
  // warm-up bound: three times the slowest filter time constant
  const double tau = 1.0 / (2.0 * std::numbers::pi * params.low_pass);
  const auto min_len = static_cast<std::size_t>(std::ceil(3.0 * tau * params.sample_rate));
  if (raw.size() < min_len) {
    throw ValidationError("emg_envelope: input shorter than the filter warm-up (" +
                          std::to_string(min_len) + " samples)");
  }

  // bandpass realized as a highpass/lowpass cascade, both zero-phase
  const auto hp = butterworth_highpass(params.band_order, params.band_low, params.sample_rate);
  const auto lp = butterworth_lowpass(params.band_order, params.band_high, params.sample_rate);
  const int band_pad =
      std::min<int>(static_cast<int>(raw.size()) - 1,
                    static_cast<int>(3.0 * params.sample_rate / params.band_low));
  std::vector<double> y = filtfilt(hp, raw, band_pad);
  y = filtfilt(lp, y, band_pad);

  for (double& v : y) v = std::abs(v);

  const auto env_lp = butterworth_lowpass(params.low_order, params.low_pass, params.sample_rate);
  const int env_pad = std::min<int>(static_cast<int>(raw.size()) - 1,
                                    static_cast<int>(3.0 * params.sample_rate / params.low_pass));
  y = filtfilt(env_lp, y, env_pad);

  for (double& v : y) v = std::max(v, 0.0);  // clamp zero-phase undershoot
  return y;
}

PhaseStats phase_average(const SimTrace& trace, const std::string& column, int n_bins) {
  if (n_bins < 2) throw ValidationError("phase_average: need at least 2 bins");
  const std::vector<double> values = trace_column(trace, column);
  if (values.empty()) throw ValidationError("phase_average: empty trace");

  // collapse each (cycle, bin) to its mean first; the spread reported per bin
  // is the population std across cycles
  const auto n_cycles = static_cast<std::size_t>(
      std::ceil(trace.size() * trace.dt / trace.cycle_duration - 1e-9));
  std::vector<std::vector<double>> sum(n_bins, std::vector<double>(n_cycles, 0.0));
  std::vector<std::vector<std::size_t>> count(n_bins, std::vector<std::size_t>(n_cycles, 0));

  for (std::size_t i = 0; i < values.size(); ++i) {
    int bin = static_cast<int>(trace.gc_percent(i) / 100.0 * n_bins);
    bin = std::clamp(bin, 0, n_bins - 1);
    auto cycle = static_cast<std::size_t>(trace.t[i] / trace.cycle_duration + 1e-9);
    cycle = std::min(cycle, n_cycles - 1);
    sum[bin][cycle] += values[i];
    ++count[bin][cycle];
  }

  PhaseStats stats;
  stats.gc_percent.resize(n_bins);
  stats.mean.assign(n_bins, 0.0);
  stats.stddev.assign(n_bins, 0.0);
  for (int b = 0; b < n_bins; ++b) {
    stats.gc_percent[b] = (b + 0.5) * 100.0 / n_bins;
    double acc = 0.0, acc_sq = 0.0;
    std::size_t n = 0;
    for (std::size_t c = 0; c < n_cycles; ++c) {
      if (count[b][c] == 0) continue;
      const double cycle_mean = sum[b][c] / static_cast<double>(count[b][c]);
      acc += cycle_mean;
      acc_sq += cycle_mean * cycle_mean;
      ++n;
    }
    if (n == 0) continue;
    stats.mean[b] = acc / static_cast<double>(n);
    const double var = std::max(0.0, acc_sq / static_cast<double>(n) - stats.mean[b] * stats.mean[b]);
    stats.stddev[b] = std::sqrt(var);
  }
  stats.single_cycle = trace.size() * trace.dt < 2.0 * trace.cycle_duration - 0.5 * trace.dt;
  return stats;
}

}  // namespace exoverse
