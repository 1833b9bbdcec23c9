#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exoverse/sim.hpp"

namespace exoverse {

/// Gait-cycle window in percent, [begin, end).
struct GcWindow {
  double begin = 0.0;
  double end = 100.0;
};

struct RmsRow {
  std::string environment;
  std::string joint;  // "hip" or "knee"
  double gravity = 0.0;
  double buoyancy = 0.0;
  double drag = 0.0;
};

using RmsTable = std::vector<RmsRow>;

/// RMS of each torque component over the window (hip row, then knee row).
std::array<RmsRow, 2> rms_components(const SimTrace& trace,
                                     std::optional<GcWindow> window = std::nullopt);

std::string rms_table_text(const RmsTable& table);
std::string rms_table_csv(const RmsTable& table);
std::string rms_table_json(const RmsTable& table);

double pearson_r(std::span<const double> a, std::span<const double> b);

/// EMG envelope pipeline: Butterworth bandpass, full-wave rectification,
/// Butterworth lowpass. Both filters are applied forward-backward (zero
/// phase); minor rectification undershoot is clamped at zero.
struct EnvelopeParams {
  double sample_rate = 1000.0;  // Hz
  double band_low = 30.0;       // Hz
  double band_high = 450.0;     // Hz
  int band_order = 4;
  double low_pass = 4.0;  // Hz
  int low_order = 2;
};

void validate(const EnvelopeParams& params);

std::vector<double> emg_envelope(std::span<const double> raw, const EnvelopeParams& params);

struct PhaseStats {
  std::vector<double> gc_percent;  // bin centers
  std::vector<double> mean;
  std::vector<double> stddev;  // population std across cycles
  bool single_cycle = false;
};

/// Per-gait-percent mean and spread of one trace column across cycles.
PhaseStats phase_average(const SimTrace& trace, const std::string& column, int n_bins);

double rms(std::span<const double> x);

}  // namespace exoverse
