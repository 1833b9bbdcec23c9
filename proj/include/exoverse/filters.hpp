#pragma once

#include <span>
#include <vector>

namespace exoverse {

/// Direct-form-II-transposed biquad section, normalized so a0 = 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

/// Butterworth designs via bilinear transform with frequency prewarping.
/// Order must be even; the cascade has order/2 sections.
std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double sample_rate);
std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz, double sample_rate);

std::vector<double> filter(const std::vector<Biquad>& sections, std::span<const double> x);

/// Zero-phase forward-backward filtering with odd-reflection edge padding.
std::vector<double> filtfilt(const std::vector<Biquad>& sections, std::span<const double> x,
                             int pad_len);

}  // namespace exoverse
