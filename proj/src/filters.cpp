#include "exoverse/filters.hpp"

#include <cmath>
#include <numbers>

#include "exoverse/errors.hpp"

namespace exoverse {

namespace {

// RBJ cookbook biquads; one section per Butterworth pole pair.
Biquad design_section(double cutoff_hz, double sample_rate, double q, bool highpass) {
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double c = std::cos(w0);
  const double a0 = 1.0 + alpha;

  Biquad s;
  if (highpass) {
    s.b0 = (1.0 + c) / 2.0 / a0;
    s.b1 = -(1.0 + c) / a0;
    s.b2 = (1.0 + c) / 2.0 / a0;
  } else {
    s.b0 = (1.0 - c) / 2.0 / a0;
    s.b1 = (1.0 - c) / a0;
    s.b2 = (1.0 - c) / 2.0 / a0;
  }
  s.a1 = -2.0 * c / a0;
  s.a2 = (1.0 - alpha) / a0;
  return s;
}

std::vector<Biquad> butterworth(int order, double cutoff_hz, double sample_rate, bool highpass) {
  if (order < 2 || order % 2 != 0) {
    throw ValidationError("Butterworth order must be a positive even number");
  }
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate / 2.0)) {
    throw ValidationError("filter cutoff must lie in (0, sample_rate/2)");
  }
  std::vector<Biquad> sections;
  for (int k = 0; k < order / 2; ++k) {
    const double q = 1.0 / (2.0 * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * order)));
    sections.push_back(design_section(cutoff_hz, sample_rate, q, highpass));
  }
  return sections;
}

}  // namespace

std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double sample_rate) {
  return butterworth(order, cutoff_hz, sample_rate, false);
}

std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz, double sample_rate) {
  return butterworth(order, cutoff_hz, sample_rate, true);
}

std::vector<double> filter(const std::vector<Biquad>& sections, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  for (const auto& s : sections) {
    double z1 = 0.0, z2 = 0.0;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> filtfilt(const std::vector<Biquad>& sections, std::span<const double> x,
                             int pad_len) {
  const auto n = static_cast<int>(x.size());
  if (n < 2) throw ValidationError("filtfilt: input too short");
  pad_len = std::min(pad_len, n - 1);
  if (pad_len < 0) pad_len = 0;

  // odd reflection about the endpoints reduces edge transients
  std::vector<double> ext;
  ext.reserve(x.size() + 2 * static_cast<std::size_t>(pad_len));
  for (int i = pad_len; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (int i = 1; i <= pad_len; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  std::vector<double> fwd = filter(sections, ext);
  std::reverse(fwd.begin(), fwd.end());
  std::vector<double> back = filter(sections, fwd);
  std::reverse(back.begin(), back.end());

  return {back.begin() + pad_len, back.begin() + pad_len + n};
}

}  // namespace exoverse
