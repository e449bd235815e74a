#include "awaken/pattern.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace awaken {

namespace {

struct AxisEstimate {
  double centre, spread, mag;
};

AxisEstimate estimate_axis(const std::vector<double>& marginal) {
  const std::size_t n = marginal.size();
  const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
  std::complex<double> f1{0, 0}, f2{0, 0};
  for (std::size_t x = 0; x < n; ++x) {
    f1 += marginal[x] * std::polar(1.0, w * static_cast<double>(x));
    f2 += marginal[x] * std::polar(1.0, 2.0 * w * static_cast<double>(x));
  }
  const double m1 = std::abs(f1);
  const double m2 = std::abs(f2);
  double centre = 0.0;
  if (m1 > 0) {
    centre = std::arg(f1) / w;
    if (centre < 0) centre += static_cast<double>(n);
  }
  // |F_k| of a periodic Gaussian decays as exp(-(k w sigma)^2 / 2).
  const double cap = static_cast<double>(n) / 2.0;
  double spread = 0.0;
  if (m1 > 0 && n >= 5) {
    if (m2 <= m1 * 1e-300) {
      spread = cap;
    } else if (m1 > m2) {
      spread = std::min(cap, std::sqrt(2.0 * std::log(m1 / m2) / 3.0) / w);
    }
  }
  return {centre, spread, m1};
}

}  // namespace

double wrap_delta(double d, double n) {
  d = std::fmod(d, n);
  if (d >= n / 2) d -= n;
  if (d < -n / 2) d += n;
  return d;
}

PatternEstimate estimate_pattern(std::span<const double> frame, std::size_t channels, std::size_t height,
                                 std::size_t width) {
  std::vector<double> mx(width, 0.0), my(height, 0.0);
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t x = 0; x < width; ++x) {
        const double v = frame[(c * height + y) * width + x];
        mx[x] += v;
        my[y] += v;
      }
  const auto ex = estimate_axis(mx);
  const auto ey = estimate_axis(my);
  return {ex.centre, ey.centre, ex.spread, ey.spread, ex.mag, ey.mag};
}

PatternEstimate estimate_pattern(const FrameLatent& frame) {
  return estimate_pattern(frame.values(), frame.channels(), frame.height(), frame.width());
}

}  // namespace awaken
