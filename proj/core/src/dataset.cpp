#include "awaken/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "awaken/rng.hpp"

namespace awaken {

std::string_view pattern_shape_name(PatternShape s) { return s == PatternShape::Blob ? "blob" : "square"; }

PatternShape parse_pattern_shape(std::string_view name) {
  if (name == "blob") return PatternShape::Blob;
  if (name == "square") return PatternShape::Square;
  throw std::invalid_argument("unknown pattern shape '" + std::string(name) + "'");
}

void validate(const DatasetParams& p) {
  if (p.channels == 0 || p.height == 0 || p.width == 0) throw std::invalid_argument("dataset grid dims must be positive");
  if (p.frames < 2) throw std::invalid_argument("dataset.frames must be >= 2");
  if (!(p.pattern_size > 0)) throw std::invalid_argument("dataset.pattern_size must be positive");
  if (!(p.velocity_min >= 0) || p.velocity_max < p.velocity_min) {
    throw std::invalid_argument("dataset velocity range must satisfy 0 <= min <= max");
  }
  if (p.motions.empty()) throw std::invalid_argument("dataset.motions must not be empty");
}

namespace {

// Gaussian summed over periodic images, scaled so the peak of a centred
// profile is 1. Sums over images keep the profile smooth on the torus.
double periodic_gaussian(double d, double sigma, double n) {
  double v = 0.0, peak = 0.0;
  for (int k = -3; k <= 3; ++k) {
    const double x = d + k * n;
    v += std::exp(-x * x / (2 * sigma * sigma));
    const double y = k * n;
    peak += std::exp(-y * y / (2 * sigma * sigma));
  }
  return v / peak;
}

double wrapped_offset(double x, double c, double n) {
  double d = std::fmod(x - c, n);
  if (d < -n / 2) d += n;
  if (d >= n / 2) d -= n;
  return d;
}

// Fraction of the unit cell around a pixel centre covered by [c - s, c + s].
double coverage(double d, double s) {
  return std::clamp(std::min(d + 0.5, s) - std::max(d - 0.5, -s), 0.0, 1.0);
}

}  // namespace

FrameLatent render_pattern(const DatasetParams& p, double cx, double cy, double size) {
  const double w = static_cast<double>(p.width);
  const double h = static_cast<double>(p.height);
  std::vector<double> gx(p.width), gy(p.height);
  for (std::size_t x = 0; x < p.width; ++x) {
    const double d = wrapped_offset(static_cast<double>(x), cx, w);
    gx[x] = p.shape == PatternShape::Blob ? periodic_gaussian(d, size, w) : coverage(d, size);
  }
  for (std::size_t y = 0; y < p.height; ++y) {
    const double d = wrapped_offset(static_cast<double>(y), cy, h);
    gy[y] = p.shape == PatternShape::Blob ? periodic_gaussian(d, size, h) : coverage(d, size);
  }
  FrameLatent f(p.channels, p.height, p.width);
  for (std::size_t c = 0; c < p.channels; ++c)
    for (std::size_t y = 0; y < p.height; ++y)
      for (std::size_t x = 0; x < p.width; ++x) f.at(c, y, x) = 2.0 * std::clamp(gx[x] * gy[y], 0.0, 1.0) - 1.0;
  return f;
}

VideoLatent render_video(const DatasetParams& p, const PatternSpec& spec) {
  const MotionVector m = canonical_motion(spec.motion);
  VideoLatent v(p.frames, p.channels, p.height, p.width);
  for (std::size_t l = 0; l < p.frames; ++l) {
    const double s = static_cast<double>(l) * spec.velocity;
    v.set_frame(l, render_pattern(p, spec.x0 + m.dx * s, spec.y0 + m.dy * s, spec.size + m.ds * s));
  }
  return v;
}

MotionSample generate_sample(const DatasetParams& p, std::uint64_t seed, std::size_t index) {
  CounterRng rng = CounterRng(seed, "dataset").derive(static_cast<std::uint64_t>(index));
  PatternSpec spec;
  spec.motion = p.motions[rng.below(p.motions.size())];
  spec.x0 = rng.uniform(0.0, static_cast<double>(p.width));
  spec.y0 = rng.uniform(0.0, static_cast<double>(p.height));
  spec.size = p.pattern_size;
  spec.velocity = rng.uniform(p.velocity_min, p.velocity_max);
  MotionSample s{render_video(p, spec), {}, spec};
  s.cond = Condition{s.video.frame_latent(0), spec.motion};
  return s;
}

MotionDataset generate_dataset(std::size_t n, const DatasetParams& p, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate_dataset: n must be >= 1");
  validate(p);
  MotionDataset ds{p, {}};
  ds.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ds.samples.push_back(generate_sample(p, seed, i));
  return ds;
}

}  // namespace awaken
