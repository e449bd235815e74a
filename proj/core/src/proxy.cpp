#include "awaken/proxy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "awaken/ltn1.hpp"
#include "awaken/pattern.hpp"
#include "awaken/pgm.hpp"

namespace awaken {

namespace {

std::size_t wrap_index(long i, std::size_t n) {
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

FrameLatent roll(const FrameLatent& f, long dx, long dy) {
  FrameLatent out(f.channels(), f.height(), f.width());
  for (std::size_t c = 0; c < f.channels(); ++c)
    for (std::size_t y = 0; y < f.height(); ++y)
      for (std::size_t x = 0; x < f.width(); ++x)
        out.at(c, wrap_index(static_cast<long>(y) + dy, f.height()), wrap_index(static_cast<long>(x) + dx, f.width())) =
            f.at(c, y, x);
  return out;
}

// Radial dilation about the circular centroid, bilinear on the torus.
FrameLatent dilate(const FrameLatent& f, double amount) {
  const PatternEstimate e = estimate_pattern(f);
  const double r = 0.5 * (e.spread_x + e.spread_y);
  if (amount == 0.0 || !(r > 0.0)) return f;
  const double scale = (r + amount) / r;
  const double w = static_cast<double>(f.width());
  const double h = static_cast<double>(f.height());
  FrameLatent out(f.channels(), f.height(), f.width());
  for (std::size_t y = 0; y < f.height(); ++y)
    for (std::size_t x = 0; x < f.width(); ++x) {
      const double sx = e.cx + wrap_delta(static_cast<double>(x) - e.cx, w) / scale;
      const double sy = e.cy + wrap_delta(static_cast<double>(y) - e.cy, h) / scale;
      const double x0 = std::floor(sx), y0 = std::floor(sy);
      const double fx = sx - x0, fy = sy - y0;
      const auto xi = static_cast<long>(x0), yi = static_cast<long>(y0);
      for (std::size_t c = 0; c < f.channels(); ++c) {
        auto px = [&](long yy, long xx) { return f.at(c, wrap_index(yy, f.height()), wrap_index(xx, f.width())); };
        out.at(c, y, x) = (1 - fy) * ((1 - fx) * px(yi, xi) + fx * px(yi, xi + 1)) +
                          fy * ((1 - fx) * px(yi + 1, xi) + fx * px(yi + 1, xi + 1));
      }
    }
  return out;
}

FrameLatent from_tensor(Tensor t, const std::filesystem::path& path) {
  if (t.rank() == 2) t = t.reshaped({1, t.dim(0), t.dim(1)});
  if (t.rank() != 3) {
    throw FileFormatError(path.string() + ": expected an HxW or CxHxW tensor, got " + shape_string(t.shape()));
  }
  return FrameLatent(std::move(t));
}

}  // namespace

void validate(const SyntheticProviderParams& p) {
  if (!(p.motion_hint_strength >= 0.0 && p.motion_hint_strength <= 1.0)) {
    throw std::invalid_argument("proxy.motion_hint_strength must lie in [0, 1]");
  }
  if (!(p.max_displacement >= 0.0)) throw std::invalid_argument("proxy.max_displacement must be >= 0");
  if (!(p.sharpen >= 1.0)) throw std::invalid_argument("proxy.sharpen must be >= 1");
}

FrameLatent synthesize_proxy(const FrameLatent& image, Motion motion, const SyntheticProviderParams& params) {
  validate(params);
  const MotionVector m = canonical_motion(motion_from_index(static_cast<int>(motion)));
  const long d = static_cast<long>(std::floor(params.motion_hint_strength * params.max_displacement + 0.5));
  FrameLatent out = motion == Motion::Grow ? dilate(image, static_cast<double>(d))
                                           : roll(image, d * static_cast<long>(m.dx), d * static_cast<long>(m.dy));
  if (params.motion_hint_strength > 0.0) {
    for (double& v : out.values()) v = std::clamp(params.sharpen * v, -1.0, 1.0);
  }
  return out;
}

FrameLatent load_proxy(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw FileFormatError(path.string() + ": proxy file not found");
  if (has_ltn1_magic(path)) return from_tensor(read_ltn1(path), path);
  return read_pgm(path);
}

FrameLatent load_proxy(const std::filesystem::path& path, const Shape& expected) {
  FrameLatent f = load_proxy(path);
  if (f.shape() != expected) {
    throw std::invalid_argument(path.string() + ": proxy shape " + shape_string(f.shape()) +
                                " does not match input image shape " + shape_string(expected));
  }
  return f;
}

SyntheticProvider::SyntheticProvider(SyntheticProviderParams params) : params_(params) { validate(params_); }

FrameLatent SyntheticProvider::proxy_for(const FrameLatent& image, const Condition& cond) const {
  return synthesize_proxy(image, cond.motion, params_);
}

std::string SyntheticProvider::describe() const {
  return "synthetic(strength=" + std::to_string(params_.motion_hint_strength) + ")";
}

FrameLatent FileProvider::proxy_for(const FrameLatent& image, const Condition&) const {
  return load_proxy(path_, image.shape());
}

std::string FileProvider::describe() const { return "file(" + path_.string() + ")"; }

}  // namespace awaken
