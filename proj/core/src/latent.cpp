#include "awaken/latent.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace awaken {

namespace {
constexpr std::array<std::string_view, kMotionCount> kNames = {"static", "right", "left", "up", "down", "grow"};
}

std::string_view motion_name(Motion m) { return kNames.at(static_cast<std::size_t>(m)); }

Motion parse_motion(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (int i = 0; i < kMotionCount; ++i)
    if (kNames[static_cast<std::size_t>(i)] == lower) return static_cast<Motion>(i);
  throw std::invalid_argument("unknown motion label '" + std::string(name) + "'");
}

Motion motion_from_index(int index) {
  if (index < 0 || index >= kMotionCount) {
    throw std::invalid_argument("motion label " + std::to_string(index) + " outside vocabulary [0, " +
                                std::to_string(kMotionCount - 1) + "]");
  }
  return static_cast<Motion>(index);
}

MotionVector canonical_motion(Motion m) {
  switch (m) {
    case Motion::Static: return {0, 0, 0};
    case Motion::Right: return {1, 0, 0};
    case Motion::Left: return {-1, 0, 0};
    case Motion::Up: return {0, -1, 0};
    case Motion::Down: return {0, 1, 0};
    case Motion::Grow: return {0, 0, 1};
  }
  throw std::invalid_argument("invalid motion");
}

FrameLatent::FrameLatent(std::size_t channels, std::size_t height, std::size_t width, double fill)
    : grid_(Shape{channels, height, width}, fill) {
  if (channels == 0 || height == 0 || width == 0) throw std::invalid_argument("frame latent dims must be positive");
}

FrameLatent::FrameLatent(Tensor grid) : grid_(std::move(grid)) {
  if (grid_.rank() != 3) {
    throw std::invalid_argument("frame latent must be rank 3 (CxHxW), got " + shape_string(grid_.shape()));
  }
  if (grid_.size() == 0) throw std::invalid_argument("frame latent dims must be positive");
  require_finite(grid_, "frame latent");
}

double FrameLatent::at(std::size_t c, std::size_t y, std::size_t x) const {
  return grid_[(c * height() + y) * width() + x];
}

double& FrameLatent::at(std::size_t c, std::size_t y, std::size_t x) {
  return grid_[(c * height() + y) * width() + x];
}

VideoLatent::VideoLatent(std::size_t frames, std::size_t channels, std::size_t height, std::size_t width,
                         double fill)
    : data_(Shape{frames, channels, height, width}, fill) {
  if (frames == 0) throw std::invalid_argument("video latent needs at least one frame");
  if (channels == 0 || height == 0 || width == 0) throw std::invalid_argument("video latent dims must be positive");
}

VideoLatent::VideoLatent(Tensor stack) : data_(std::move(stack)) {
  if (data_.rank() != 4) {
    throw std::invalid_argument("video latent must be rank 4 (LxCxHxW), got " + shape_string(data_.shape()));
  }
  if (data_.dim(0) == 0) throw std::invalid_argument("video latent needs at least one frame");
  if (data_.size() == 0) throw std::invalid_argument("video latent dims must be positive");
  require_finite(data_, "video latent");
}

Shape VideoLatent::frame_shape() const { return {channels(), height(), width()}; }

FrameLatent VideoLatent::frame_latent(std::size_t l) const {
  auto s = frame(l);
  return FrameLatent(Tensor(frame_shape(), std::vector<double>(s.begin(), s.end())));
}

void VideoLatent::set_frame(std::size_t l, const FrameLatent& f) {
  require_frame_shape(*this, f, "set_frame");
  auto dst = frame(l);
  std::copy(f.values().begin(), f.values().end(), dst.begin());
}

void require_frame_shape(const VideoLatent& v, const FrameLatent& f, std::string_view what) {
  if (v.frame_shape() != f.shape()) {
    throw std::invalid_argument(std::string(what) + ": frame shape " + shape_string(f.shape()) +
                                " does not match video frame shape " + shape_string(v.frame_shape()));
  }
}

}  // namespace awaken
