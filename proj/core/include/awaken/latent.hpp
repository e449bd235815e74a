#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

#include "awaken/tensor.hpp"

namespace awaken {

enum class Motion : int { Static = 0, Right = 1, Left = 2, Up = 3, Down = 4, Grow = 5 };

inline constexpr int kMotionCount = 6;
inline constexpr std::array<Motion, kMotionCount> kAllMotions = {
    Motion::Static, Motion::Right, Motion::Left, Motion::Up, Motion::Down, Motion::Grow};
inline constexpr std::array<Motion, 5> kMovingMotions = {Motion::Right, Motion::Left, Motion::Up,
                                                         Motion::Down, Motion::Grow};

std::string_view motion_name(Motion m);
Motion parse_motion(std::string_view name);  // case-insensitive
Motion motion_from_index(int index);         // throws outside the vocabulary

// Unit displacement per frame as (dx, dy, dscale); image rows grow downward.
struct MotionVector {
  double dx = 0.0;
  double dy = 0.0;
  double ds = 0.0;
};
MotionVector canonical_motion(Motion m);

class FrameLatent {
 public:
  FrameLatent() = default;
  FrameLatent(std::size_t channels, std::size_t height, std::size_t width, double fill = 0.0);
  explicit FrameLatent(Tensor grid);

  std::size_t channels() const { return grid_.dim(0); }
  std::size_t height() const { return grid_.dim(1); }
  std::size_t width() const { return grid_.dim(2); }
  const Shape& shape() const noexcept { return grid_.shape(); }

  const Tensor& grid() const noexcept { return grid_; }
  Tensor& grid() noexcept { return grid_; }
  std::span<const double> values() const noexcept { return grid_.values(); }
  std::span<double> values() noexcept { return grid_.values(); }

  double at(std::size_t c, std::size_t y, std::size_t x) const;
  double& at(std::size_t c, std::size_t y, std::size_t x);

  friend bool operator==(const FrameLatent&, const FrameLatent&) = default;

 private:
  Tensor grid_;
};

class VideoLatent {
 public:
  VideoLatent() = default;
  VideoLatent(std::size_t frames, std::size_t channels, std::size_t height, std::size_t width,
              double fill = 0.0);
  explicit VideoLatent(Tensor stack);

  std::size_t frames() const { return data_.dim(0); }
  std::size_t channels() const { return data_.dim(1); }
  std::size_t height() const { return data_.dim(2); }
  std::size_t width() const { return data_.dim(3); }
  std::size_t frame_size() const { return data_.slice_size(); }
  Shape frame_shape() const;
  const Shape& shape() const noexcept { return data_.shape(); }

  const Tensor& tensor() const noexcept { return data_; }
  Tensor& tensor() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_.values(); }
  std::span<double> values() noexcept { return data_.values(); }

  std::span<const double> frame(std::size_t l) const { return data_.slice(l); }
  std::span<double> frame(std::size_t l) { return data_.slice(l); }
  FrameLatent frame_latent(std::size_t l) const;
  void set_frame(std::size_t l, const FrameLatent& f);

  friend bool operator==(const VideoLatent&, const VideoLatent&) = default;

 private:
  Tensor data_;
};

// Toy stand-in for (image, prompt) conditioning.
struct Condition {
  FrameLatent image;
  Motion motion = Motion::Static;
};

void require_frame_shape(const VideoLatent& v, const FrameLatent& f, std::string_view what);

}  // namespace awaken
