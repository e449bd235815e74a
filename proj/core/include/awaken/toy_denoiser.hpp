#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "awaken/diffusion.hpp"

namespace awaken {

struct VideoGeometry {
  std::size_t frames = 16;
  std::size_t channels = 1;
  std::size_t height = 16;
  std::size_t width = 16;

  std::size_t frame_size() const noexcept { return channels * height * width; }
  Shape video_shape() const { return {frames, channels, height, width}; }
  Shape frame_shape() const { return {channels, height, width}; }
  friend bool operator==(const VideoGeometry&, const VideoGeometry&) = default;
};

struct ToyDenoiserConfig {
  std::size_t hidden = 128;
  std::size_t time_embedding = 16;  // must be even
  double sigma_data = 0.25;         // prior scale of the residual around the conditioning image
  int lowpass_modes = 4;            // Fourier modes kept per spatial axis; < 0 keeps all
};

// One training tuple: clean video, its condition, timestep and injected noise.
struct TrainingExample {
  const VideoLatent* z0 = nullptr;
  const Condition* cond = nullptr;
  int t = 1;
  Tensor eps;
};

// eps_theta built around an x0 estimate anchored at the conditioning image:
//   ztc = z_t / sqrt(abar) - cond
//   F0  = W2 silu(W1 [c_in ztc_l; cond; temb(t); onehot(label)] + b1) + b2   per frame
//   r   = M P (c_skip ztc + c_out F0),  M = I + A (I - 11^T / L)
//   eps = (ztc - r) / sigma,  sigma^2 = (1 - abar) / abar
// P is a fixed separable spatial low-pass projector. W2, b2 and A start at zero,
// so an untrained model predicts x0 = cond + c_skip P ztc.
class ToyDenoiser final : public Denoiser {
 public:
  struct ParameterBlock {
    std::string name;
    Shape shape;
    std::size_t offset = 0;
  };

  ToyDenoiser(VideoGeometry geometry, NoiseSchedule schedule, ToyDenoiserConfig config = {});

  void initialize(std::uint64_t seed);

  VideoLatent predict_noise(const VideoLatent& z_t, const Condition& cond, int t) const override;

  // Mean over examples of the summed squared error ||eps_hat - eps||^2.
  double loss(std::span<const TrainingExample> batch) const;
  // Same loss; writes d loss / d parameters into `grad` (resized as needed).
  double loss_and_gradient(std::span<const TrainingExample> batch, std::vector<double>& grad) const;

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }
  std::size_t parameter_count() const noexcept { return params_.size(); }
  const std::vector<ParameterBlock>& blocks() const noexcept { return blocks_; }
  Tensor block_tensor(const std::string& name) const;
  void set_block(const std::string& name, const Tensor& value);

  const VideoGeometry& geometry() const noexcept { return geometry_; }
  const ToyDenoiserConfig& config() const noexcept { return config_; }
  const NoiseSchedule& schedule() const noexcept { return schedule_; }
  std::size_t input_size() const noexcept { return input_size_; }

 private:
  struct Cache;
  double forward(const VideoLatent& z_t, const Condition& cond, int t, std::span<double> eps_out,
                 Cache* cache) const;
  void backward(const Cache& cache, std::span<const double> d_eps, std::span<double> grad) const;
  void check_inputs(const VideoLatent& z_t, const Condition& cond, int t) const;
  void lowpass(std::span<const double> in, std::span<double> out, std::span<double> scratch) const;
  const ParameterBlock& block(const std::string& name) const;

  VideoGeometry geometry_;
  NoiseSchedule schedule_;
  ToyDenoiserConfig config_;
  std::size_t input_size_ = 0;
  std::vector<double> params_;
  std::vector<ParameterBlock> blocks_;
  std::size_t off_w1_ = 0, off_b1_ = 0, off_w2_ = 0, off_b2_ = 0, off_a_ = 0;
  std::vector<double> proj_h_;  // H x H
  std::vector<double> proj_w_;  // W x W
  bool lowpass_identity_ = false;
};

std::vector<double> timestep_embedding(int t, std::size_t dim);

// Orthogonal projector onto Fourier modes |k| <= modes on a periodic axis of length n.
std::vector<double> fourier_lowpass_projector(std::size_t n, int modes);

}  // namespace awaken
