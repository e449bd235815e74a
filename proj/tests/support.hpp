#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "awaken/diffusion.hpp"
#include "awaken/linalg.hpp"
#include "awaken/rng.hpp"
#include "awaken/toy_denoiser.hpp"

namespace awaken::test {

// Always returns the same noise tensor, so any VSDS residual vanishes.
class FixedNoiseDenoiser final : public Denoiser {
 public:
  explicit FixedNoiseDenoiser(VideoLatent eps) : eps_(std::move(eps)) {}
  VideoLatent predict_noise(const VideoLatent&, const Condition&, int) const override { return eps_; }

 private:
  VideoLatent eps_;
};

// Knows the clean video and reports the noise that maps it to z_t exactly.
class CleanVideoOracle final : public Denoiser {
 public:
  CleanVideoOracle(VideoLatent z0, const NoiseSchedule& sched) : z0_(std::move(z0)), sched_(sched) {}
  VideoLatent predict_noise(const VideoLatent& z_t, const Condition&, int t) const override;

 private:
  VideoLatent z0_;
  const NoiseSchedule& sched_;
};

// Returns the noise registered for the condition image it is called with.
class PerPathOracle final : public Denoiser {
 public:
  void add(const FrameLatent& image, VideoLatent eps) { table_.push_back({image, std::move(eps)}); }
  VideoLatent predict_noise(const VideoLatent&, const Condition& cond, int) const override {
    for (const auto& [img, eps] : table_)
      if (img == cond.image) return eps;
    throw std::logic_error("oracle: unknown condition");
  }

 private:
  std::vector<std::pair<FrameLatent, VideoLatent>> table_;
};

class ZeroDenoiser final : public Denoiser {
 public:
  VideoLatent predict_noise(const VideoLatent& z_t, const Condition&, int) const override {
    return VideoLatent(z_t.frames(), z_t.channels(), z_t.height(), z_t.width());
  }
};

inline VideoLatent random_video(std::uint64_t seed, std::size_t L, std::size_t C, std::size_t H, std::size_t W) {
  CounterRng rng(seed, "test/video");
  return VideoLatent(rng.normal_tensor({L, C, H, W}));
}

inline FrameLatent random_frame(std::uint64_t seed, std::size_t C, std::size_t H, std::size_t W) {
  CounterRng rng(seed, "test/frame");
  return FrameLatent(rng.normal_tensor({C, H, W}));
}

// Rotation about random axes by Gram-Schmidt.
Matrix random_orthogonal(std::size_t d, CounterRng& rng);

// Q diag(v) Q^T.
Matrix conjugate(const Matrix& q, const std::vector<double>& v);

// Monte Carlo W2 between Gaussians N(ma, Q diag(va) Q^T) and N(mb, Q diag(vb) Q^T).
double mc_w2(const std::vector<double>& ma, const std::vector<double>& va, const std::vector<double>& mb,
             const std::vector<double>& vb, const Matrix& q, std::size_t n, std::uint64_t seed);

struct GradientCheck {
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double relative_error = 0.0;
};

// Central differences with step h on the chosen parameters; relative error is
// floored at 1e-6 in the denominator.
std::vector<GradientCheck> check_gradient(ToyDenoiser& m, std::span<const TrainingExample> batch,
                                          const std::vector<std::size_t>& picks, double h = 1e-5);

// `count` parameter indices, at least one from every block.
std::vector<std::size_t> gradient_picks(const ToyDenoiser& m, std::size_t count, std::uint64_t seed);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace awaken::test
