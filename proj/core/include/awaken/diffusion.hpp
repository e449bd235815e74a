#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>

#include "awaken/latent.hpp"
#include "awaken/schedule.hpp"

namespace awaken {

// Conditional noise predictor eps_theta(z_t, c, t).
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual VideoLatent predict_noise(const VideoLatent& z_t, const Condition& cond, int t) const = 0;
};

// Forwards to another denoiser and counts calls. Thread-safe.
class CountingDenoiser final : public Denoiser {
 public:
  explicit CountingDenoiser(const Denoiser& inner) : inner_(inner) {}
  VideoLatent predict_noise(const VideoLatent& z_t, const Condition& cond, int t) const override;
  std::size_t calls() const noexcept { return calls_.load(); }
  void reset() noexcept { calls_ = 0; }

 private:
  const Denoiser& inner_;
  mutable std::atomic<std::size_t> calls_{0};
};

// z_t = sqrt(abar_t) z0 + sqrt(1 - abar_t) eps, for 1 <= t <= T.
VideoLatent forward_noise(const VideoLatent& z0, int t, const VideoLatent& eps, const NoiseSchedule& sched);

// Same contract as forward_noise; used when re-noising a fused latent.
VideoLatent noise_to_level(const VideoLatent& z0, int t, const VideoLatent& eps, const NoiseSchedule& sched);

// Estimate of z0 implied by a noise prediction at level t.
VideoLatent predict_x0(const VideoLatent& z_t, const VideoLatent& eps_hat, int t, const NoiseSchedule& sched);

VideoLatent replicate_static(const FrameLatent& frame, std::size_t frames);

struct ReverseOptions {
  // Drop the posterior variance term (DDIM eta = 0 style mean chain).
  bool deterministic = false;
};

// Iterates t_start..1 with the DDPM posterior update; t_start = 0 returns z_start.
VideoLatent reverse_sample(const VideoLatent& z_start, int t_start, const Condition& cond,
                           const Denoiser& denoiser, const NoiseSchedule& sched, std::uint64_t seed,
                           ReverseOptions options = {});

}  // namespace awaken
