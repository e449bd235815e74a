#include "awaken/diffusion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "awaken/rng.hpp"

namespace awaken {

VideoLatent CountingDenoiser::predict_noise(const VideoLatent& z_t, const Condition& cond, int t) const {
  ++calls_;
  return inner_.predict_noise(z_t, cond, t);
}

VideoLatent forward_noise(const VideoLatent& z0, int t, const VideoLatent& eps, const NoiseSchedule& sched) {
  require_same_shape(z0.tensor(), eps.tensor(), "forward_noise");
  require_step(sched, t, 1, "forward_noise");
  const double a = sched.alpha_bar(t);
  const double ca = std::sqrt(a);
  const double ce = std::sqrt(1.0 - a);
  Tensor out(z0.shape());
  auto x = z0.values();
  auto e = eps.values();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = ca * x[i] + ce * e[i];
  return VideoLatent(std::move(out));
}

VideoLatent noise_to_level(const VideoLatent& z0, int t, const VideoLatent& eps, const NoiseSchedule& sched) {
  return forward_noise(z0, t, eps, sched);
}

VideoLatent predict_x0(const VideoLatent& z_t, const VideoLatent& eps_hat, int t, const NoiseSchedule& sched) {
  require_same_shape(z_t.tensor(), eps_hat.tensor(), "predict_x0");
  require_step(sched, t, 1, "predict_x0");
  const double a = sched.alpha_bar(t);
  const double ia = 1.0 / std::sqrt(a);
  const double ce = std::sqrt(1.0 - a);
  Tensor out(z_t.shape());
  auto z = z_t.values();
  auto e = eps_hat.values();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = (z[i] - ce * e[i]) * ia;
  return VideoLatent(std::move(out));
}

VideoLatent replicate_static(const FrameLatent& frame, std::size_t frames) {
  if (frames == 0) throw std::invalid_argument("replicate_static: frame count must be >= 1");
  VideoLatent v(frames, frame.channels(), frame.height(), frame.width());
  for (std::size_t l = 0; l < frames; ++l) v.set_frame(l, frame);
  return v;
}

VideoLatent reverse_sample(const VideoLatent& z_start, int t_start, const Condition& cond,
                           const Denoiser& denoiser, const NoiseSchedule& sched, std::uint64_t seed,
                           ReverseOptions options) {
  require_step(sched, t_start, 0, "reverse_sample");
  CounterRng rng(seed, "reverse");
  Tensor z = z_start.tensor();
  for (int t = t_start; t >= 1; --t) {
    const VideoLatent zt(z);
    const VideoLatent eps = denoiser.predict_noise(zt, cond, t);
    if (eps.shape() != zt.shape()) {
      throw std::invalid_argument("reverse_sample: denoiser returned " + shape_string(eps.shape()) +
                                  " for input " + shape_string(zt.shape()));
    }
    const double a = sched.alpha_bar(t);
    const double a_prev = sched.alpha_bar(t - 1);
    const double b = sched.beta(t);
    const double c_x0 = std::sqrt(a_prev) * b / (1.0 - a);
    const double c_zt = std::sqrt(1.0 - b) * (1.0 - a_prev) / (1.0 - a);
    const double ia = 1.0 / std::sqrt(a);
    const double ce = std::sqrt(1.0 - a);
    const bool add_noise = t > 1 && !options.deterministic;
    const double sigma = add_noise ? std::sqrt((1.0 - a_prev) / (1.0 - a) * b) : 0.0;
    auto zv = z.values();
    auto ev = eps.values();
    for (std::size_t i = 0; i < zv.size(); ++i) {
      const double x0 = (zv[i] - ce * ev[i]) * ia;
      zv[i] = c_x0 * x0 + c_zt * zv[i];
      if (add_noise) zv[i] += sigma * rng.normal();
    }
    if (!all_finite(zv)) {
      throw std::domain_error("reverse_sample: non-finite latent at t=" + std::to_string(t));
    }
  }
  return VideoLatent(std::move(z));
}

}  // namespace awaken
