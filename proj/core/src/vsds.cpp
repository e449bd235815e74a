#include "awaken/vsds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <future>
#include <stdexcept>
#include <string>

namespace awaken {

namespace {
std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}
}  // namespace

std::string_view curve_name(CurveKind kind) {
  switch (kind) {
    case CurveKind::LinearDecreasing: return "LD";
    case CurveKind::StepwiseDecreasing: return "SD";
    case CurveKind::StepwiseIncreasing: return "SI";
    case CurveKind::LinearIncreasing: return "LI";
    case CurveKind::Constant: return "constant";
  }
  return "?";
}

CurveKind parse_curve(std::string_view name) {
  const std::string s = lower(name);
  if (s == "ld" || s == "linear_decreasing") return CurveKind::LinearDecreasing;
  if (s == "sd" || s == "stepwise_decreasing") return CurveKind::StepwiseDecreasing;
  if (s == "si" || s == "stepwise_increasing") return CurveKind::StepwiseIncreasing;
  if (s == "li" || s == "linear_increasing") return CurveKind::LinearIncreasing;
  if (s == "constant") return CurveKind::Constant;
  throw std::invalid_argument("unknown weight curve '" + std::string(name) + "'");
}

std::string_view omega_name(OmegaMode mode) {
  return mode == OmegaMode::One ? "one" : "one_minus_alpha_bar";
}

OmegaMode parse_omega(std::string_view name) {
  const std::string s = lower(name);
  if (s == "one") return OmegaMode::One;
  if (s == "one_minus_alpha_bar") return OmegaMode::OneMinusAlphaBar;
  throw std::invalid_argument("unknown omega mode '" + std::string(name) + "'");
}

void validate(const WeightCurve& c) {
  if (!(c.w_lo > 0) || !(c.w_hi >= c.w_lo) || !std::isfinite(c.w_hi)) {
    throw std::invalid_argument("weight curve requires w_hi >= w_lo > 0");
  }
}

void validate(const VsdsConfig& cfg) {
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw std::invalid_argument("vsds.p must lie in (0, 1], got " + std::to_string(cfg.p));
  validate(cfg.curve);
}

double alpha_at(const WeightCurve& c, std::size_t i, std::size_t n) {
  if (n == 0) throw std::invalid_argument("alpha_at: total iterations must be positive");
  if (i >= n) throw std::out_of_range("alpha_at: iteration index out of range");
  const double half = static_cast<double>(n) / 2.0;
  const double frac = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
  switch (c.kind) {
    case CurveKind::StepwiseDecreasing: return static_cast<double>(i) < half ? c.w_hi : c.w_lo;
    case CurveKind::StepwiseIncreasing: return static_cast<double>(i) < half ? c.w_lo : c.w_hi;
    case CurveKind::LinearDecreasing: return c.w_hi + (c.w_lo - c.w_hi) * frac;
    case CurveKind::LinearIncreasing: return c.w_lo + (c.w_hi - c.w_lo) * frac;
    case CurveKind::Constant: return c.w_lo;
  }
  throw std::invalid_argument("alpha_at: invalid curve");
}

double omega_at(OmegaMode mode, const NoiseSchedule& sched, int t) {
  return mode == OmegaMode::One ? 1.0 : 1.0 - sched.alpha_bar(t);
}

int vsds_tau(int steps, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("vsds.p must lie in (0, 1]");
  const int tau = static_cast<int>(std::floor(static_cast<double>(steps) * p + 0.5));
  return std::clamp(tau, 1, steps);
}

VideoLatent vsds_refine_with_noise(const VideoLatent& z0_static, const Condition& cond, const Denoiser& denoiser,
                                   const NoiseSchedule& sched, const VsdsConfig& cfg, const VideoLatent& eps,
                                   VsdsStats* stats) {
  validate(cfg);
  require_same_shape(z0_static.tensor(), eps.tensor(), "vsds_refine");
  const int T = sched.steps();
  const int tau = vsds_tau(T, cfg.p);
  const auto n = static_cast<std::size_t>(T - tau + 1);
  Tensor z = z0_static.tensor();
  std::size_t calls = 0;
  std::size_t i = 0;
  for (int t = T; t >= tau; --t, ++i) {
    const VideoLatent zt = forward_noise(VideoLatent(z), t, eps, sched);
    const VideoLatent pred = denoiser.predict_noise(zt, cond, t);
    ++calls;
    if (pred.shape() != z.shape()) {
      throw std::invalid_argument("vsds_refine: denoiser returned " + shape_string(pred.shape()) + " for " +
                                  shape_string(z.shape()));
    }
    const double w = omega_at(cfg.omega, sched, t);
    const double a = alpha_at(cfg.curve, i, n);
    auto zv = z.values();
    auto pv = pred.values();
    auto ev = eps.values();
    for (std::size_t k = 0; k < zv.size(); ++k) {
      const double g = w * (pv[k] - ev[k]);
      if (!std::isfinite(g)) {
        throw std::domain_error("vsds_refine: non-finite gradient at step " + std::to_string(i) + " (t=" +
                                std::to_string(t) + ")");
      }
      zv[k] -= a * g;
    }
  }
  if (stats) {
    stats->tau = tau;
    stats->denoiser_calls = calls;
  }
  return VideoLatent(std::move(z));
}

VideoLatent vsds_refine(const VideoLatent& z0_static, const Condition& cond, const Denoiser& denoiser,
                        const NoiseSchedule& sched, const VsdsConfig& cfg, NoiseStream& noise, VsdsStats* stats) {
  validate(cfg);
  const std::size_t before = noise.draws();
  const VideoLatent eps(noise.draw(z0_static.shape()));
  VideoLatent out = vsds_refine_with_noise(z0_static, cond, denoiser, sched, cfg, eps, stats);
  if (stats) stats->noise_draws = noise.draws() - before;
  return out;
}

DualPathResult dual_path_refine(const VideoLatent& real_static, const VideoLatent& proxy_static,
                                const Condition& real_cond, const Condition& proxy_cond, const Denoiser& denoiser,
                                const NoiseSchedule& sched, const VsdsConfig& cfg, std::uint64_t seed,
                                bool concurrent) {
  validate(cfg);
  require_same_shape(real_static.tensor(), proxy_static.tensor(), "dual_path_refine");
  const CounterRng root(cfg.seed.value_or(seed));
  NoiseStream real_noise(root.derive("vsds/real"));
  NoiseStream proxy_noise(root.derive("vsds/proxy"));
  const VideoLatent eps_real(real_noise.draw(real_static.shape()));
  const VideoLatent eps_proxy = cfg.shared_noise ? eps_real : VideoLatent(proxy_noise.draw(proxy_static.shape()));

  DualPathResult r;
  auto run_real = [&] {
    return vsds_refine_with_noise(real_static, real_cond, denoiser, sched, cfg, eps_real, &r.real_stats);
  };
  auto run_proxy = [&] {
    return vsds_refine_with_noise(proxy_static, proxy_cond, denoiser, sched, cfg, eps_proxy, &r.proxy_stats);
  };
  if (concurrent) {
    auto proxy_future = std::async(std::launch::async, run_proxy);
    r.real = run_real();
    r.proxy = proxy_future.get();
  } else {
    r.real = run_real();
    r.proxy = run_proxy();
  }
  r.real_stats.noise_draws = real_noise.draws();
  r.proxy_stats.noise_draws = proxy_noise.draws();
  return r;
}

DualPathResult dual_path_refine(const VideoLatent& real_static, const VideoLatent& proxy_static,
                                const Condition& cond, const Denoiser& denoiser, const NoiseSchedule& sched,
                                const VsdsConfig& cfg, std::uint64_t seed, bool concurrent) {
  return dual_path_refine(real_static, proxy_static, cond, cond, denoiser, sched, cfg, seed, concurrent);
}

}  // namespace awaken
