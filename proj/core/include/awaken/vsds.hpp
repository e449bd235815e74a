#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "awaken/diffusion.hpp"
#include "awaken/rng.hpp"

namespace awaken {

enum class CurveKind { LinearDecreasing, StepwiseDecreasing, StepwiseIncreasing, LinearIncreasing, Constant };

std::string_view curve_name(CurveKind kind);  // "LD", "SD", "SI", "LI", "constant"
CurveKind parse_curve(std::string_view name);  // case-insensitive, short or long names

struct WeightCurve {
  CurveKind kind = CurveKind::StepwiseDecreasing;
  double w_hi = 2.0;
  double w_lo = 1.0;
};

enum class OmegaMode { One, OneMinusAlphaBar };

std::string_view omega_name(OmegaMode mode);
OmegaMode parse_omega(std::string_view name);

struct VsdsConfig {
  double p = 0.6;
  WeightCurve curve;
  OmegaMode omega = OmegaMode::OneMinusAlphaBar;
  bool shared_noise = false;           // proxy path reuses the real path's noise
  std::optional<std::uint64_t> seed;   // overrides the run seed when set
};

void validate(const WeightCurve& curve);
void validate(const VsdsConfig& cfg);

double alpha_at(const WeightCurve& curve, std::size_t i, std::size_t n);
double omega_at(OmegaMode mode, const NoiseSchedule& sched, int t);

// Last timestep of the window: round-half-up of T * p, at least 1.
int vsds_tau(int steps, double p);

struct VsdsStats {
  int tau = 0;
  std::size_t denoiser_calls = 0;
  std::size_t noise_draws = 0;
};

// Refinement with a caller-supplied noise sample, reused at every step t = T..tau.
VideoLatent vsds_refine_with_noise(const VideoLatent& z0_static, const Condition& cond, const Denoiser& denoiser,
                                   const NoiseSchedule& sched, const VsdsConfig& cfg, const VideoLatent& eps,
                                   VsdsStats* stats = nullptr);

// Draws the single noise sample from `noise`, then refines.
VideoLatent vsds_refine(const VideoLatent& z0_static, const Condition& cond, const Denoiser& denoiser,
                        const NoiseSchedule& sched, const VsdsConfig& cfg, NoiseStream& noise,
                        VsdsStats* stats = nullptr);

struct DualPathResult {
  VideoLatent real;
  VideoLatent proxy;
  VsdsStats real_stats;
  VsdsStats proxy_stats;
};

// Noise streams are derived from `seed` under "vsds/real" and "vsds/proxy";
// both samples are drawn before either path runs, real first.
DualPathResult dual_path_refine(const VideoLatent& real_static, const VideoLatent& proxy_static,
                                const Condition& real_cond, const Condition& proxy_cond, const Denoiser& denoiser,
                                const NoiseSchedule& sched, const VsdsConfig& cfg, std::uint64_t seed,
                                bool concurrent = false);

DualPathResult dual_path_refine(const VideoLatent& real_static, const VideoLatent& proxy_static,
                                const Condition& cond, const Denoiser& denoiser, const NoiseSchedule& sched,
                                const VsdsConfig& cfg, std::uint64_t seed, bool concurrent = false);

}  // namespace awaken
