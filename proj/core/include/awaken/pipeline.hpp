#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "awaken/diffusion.hpp"
#include "awaken/fusion.hpp"
#include "awaken/metrics.hpp"
#include "awaken/proxy.hpp"
#include "awaken/vsds.hpp"

namespace awaken {

enum class PipelineVariant { Baseline, V, S, VU, VS };

inline constexpr PipelineVariant kAllVariants[] = {PipelineVariant::Baseline, PipelineVariant::V, PipelineVariant::S,
                                                   PipelineVariant::VU, PipelineVariant::VS};

std::string_view variant_name(PipelineVariant v);  // "Baseline", "V", "S", "VU", "VS"
PipelineVariant parse_variant(std::string_view name);  // case-insensitive

enum class ResumeFrom { Tau, T };

std::string_view resume_name(ResumeFrom r);
ResumeFrom parse_resume(std::string_view name);

// Which image conditions the proxy path's distillation.
enum class ProxyCondition { Proxy, Real };

std::string_view proxy_condition_name(ProxyCondition c);
ProxyCondition parse_proxy_condition(std::string_view name);

struct PipelineConfig {
  std::size_t frames = 16;
  VsdsConfig vsds;
  FusionConfig fusion;
  bool deterministic_sampler = true;
  ResumeFrom resume_from = ResumeFrom::Tau;
  ProxyCondition proxy_condition = ProxyCondition::Proxy;
  bool concurrent_paths = false;
};

void validate(const PipelineConfig& cfg);

// A failure inside one pipeline stage; what() starts with the stage name.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error("stage '" + stage + "': " + message), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunResult {
  VideoLatent output;
  VideoLatent pre_sampling;  // latent right before re-noising
  FrameLatent proxy;
  PipelineVariant variant = PipelineVariant::VS;
  std::uint64_t seed = 0;
  int tau = 0;
  int resume_step = 0;
  std::size_t vsds_calls = 0;
  std::size_t reverse_calls = 0;
  std::vector<StageTiming> timings;
};

// Random streams: "vsds/real", "vsds/proxy" (distillation), "resample" (re-noise), "sample" (reverse chain).
RunResult animate(const FrameLatent& image, Motion motion, PipelineVariant variant, const Denoiser& denoiser,
                  const NoiseSchedule& sched, const PipelineConfig& cfg, const ProxyProvider& provider,
                  std::uint64_t seed);

struct BenchmarkItem {
  std::size_t id = 0;
  FrameLatent image;
  Motion motion = Motion::Static;
  VideoLatent reference;  // ground-truth video for the Frechet reference set
  std::uint64_t seed = 0;
};

struct AblationSetting {
  std::string name;   // row label
  std::string sweep;  // "variant", "curve", "p", ...
  PipelineVariant variant = PipelineVariant::VS;
  PipelineConfig config;
};

struct ItemOutcome {
  std::size_t id = 0;
  bool ok = false;
  std::string error;
  std::vector<double> features;
  double alignment = 0.0;
  Linearity linearity;
  double motion_energy = 0.0;
  double fidelity = 0.0;
};

struct AblationRow {
  AblationSetting setting;
  MetricReport metrics;
  std::size_t items = 0;
  std::size_t failures = 0;
  std::vector<std::string> errors;  // "item <id>: <message>"
};

std::vector<AblationSetting> variant_settings(const std::vector<PipelineVariant>& variants, const PipelineConfig& base);

// Items run in parallel up to `threads`; rows follow the order of `settings`.
std::vector<AblationRow> run_ablation(const std::vector<BenchmarkItem>& benchmark,
                                      const std::vector<AblationSetting>& settings, const Denoiser& denoiser,
                                      const NoiseSchedule& sched, const ProxyProvider& provider,
                                      std::size_t threads = 1);

MetricReport aggregate(const std::vector<ItemOutcome>& outcomes, const FeatureStats& reference);

}  // namespace awaken
