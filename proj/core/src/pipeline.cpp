#include "awaken/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <thread>

#include "awaken/rng.hpp"

namespace awaken {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

template <typename F>
auto run_stage(const char* name, std::vector<StageTiming>& timings, F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  try {
    auto value = fn();
    timings.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
    return value;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

bool uses_proxy(PipelineVariant v) {
  return v == PipelineVariant::S || v == PipelineVariant::VU || v == PipelineVariant::VS;
}

}  // namespace

std::string_view variant_name(PipelineVariant v) {
  switch (v) {
    case PipelineVariant::Baseline: return "Baseline";
    case PipelineVariant::V: return "V";
    case PipelineVariant::S: return "S";
    case PipelineVariant::VU: return "VU";
    case PipelineVariant::VS: return "VS";
  }
  return "?";
}

PipelineVariant parse_variant(std::string_view name) {
  const std::string s = lower(name);
  for (PipelineVariant v : kAllVariants)
    if (lower(variant_name(v)) == s) return v;
  throw std::invalid_argument("unknown pipeline variant '" + std::string(name) + "'");
}

std::string_view resume_name(ResumeFrom r) { return r == ResumeFrom::Tau ? "tau" : "T"; }

ResumeFrom parse_resume(std::string_view name) {
  const std::string s = lower(name);
  if (s == "tau") return ResumeFrom::Tau;
  if (s == "t") return ResumeFrom::T;
  throw std::invalid_argument("unknown resume_from value '" + std::string(name) + "' (expected tau or T)");
}

std::string_view proxy_condition_name(ProxyCondition c) { return c == ProxyCondition::Proxy ? "proxy" : "real"; }

ProxyCondition parse_proxy_condition(std::string_view name) {
  const std::string s = lower(name);
  if (s == "proxy") return ProxyCondition::Proxy;
  if (s == "real") return ProxyCondition::Real;
  throw std::invalid_argument("unknown proxy condition '" + std::string(name) + "' (expected proxy or real)");
}

void validate(const PipelineConfig& cfg) {
  if (cfg.frames < 2) throw std::invalid_argument("frame count L must be >= 2");
  validate(cfg.vsds);
  validate(cfg.fusion);
}

RunResult animate(const FrameLatent& image, Motion motion, PipelineVariant variant, const Denoiser& denoiser,
                  const NoiseSchedule& sched, const PipelineConfig& cfg, const ProxyProvider& provider,
                  std::uint64_t seed) {
  validate(cfg);
  motion_from_index(static_cast<int>(motion));
  RunResult r;
  r.variant = variant;
  r.seed = seed;
  r.tau = vsds_tau(sched.steps(), cfg.vsds.p);
  const CounterRng root(seed);
  const Condition cond{image, motion};
  CountingDenoiser counted(denoiser);

  const VideoLatent z_static =
      run_stage("replicate", r.timings, [&] { return replicate_static(image, cfg.frames); });

  VideoLatent proxy_static;
  if (uses_proxy(variant)) {
    r.proxy = run_stage("proxy", r.timings, [&] {
      FrameLatent p = provider.proxy_for(image, cond);
      if (p.shape() != image.shape()) {
        throw std::invalid_argument("proxy shape " + shape_string(p.shape()) + " does not match image shape " +
                                    shape_string(image.shape()));
      }
      return p;
    });
    proxy_static = replicate_static(r.proxy, cfg.frames);
  }
  const Condition proxy_cond{cfg.proxy_condition == ProxyCondition::Proxy && uses_proxy(variant) ? r.proxy : image,
                             motion};

  switch (variant) {
    case PipelineVariant::Baseline:
      r.pre_sampling = z_static;
      break;
    case PipelineVariant::V:
      r.pre_sampling = run_stage("vsds", r.timings, [&] {
        NoiseStream noise(CounterRng(cfg.vsds.seed.value_or(seed)).derive("vsds/real"));
        return vsds_refine(z_static, cond, counted, sched, cfg.vsds, noise);
      });
      break;
    case PipelineVariant::S:
      r.pre_sampling = run_stage("fusion", r.timings, [&] { return fuse(z_static, proxy_static, cfg.fusion); });
      break;
    case PipelineVariant::VU:
    case PipelineVariant::VS: {
      const DualPathResult paths = run_stage("vsds", r.timings, [&] {
        return dual_path_refine(z_static, proxy_static, cond, proxy_cond, counted, sched, cfg.vsds, seed,
                                cfg.concurrent_paths);
      });
      r.pre_sampling = run_stage("fusion", r.timings, [&] {
        return variant == PipelineVariant::VU ? uniform_fuse(paths.real, paths.proxy)
                                              : fuse(paths.real, paths.proxy, cfg.fusion);
      });
      break;
    }
  }
  r.vsds_calls = counted.calls();
  counted.reset();

  r.resume_step = variant == PipelineVariant::Baseline || cfg.resume_from == ResumeFrom::T ? sched.steps() : r.tau;
  const VideoLatent z_start = run_stage("renoise", r.timings, [&] {
    CounterRng rng = root.derive("resample");
    const VideoLatent eps(rng.normal_tensor(r.pre_sampling.shape()));
    return noise_to_level(r.pre_sampling, r.resume_step, eps, sched);
  });
  r.output = run_stage("sample", r.timings, [&] {
    return reverse_sample(z_start, r.resume_step, cond, counted, sched, root.derive("sample").key(),
                          ReverseOptions{cfg.deterministic_sampler});
  });
  r.reverse_calls = counted.calls();
  return r;
}

std::vector<AblationSetting> variant_settings(const std::vector<PipelineVariant>& variants,
                                              const PipelineConfig& base) {
  std::vector<AblationSetting> out;
  for (PipelineVariant v : variants) out.push_back({std::string(variant_name(v)), "variant", v, base});
  return out;
}

MetricReport aggregate(const std::vector<ItemOutcome>& outcomes, const FeatureStats& reference) {
  MetricReport m;
  std::vector<std::vector<double>> feats;
  for (const auto& o : outcomes) {
    if (!o.ok) continue;
    feats.push_back(o.features);
    m.alignment += o.alignment;
    m.linearity.variance_ratio += o.linearity.variance_ratio;
    m.linearity.monotonicity += o.linearity.monotonicity;
    m.motion_energy += o.motion_energy;
    m.fidelity += o.fidelity;
  }
  if (feats.empty()) return m;
  const double n = static_cast<double>(feats.size());
  m.alignment /= n;
  m.linearity.variance_ratio /= n;
  m.linearity.monotonicity /= n;
  m.motion_energy /= n;
  m.fidelity /= n;
  m.linearity.degenerate = std::all_of(outcomes.begin(), outcomes.end(), [](const ItemOutcome& o) {
    return !o.ok || o.linearity.degenerate;
  });
  m.frechet = frechet_distance(FeatureStats::from_samples(feats), reference);
  return m;
}

std::vector<AblationRow> run_ablation(const std::vector<BenchmarkItem>& benchmark,
                                      const std::vector<AblationSetting>& settings, const Denoiser& denoiser,
                                      const NoiseSchedule& sched, const ProxyProvider& provider,
                                      std::size_t threads) {
  if (benchmark.empty()) throw std::invalid_argument("run_ablation: benchmark is empty");
  if (settings.empty()) throw std::invalid_argument("run_ablation: no variants or settings requested");
  for (const auto& s : settings) validate(s.config);

  std::vector<std::vector<double>> ref_feats;
  for (const auto& item : benchmark) ref_feats.push_back(video_features(item.reference));
  const FeatureStats reference = FeatureStats::from_samples(ref_feats);

  const std::size_t n_items = benchmark.size();
  std::vector<std::vector<ItemOutcome>> outcomes(settings.size(), std::vector<ItemOutcome>(n_items));
  std::atomic<std::size_t> next{0};
  const std::size_t total = settings.size() * n_items;
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t si = job / n_items;
      const std::size_t ii = job % n_items;
      const auto& item = benchmark[ii];
      ItemOutcome& o = outcomes[si][ii];
      o.id = item.id;
      try {
        const RunResult r = animate(item.image, item.motion, settings[si].variant, denoiser, sched,
                                    settings[si].config, provider, item.seed);
        o.features = video_features(r.output);
        o.alignment = alignment_score(r.output, item.motion);
        o.linearity = linearity_score(r.output);
        o.motion_energy = motion_energy(r.output);
        o.fidelity = fidelity(r.output, item.image);
        o.ok = true;
      } catch (const std::exception& e) {
        o.ok = false;
        o.error = e.what();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(threads, 1, total);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<AblationRow> rows;
  for (std::size_t si = 0; si < settings.size(); ++si) {
    auto& outs = outcomes[si];
    std::sort(outs.begin(), outs.end(), [](const ItemOutcome& a, const ItemOutcome& b) { return a.id < b.id; });
    AblationRow row{settings[si], {}, n_items, 0, {}};
    for (const auto& o : outs)
      if (!o.ok) {
        ++row.failures;
        row.errors.push_back("item " + std::to_string(o.id) + ": " + o.error);
      }
    row.metrics = aggregate(outs, reference);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace awaken
