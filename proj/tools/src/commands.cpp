#include "awaken/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "awaken/checkpoint.hpp"
#include "awaken/ltn1.hpp"
#include "awaken/pgm.hpp"
#include "awaken/rng.hpp"

namespace awaken::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kReferenceVideos = 64;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

json report_json(const MetricReport& m) {
  return {{"frechet", m.frechet},
          {"alignment", m.alignment},
          {"linearity",
           {{"variance_ratio", m.linearity.variance_ratio},
            {"monotonicity", m.linearity.monotonicity},
            {"degenerate", m.linearity.degenerate}}},
          {"motion_energy", m.motion_energy},
          {"fidelity", m.fidelity}};
}

Motion parse_label(const std::string& label) {
  try {
    return parse_motion(label);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

bool uses_proxy_provider(PipelineVariant v) {
  return v == PipelineVariant::S || v == PipelineVariant::VU || v == PipelineVariant::VS;
}

FrameLatent load_image(const fs::path& path) {
  if (!fs::exists(path)) throw FileFormatError(path.string() + ": image file not found");
  return load_proxy(path);
}

template <typename F>
int guarded(std::ostream& err, F&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

ToyDenoiser load_model(const fs::path& ckpt, const ExperimentConfig& cfg) {
  ToyDenoiser model = load_checkpoint(ckpt);
  const NoiseSchedule sched = NoiseSchedule::from_params(cfg.schedule);
  if (sched.hash() != model.schedule().hash()) {
    throw std::runtime_error(ckpt.string() + ": checkpoint schedule hash " + model.schedule().hash_hex() +
                             " does not match the config schedule hash " + sched.hash_hex());
  }
  if (model.geometry().frames != cfg.pipeline.frames) {
    throw std::runtime_error(ckpt.string() + ": checkpoint has " + std::to_string(model.geometry().frames) +
                             " frames but the config asks for " + std::to_string(cfg.pipeline.frames));
  }
  return model;
}

}  // namespace

std::size_t thread_budget(std::size_t configured) {
  std::size_t n = configured ? configured : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LATENT_AWAKEN_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<std::size_t>(n, cap);
  }
  return std::max<std::size_t>(n, 1);
}

std::vector<BenchmarkItem> make_benchmark(const ExperimentConfig& cfg, std::size_t n_items) {
  DatasetParams params = cfg.dataset;
  params.motions = cfg.ablate.motions;
  std::vector<BenchmarkItem> items;
  items.reserve(n_items);
  for (std::size_t i = 0; i < n_items; ++i) {
    const std::uint64_t item_seed = cfg.seed + i;
    MotionSample s = generate_sample(params, CounterRng(item_seed, "benchmark").key(), 0);
    items.push_back({i, s.cond.image, s.cond.motion, std::move(s.video), item_seed});
  }
  return items;
}

AblationPlan ablation_plan(const ExperimentConfig& cfg) {
  AblationPlan plan;
  auto add = [&](AblationSetting s, double strength) {
    plan.settings.push_back(std::move(s));
    plan.strengths.push_back(strength);
  };
  const double base_strength = cfg.proxy.motion_hint_strength;
  for (const auto& s : variant_settings(cfg.variants, cfg.pipeline)) add(s, base_strength);
  for (CurveKind k : cfg.ablate.curves) {
    PipelineConfig pc = cfg.pipeline;
    pc.vsds.curve.kind = k;
    add({"curve=" + std::string(curve_name(k)), "curve", PipelineVariant::VS, pc}, base_strength);
  }
  for (double p : cfg.ablate.p_values) {
    PipelineConfig pc = cfg.pipeline;
    pc.vsds.p = p;
    add({"p=" + fmt(p), "p", PipelineVariant::VS, pc}, base_strength);
  }
  for (double s : cfg.ablate.strengths) add({"strength=" + fmt(s), "strength", PipelineVariant::VS, cfg.pipeline}, s);
  return plan;
}

std::vector<AblationRow> run_plan(const AblationPlan& plan, const std::vector<BenchmarkItem>& benchmark,
                                  const Denoiser& denoiser, const NoiseSchedule& sched,
                                  const ExperimentConfig& cfg, std::size_t threads) {
  // Settings sharing a proxy strength run together; rows keep plan order.
  std::vector<AblationRow> rows(plan.settings.size());
  std::vector<bool> done(plan.settings.size(), false);
  for (std::size_t i = 0; i < plan.settings.size(); ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> group;
    std::vector<AblationSetting> settings;
    for (std::size_t j = i; j < plan.settings.size(); ++j)
      if (!done[j] && plan.strengths[j] == plan.strengths[i]) {
        group.push_back(j);
        settings.push_back(plan.settings[j]);
        done[j] = true;
      }
    SyntheticProviderParams pp = cfg.proxy;
    pp.motion_hint_strength = plan.strengths[i];
    const SyntheticProvider provider(pp);
    auto out = run_ablation(benchmark, settings, denoiser, sched, provider, threads);
    for (std::size_t k = 0; k < group.size(); ++k) rows[group[k]] = std::move(out[k]);
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out = "variant,frechet,alignment,linearity_vr,linearity_mono,motion_energy,fidelity\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out += r.setting.name + "," + fmt(m.frechet) + "," + fmt(m.alignment) + "," + fmt(m.linearity.variance_ratio) +
           "," + fmt(m.linearity.monotonicity) + "," + fmt(m.motion_energy) + "," + fmt(m.fidelity) + "\n";
  }
  return out;
}

MetricReport diagnose_video(const VideoLatent& video, Motion motion, const FrameLatent* image,
                            const DatasetParams& base, std::uint64_t seed) {
  DatasetParams params = base;
  params.channels = video.channels();
  params.height = video.height();
  params.width = video.width();
  params.frames = video.frames();
  params.motions = {motion};
  const MotionDataset ref = generate_dataset(kReferenceVideos, params, CounterRng(seed, "diagnose/reference").key());
  std::vector<std::vector<double>> ref_feats;
  for (const auto& s : ref.samples) ref_feats.push_back(video_features(s.video));

  MetricReport m;
  m.frechet = frechet_distance(FeatureStats::from_samples({video_features(video)}),
                               FeatureStats::from_samples(ref_feats));
  m.alignment = alignment_score(video, motion);
  m.linearity = video.frames() >= 3 ? linearity_score(video) : Linearity{0.0, 0.0, true};
  m.motion_energy = motion_energy(video);
  m.fidelity = image ? fidelity(video, *image) : 0.0;
  return m;
}

int cmd_train(const fs::path& config_path, const std::optional<fs::path>& ckpt, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_config(config_path);
    const fs::path dir = ckpt.value_or(cfg.output_dir / "checkpoint");
    const NoiseSchedule sched = NoiseSchedule::from_params(cfg.schedule);
    const MotionDataset data = generate_dataset(cfg.train_size, cfg.dataset, cfg.dataset_seed);
    const MotionDataset held_out =
        generate_dataset(std::max<std::size_t>(cfg.train_size / 10, 32), cfg.dataset,
                         CounterRng(cfg.dataset_seed, "heldout").key());

    ToyDenoiser model(cfg.geometry(), sched, cfg.denoiser);
    model.initialize(cfg.training.seed);
    const TrainResult result = train(model, data, cfg.training, [&](std::size_t epoch, double loss) {
      err << "epoch " << epoch + 1 << " loss " << fmt(loss) << "\n";
    });

    const auto eval = evaluation_examples(held_out, sched, CounterRng(cfg.seed, "eval").key(), 4);
    const double held_loss = evaluate_loss(model, eval);
    const double zero_loss = zero_predictor_loss(eval);

    save_checkpoint(dir, model, cfg.schedule, cfg.dataset, cfg.hash());
    std::string csv = "epoch,loss\n";
    for (std::size_t e = 0; e < result.epoch_losses.size(); ++e)
      csv += std::to_string(e + 1) + "," + fmt(result.epoch_losses[e]) + "\n";
    write_text(dir / "loss.csv", csv);
    const json summary = {{"config_hash", cfg.hash()},
                          {"epochs", result.epoch_losses.size()},
                          {"steps", result.steps},
                          {"final_train_loss", result.epoch_losses.empty() ? 0.0 : result.epoch_losses.back()},
                          {"heldout_loss", held_loss},
                          {"zero_predictor_loss", zero_loss}};
    write_text(dir / "training.json", summary.dump(2) + "\n");
    out << "checkpoint " << dir.string() << " (" << checkpoint_digest(dir) << ")\n"
        << "held-out loss " << fmt(held_loss) << " vs zero predictor " << fmt(zero_loss) << "\n";
    return 0;
  });
}

int cmd_animate(const AnimateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_config(args.config);
    const Motion motion = parse_label(args.label);
    PipelineVariant variant;
    try {
      variant = parse_variant(args.variant);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    if (args.image.has_value() == args.item.has_value()) throw UsageError("animate needs exactly one of --image or --item");

    const ToyDenoiser model = load_model(args.ckpt, cfg);
    FrameLatent image;
    std::uint64_t seed = cfg.seed;
    if (args.image) {
      image = load_image(*args.image);
    } else {
      const auto items = make_benchmark(cfg, *args.item + 1);
      image = items.back().image;
      seed = items.back().seed;
    }
    if (image.shape() != model.geometry().frame_shape()) {
      throw std::runtime_error("image shape " + shape_string(image.shape()) + " does not match checkpoint frame shape " +
                               shape_string(model.geometry().frame_shape()));
    }

    std::unique_ptr<ProxyProvider> provider;
    if (args.proxy)
      provider = std::make_unique<FileProvider>(*args.proxy);
    else
      provider = std::make_unique<SyntheticProvider>(cfg.proxy);

    const RunResult r = animate(image, motion, variant, model, model.schedule(), cfg.pipeline, *provider, seed);

    const fs::path dir = args.out_dir.value_or(cfg.output_dir / "animate");
    fs::create_directories(dir);
    write_ltn1(dir / "video.ltn1", r.output.tensor());
    json frames = json::array();
    for (std::size_t l = 0; l < r.output.frames(); ++l) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%02zu.pgm", l);
      write_pgm(dir / name, r.output.frame_latent(l));
      frames.push_back(name);
    }
    const MetricReport m = diagnose_video(r.output, motion, &image, cfg.dataset, cfg.seed);
    const json result = {{"config_hash", cfg.hash()},
                         {"checkpoint", checkpoint_digest(args.ckpt)},
                         {"variant", std::string(variant_name(variant))},
                         {"label", std::string(motion_name(motion))},
                         {"seed", seed},
                         {"proxy", uses_proxy_provider(variant) ? provider->describe() : "none"},
                         {"tau", r.tau},
                         {"resume_step", r.resume_step},
                         {"vsds_calls", r.vsds_calls},
                         {"reverse_calls", r.reverse_calls},
                         {"shape", r.output.shape()},
                         {"video", "video.ltn1"},
                         {"frames", frames},
                         {"metrics", report_json(m)}};
    write_text(dir / "result.json", result.dump(2) + "\n");
    std::ostringstream log;
    for (const auto& t : r.timings) log << t.stage << " " << fmt(t.seconds) << "s\n";
    write_text(dir / "timing.log", log.str());
    out << "wrote " << r.output.frames() << " frames to " << dir.string() << "\n";
    return 0;
  });
}

int cmd_ablate(const fs::path& config_path, const fs::path& ckpt, std::optional<std::size_t> n_items,
               const std::optional<fs::path>& out_dir, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_config(config_path);
    const std::size_t n = n_items.value_or(cfg.ablate.items);
    if (n == 0) throw UsageError("--items must be >= 1");
    const ToyDenoiser model = load_model(ckpt, cfg);
    const auto benchmark = make_benchmark(cfg, n);
    const AblationPlan plan = ablation_plan(cfg);
    const auto rows = run_plan(plan, benchmark, model, model.schedule(), cfg, thread_budget(cfg.ablate.threads));

    json jrows = json::array();
    std::size_t failures = 0;
    for (const auto& r : rows) {
      failures += r.failures;
      for (const auto& e : r.errors) err << "error: " << r.setting.name << ": " << e << "\n";
      jrows.push_back({{"name", r.setting.name},
                       {"sweep", r.setting.sweep},
                       {"variant", std::string(variant_name(r.setting.variant))},
                       {"curve", std::string(curve_name(r.setting.config.vsds.curve.kind))},
                       {"p", r.setting.config.vsds.p},
                       {"items", r.items},
                       {"failures", r.failures},
                       {"errors", r.errors},
                       {"metrics", report_json(r.metrics)}});
    }
    const json report = {{"config_hash", cfg.hash()},
                         {"checkpoint", checkpoint_digest(ckpt)},
                         {"seed", cfg.seed},
                         {"items", n},
                         {"rows", jrows}};
    const fs::path dir = out_dir.value_or(cfg.output_dir / "ablate");
    fs::create_directories(dir);
    write_text(dir / "ablation.csv", ablation_csv(rows));
    write_text(dir / "ablation.json", report.dump(2) + "\n");
    out << "wrote " << rows.size() << " rows to " << (dir / "ablation.csv").string() << "\n";
    return failures ? 1 : 0;
  });
}

int cmd_diagnose(const fs::path& video_path, const std::string& label, const std::optional<fs::path>& image_path,
                 const std::optional<fs::path>& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Motion motion = parse_label(label);
    ExperimentConfig cfg;
    if (config_path) cfg = load_config(*config_path);
    Tensor t = read_ltn1(video_path);
    if (t.rank() != 4) {
      throw FileFormatError(video_path.string() + ": expected an LxCxHxW video tensor, got " + shape_string(t.shape()));
    }
    const VideoLatent video(std::move(t));
    std::optional<FrameLatent> image;
    if (image_path) image = load_image(*image_path);
    const MetricReport m = diagnose_video(video, motion, image ? &*image : nullptr, cfg.dataset, cfg.seed);
    out << report_json(m).dump(2) << "\n";
    return 0;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"latent-awaken: training-free image-to-video on a toy latent diffusion model", "latent-awaken"};
  app.require_subcommand(1);

  std::string config, ckpt, label, image, proxy, out_dir, video;
  std::string variant = "VS";
  std::optional<std::size_t> items, item;

  auto* train = app.add_subcommand("train", "train the toy denoiser and write a checkpoint");
  train->add_option("--config", config, "experiment config (INI)")->required();
  train->add_option("--ckpt", ckpt, "checkpoint directory (default <output_dir>/checkpoint)");

  auto* anim = app.add_subcommand("animate", "animate one image");
  anim->add_option("--config", config, "experiment config (INI)")->required();
  anim->add_option("--ckpt", ckpt, "checkpoint directory")->required();
  anim->add_option("--image", image, "input image (PGM or LTN1)");
  anim->add_option("--item", item, "use benchmark item N as the input image");
  anim->add_option("--label", label, "motion label")->required();
  anim->add_option("--variant", variant, "Baseline, V, S, VU or VS");
  anim->add_option("--proxy", proxy, "proxy image (PGM or LTN1); synthetic proxy otherwise");
  anim->add_option("--out", out_dir, "output directory (default <output_dir>/animate)");

  auto* abl = app.add_subcommand("ablate", "run the ablation table");
  abl->add_option("--config", config, "experiment config (INI)")->required();
  abl->add_option("--ckpt", ckpt, "checkpoint directory")->required();
  abl->add_option("--items", items, "benchmark size (default ablate.items)");
  abl->add_option("--out", out_dir, "output directory (default <output_dir>/ablate)");

  auto* diag = app.add_subcommand("diagnose", "print metrics for a video latent");
  diag->add_option("--video", video, "LTN1 video latent")->required();
  diag->add_option("--label", label, "motion label")->required();
  diag->add_option("--image", image, "conditioning image for the fidelity metric");
  diag->add_option("--config", config, "experiment config for the reference set");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return e.get_exit_code() == 0 ? code : 2;
  }
  auto opt_path = [](const std::string& s) { return s.empty() ? std::optional<fs::path>() : fs::path(s); };

  if (*train) return cmd_train(config, opt_path(ckpt), out, err);
  if (*anim) {
    AnimateArgs a{config, ckpt, opt_path(image), item, label, variant, opt_path(proxy), opt_path(out_dir)};
    return cmd_animate(a, out, err);
  }
  if (*abl) return cmd_ablate(config, ckpt, items, opt_path(out_dir), out, err);
  return cmd_diagnose(video, label, opt_path(image), opt_path(config), out, err);
}

}  // namespace awaken::cli
