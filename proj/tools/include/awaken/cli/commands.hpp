#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "awaken/cli/config.hpp"
#include "awaken/pipeline.hpp"

namespace awaken::cli {

// Bad flags, unknown labels or variants; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Benchmark item i is generated from seed + i and restricted to cfg.ablate.motions.
std::vector<BenchmarkItem> make_benchmark(const ExperimentConfig& cfg, std::size_t n_items);

// Variant rows, then VS rows for each swept curve, p value and proxy strength.
struct AblationPlan {
  std::vector<AblationSetting> settings;
  std::vector<double> strengths;  // proxy strength per setting
};
AblationPlan ablation_plan(const ExperimentConfig& cfg);

std::vector<AblationRow> run_plan(const AblationPlan& plan, const std::vector<BenchmarkItem>& benchmark,
                                  const Denoiser& denoiser, const NoiseSchedule& sched,
                                  const ExperimentConfig& cfg, std::size_t threads);

std::string ablation_csv(const std::vector<AblationRow>& rows);

// Metrics for one video. Frechet compares against procedural videos of the same
// label; fidelity is 0 without an image.
MetricReport diagnose_video(const VideoLatent& video, Motion motion, const FrameLatent* image,
                            const DatasetParams& params, std::uint64_t seed);

// Worker count: cfg value (0 = hardware), capped by LATENT_AWAKEN_THREADS.
std::size_t thread_budget(std::size_t configured);

int cmd_train(const std::filesystem::path& config_path, const std::optional<std::filesystem::path>& ckpt,
              std::ostream& out, std::ostream& err);

struct AnimateArgs {
  std::filesystem::path config;
  std::filesystem::path ckpt;
  std::optional<std::filesystem::path> image;
  std::optional<std::size_t> item;  // use benchmark item N as the input image
  std::string label;
  std::string variant = "VS";
  std::optional<std::filesystem::path> proxy;
  std::optional<std::filesystem::path> out_dir;
};
int cmd_animate(const AnimateArgs& args, std::ostream& out, std::ostream& err);

int cmd_ablate(const std::filesystem::path& config_path, const std::filesystem::path& ckpt,
               std::optional<std::size_t> n_items, const std::optional<std::filesystem::path>& out_dir,
               std::ostream& out, std::ostream& err);

int cmd_diagnose(const std::filesystem::path& video_path, const std::string& label,
                 const std::optional<std::filesystem::path>& image_path,
                 const std::optional<std::filesystem::path>& config_path, std::ostream& out, std::ostream& err);

// Full command line entry; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace awaken::cli
