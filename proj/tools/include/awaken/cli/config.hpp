#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "awaken/dataset.hpp"
#include "awaken/pipeline.hpp"
#include "awaken/schedule.hpp"
#include "awaken/toy_denoiser.hpp"
#include "awaken/training.hpp"

namespace awaken::cli {

// Invalid or unreadable configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AblateSection {
  std::size_t items = 50;
  std::vector<Motion> motions{kMovingMotions.begin(), kMovingMotions.end()};
  std::vector<CurveKind> curves;
  std::vector<double> p_values;
  std::vector<double> strengths;
  std::size_t threads = 0;  // 0: hardware concurrency
};

struct ExperimentConfig {
  std::uint64_t seed = 42;
  std::filesystem::path output_dir = "out";

  DatasetParams dataset;
  std::size_t train_size = 2000;
  std::uint64_t dataset_seed = 1;

  ScheduleParams schedule;
  ToyDenoiserConfig denoiser;
  TrainOptions training;

  PipelineConfig pipeline;
  SyntheticProviderParams proxy;
  std::vector<PipelineVariant> variants{std::begin(kAllVariants), std::end(kAllVariants)};
  AblateSection ablate;

  VideoGeometry geometry() const;
  // Canonical "section.key = value" lines, sorted; the config hash covers this text.
  std::string canonical() const;
  std::string hash() const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");
ExperimentConfig load_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& cfg);

}  // namespace awaken::cli
