#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "awaken/dataset.hpp"
#include "awaken/toy_denoiser.hpp"

namespace awaken {

struct CheckpointInfo {
  VideoGeometry geometry;
  ToyDenoiserConfig config;
  ScheduleParams schedule;
  std::string schedule_hash;
  DatasetParams dataset;
};

// Writes one LTN1 file per parameter block plus manifest.json.
void save_checkpoint(const std::filesystem::path& dir, const ToyDenoiser& model, const ScheduleParams& schedule,
                     const DatasetParams& dataset, const std::string& config_hash = "");

CheckpointInfo read_checkpoint_info(const std::filesystem::path& dir);

// Rebuilds the model; throws if the stored schedule hash does not match.
ToyDenoiser load_checkpoint(const std::filesystem::path& dir);

// FNV-1a digest over manifest and parameter files, in name order.
std::string checkpoint_digest(const std::filesystem::path& dir);

}  // namespace awaken
