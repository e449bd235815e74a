#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "awaken/latent.hpp"

namespace awaken {

enum class PatternShape { Blob, Square };

std::string_view pattern_shape_name(PatternShape s);
PatternShape parse_pattern_shape(std::string_view name);

struct DatasetParams {
  std::size_t channels = 1;
  std::size_t height = 16;
  std::size_t width = 16;
  std::size_t frames = 16;
  PatternShape shape = PatternShape::Blob;
  double pattern_size = 2.5;  // blob sigma, or square half-side
  double velocity_min = 0.1;  // cells (or size units for grow) per frame
  double velocity_max = 0.3;
  std::vector<Motion> motions{kAllMotions.begin(), kAllMotions.end()};
};

void validate(const DatasetParams& p);

struct PatternSpec {
  double x0 = 0.0;
  double y0 = 0.0;
  double size = 2.5;
  Motion motion = Motion::Static;
  double velocity = 0.0;
};

// Pixel intensities in [0, 1] on the torus, mapped to latents by 2v - 1.
FrameLatent render_pattern(const DatasetParams& p, double cx, double cy, double size);
VideoLatent render_video(const DatasetParams& p, const PatternSpec& spec);

struct MotionSample {
  VideoLatent video;
  Condition cond;  // first frame plus label
  PatternSpec spec;
};

struct MotionDataset {
  DatasetParams params;
  std::vector<MotionSample> samples;
};

// Sample i depends only on (seed, i).
MotionSample generate_sample(const DatasetParams& p, std::uint64_t seed, std::size_t index);
MotionDataset generate_dataset(std::size_t n, const DatasetParams& p, std::uint64_t seed);

}  // namespace awaken
