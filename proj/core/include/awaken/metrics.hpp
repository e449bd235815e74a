#pragma once

#include <span>
#include <string>
#include <vector>

#include "awaken/latent.hpp"
#include "awaken/linalg.hpp"

namespace awaken {

// Mean squared difference between consecutive frames; 0 for a single frame.
double motion_energy(const VideoLatent& v);

// MSE between the first output frame and the conditioning image.
double fidelity(const VideoLatent& v, const FrameLatent& image);

// Average per-frame (dx, dy, dscale) of the dominant pattern.
MotionVector estimate_displacement(const VideoLatent& v);

// Layout: L frame means, L frame energies, mean |frame difference|, dx, dy, dscale.
std::vector<double> video_features(const VideoLatent& v);
std::size_t video_feature_size(std::size_t frames);
std::vector<std::string> video_feature_names(std::size_t frames);

struct FeatureStats {
  std::vector<double> mean;
  Matrix covariance;
  std::size_t n = 0;

  static FeatureStats from_samples(const std::vector<std::vector<double>>& samples);
};

void validate(const FeatureStats& s);

// 2-Wasserstein distance between the Gaussian fits (not squared).
double frechet_distance(const FeatureStats& a, const FeatureStats& b);

double alignment_score(const VideoLatent& v, Motion motion);

struct Linearity {
  double variance_ratio = 0.0;
  double monotonicity = 0.0;  // |Spearman rho| of first-axis projections vs frame index
  bool degenerate = false;
};

Linearity linearity_score(const VideoLatent& v);

struct MetricReport {
  double frechet = 0.0;
  double alignment = 0.0;
  Linearity linearity;
  double motion_energy = 0.0;
  double fidelity = 0.0;
};

}  // namespace awaken
