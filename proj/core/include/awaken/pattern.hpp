#pragma once

#include <span>

#include "awaken/latent.hpp"

namespace awaken {

// Position and width of the dominant pattern, read from the first two
// Fourier coefficients of the row and column marginals. Uniform offsets only
// touch the zero frequency, so every field is brightness-invariant.
struct PatternEstimate {
  double cx = 0.0;        // circular centroid, [0, W)
  double cy = 0.0;        // circular centroid, [0, H)
  double spread_x = 0.0;  // Gaussian-equivalent sigma along x
  double spread_y = 0.0;
  double mag_x = 0.0;     // |first harmonic| of the x marginal
  double mag_y = 0.0;
};

PatternEstimate estimate_pattern(const FrameLatent& frame);
PatternEstimate estimate_pattern(std::span<const double> frame, std::size_t channels, std::size_t height,
                                 std::size_t width);

// Signed shortest displacement on a periodic axis of length n.
double wrap_delta(double d, double n);

}  // namespace awaken
