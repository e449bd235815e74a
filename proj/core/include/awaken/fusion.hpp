#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "awaken/latent.hpp"

namespace awaken {

enum class FusionMode { Slerp, Uniform };
enum class AngleScope { Global, PerFrame };

std::string_view fusion_mode_name(FusionMode m);
FusionMode parse_fusion_mode(std::string_view name);
std::string_view angle_scope_name(AngleScope s);
AngleScope parse_angle_scope(std::string_view name);

struct FusionConfig {
  FusionMode mode = FusionMode::Slerp;
  AngleScope angle_scope = AngleScope::Global;
  double epsilon_theta = 1e-6;  // below this angle the slerp weights fall back to lerp
};

void validate(const FusionConfig& cfg);

// beta_l = l / (L - 1); a single frame gives [0].
std::vector<double> beta_schedule(std::size_t frames);

// Frame l mixes real frame l and proxy frame l with weights from beta_l.
VideoLatent slerp_fuse(const VideoLatent& zr, const VideoLatent& zs, const FusionConfig& cfg = {});
VideoLatent slerp_fuse_with_betas(const VideoLatent& zr, const VideoLatent& zs, std::span<const double> betas,
                                  const FusionConfig& cfg = {});
VideoLatent uniform_fuse(const VideoLatent& zr, const VideoLatent& zs);

// Dispatches on cfg.mode.
VideoLatent fuse(const VideoLatent& zr, const VideoLatent& zs, const FusionConfig& cfg);

}  // namespace awaken
