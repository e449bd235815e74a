#include "awaken/fusion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace awaken {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// x + beta (y - x): exact at beta = 0, and returns x when y == x.
void lerp_into(std::span<const double> x, std::span<const double> y, double beta, std::span<double> out) {
  if (beta == 1.0) {
    std::copy(y.begin(), y.end(), out.begin());
    return;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + beta * (y[i] - x[i]);
}

void slerp_into(std::span<const double> x, std::span<const double> y, double beta, double theta, double eps,
                std::span<double> out) {
  if (beta == 0.0) {
    std::copy(x.begin(), x.end(), out.begin());
    return;
  }
  if (beta == 1.0) {
    std::copy(y.begin(), y.end(), out.begin());
    return;
  }
  if (theta < eps) {
    lerp_into(x, y, beta, out);
    return;
  }
  const double s = std::sin(theta);
  const double c1 = std::sin((1.0 - beta) * theta) / s;
  const double c2 = std::sin(beta * theta) / s;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c1 * x[i] + c2 * y[i];
}

double checked_angle(std::span<const double> a, std::span<const double> b, const FusionConfig& cfg,
                     const std::string& where) {
  double theta;
  try {
    theta = angle_between(a, b);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("slerp_fuse: zero-norm operand (" + where + ")");
  }
  if (theta > std::numbers::pi - cfg.epsilon_theta) {
    throw std::domain_error("slerp_fuse: operands are antipodal (" + where + "), great circle undefined");
  }
  return theta;
}

}  // namespace

std::string_view fusion_mode_name(FusionMode m) { return m == FusionMode::Slerp ? "slerp" : "uniform"; }

FusionMode parse_fusion_mode(std::string_view name) {
  const std::string s = lower(name);
  if (s == "slerp") return FusionMode::Slerp;
  if (s == "uniform" || s == "lerp") return FusionMode::Uniform;
  throw std::invalid_argument("unknown fusion mode '" + std::string(name) + "'");
}

std::string_view angle_scope_name(AngleScope s) { return s == AngleScope::Global ? "global" : "per_frame"; }

AngleScope parse_angle_scope(std::string_view name) {
  const std::string s = lower(name);
  if (s == "global") return AngleScope::Global;
  if (s == "per_frame" || s == "perframe") return AngleScope::PerFrame;
  throw std::invalid_argument("unknown angle scope '" + std::string(name) + "'");
}

void validate(const FusionConfig& cfg) {
  if (!(cfg.epsilon_theta > 0)) throw std::invalid_argument("fusion.epsilon_theta must be positive");
}

std::vector<double> beta_schedule(std::size_t frames) {
  if (frames == 0) throw std::invalid_argument("beta_schedule: frame count must be >= 1");
  if (frames == 1) return {0.0};
  std::vector<double> b(frames);
  for (std::size_t l = 0; l < frames; ++l) b[l] = static_cast<double>(l) / static_cast<double>(frames - 1);
  return b;
}

VideoLatent slerp_fuse_with_betas(const VideoLatent& zr, const VideoLatent& zs, std::span<const double> betas,
                                  const FusionConfig& cfg) {
  validate(cfg);
  require_same_shape(zr.tensor(), zs.tensor(), "slerp_fuse");
  if (betas.size() != zr.frames()) throw std::invalid_argument("slerp_fuse: one beta per frame required");
  VideoLatent out(zr.frames(), zr.channels(), zr.height(), zr.width());
  double theta = 0.0;
  if (cfg.angle_scope == AngleScope::Global) theta = checked_angle(zr.values(), zs.values(), cfg, "global");
  for (std::size_t l = 0; l < zr.frames(); ++l) {
    if (cfg.angle_scope == AngleScope::PerFrame) {
      theta = checked_angle(zr.frame(l), zs.frame(l), cfg, "frame " + std::to_string(l));
    }
    slerp_into(zr.frame(l), zs.frame(l), betas[l], theta, cfg.epsilon_theta, out.frame(l));
  }
  require_finite(out.tensor(), "slerp_fuse");
  return out;
}

VideoLatent slerp_fuse(const VideoLatent& zr, const VideoLatent& zs, const FusionConfig& cfg) {
  const auto betas = beta_schedule(zr.frames());
  return slerp_fuse_with_betas(zr, zs, betas, cfg);
}

VideoLatent uniform_fuse(const VideoLatent& zr, const VideoLatent& zs) {
  require_same_shape(zr.tensor(), zs.tensor(), "uniform_fuse");
  const auto betas = beta_schedule(zr.frames());
  VideoLatent out(zr.frames(), zr.channels(), zr.height(), zr.width());
  for (std::size_t l = 0; l < zr.frames(); ++l) lerp_into(zr.frame(l), zs.frame(l), betas[l], out.frame(l));
  return out;
}

VideoLatent fuse(const VideoLatent& zr, const VideoLatent& zs, const FusionConfig& cfg) {
  return cfg.mode == FusionMode::Slerp ? slerp_fuse(zr, zs, cfg) : uniform_fuse(zr, zs);
}

}  // namespace awaken
