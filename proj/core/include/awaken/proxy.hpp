#pragma once

#include <filesystem>
#include <string>

#include "awaken/latent.hpp"

namespace awaken {

struct SyntheticProviderParams {
  double motion_hint_strength = 0.5;  // in [0, 1]
  double max_displacement = 6.0;      // cells at full strength
  double sharpen = 1.2;               // contrast gain, applied when strength > 0
};

void validate(const SyntheticProviderParams& p);

// Displaces the pattern along the labelled motion by round(strength * max_displacement)
// cells (toroidal roll; grow dilates the pattern radius by that amount), then sharpens.
FrameLatent synthesize_proxy(const FrameLatent& image, Motion motion, const SyntheticProviderParams& params);

// Reads an LTN1 tensor (HxW or CxHxW) or an 8-bit P5 PGM.
FrameLatent load_proxy(const std::filesystem::path& path);
// Same, and checks the shape against the run's input image.
FrameLatent load_proxy(const std::filesystem::path& path, const Shape& expected);

class ProxyProvider {
 public:
  virtual ~ProxyProvider() = default;
  virtual FrameLatent proxy_for(const FrameLatent& image, const Condition& cond) const = 0;
  virtual std::string describe() const = 0;
};

class SyntheticProvider final : public ProxyProvider {
 public:
  explicit SyntheticProvider(SyntheticProviderParams params = {});
  FrameLatent proxy_for(const FrameLatent& image, const Condition& cond) const override;
  std::string describe() const override;
  const SyntheticProviderParams& params() const noexcept { return params_; }

 private:
  SyntheticProviderParams params_;
};

class FileProvider final : public ProxyProvider {
 public:
  explicit FileProvider(std::filesystem::path path) : path_(std::move(path)) {}
  FrameLatent proxy_for(const FrameLatent& image, const Condition& cond) const override;
  std::string describe() const override;

 private:
  std::filesystem::path path_;
};

}  // namespace awaken
