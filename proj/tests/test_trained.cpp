#include <gtest/gtest.h>

#include <memory>

#include "awaken/dataset.hpp"
#include "awaken/metrics.hpp"
#include "awaken/pipeline.hpp"
#include "awaken/toy_denoiser.hpp"
#include "awaken/training.hpp"
#include "support.hpp"

// Properties that need a denoiser trained on moving or on static patterns.
// A reduced geometry keeps training to a few seconds.

using namespace awaken;

namespace {

DatasetParams params(std::vector<Motion> motions) {
  DatasetParams p;
  p.height = p.width = 8;
  p.frames = 6;
  p.pattern_size = 1.5;
  p.motions = std::move(motions);
  return p;
}

std::unique_ptr<ToyDenoiser> trained(const DatasetParams& p) {
  auto m = std::make_unique<ToyDenoiser>(VideoGeometry{p.frames, 1, p.height, p.width}, NoiseSchedule::cosine(100),
                                         ToyDenoiserConfig{.hidden = 32, .lowpass_modes = 2});
  m->initialize(42);
  TrainOptions opt;
  opt.epochs = 16;
  opt.batch_size = 16;
  opt.learning_rate = 3e-3;
  train(*m, generate_dataset(1200, p, 1), opt);
  return m;
}

class Trained : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    moving_ = trained(params({kAllMotions.begin(), kAllMotions.end()})).release();
    static_ = trained(params({Motion::Static})).release();
  }
  static void TearDownTestSuite() {
    delete moving_;
    delete static_;
  }

  // Held-out images with moving labels.
  static std::vector<MotionSample> held_out(std::size_t n) {
    return generate_dataset(n, params({kMovingMotions.begin(), kMovingMotions.end()}), 777).samples;
  }

  static PipelineConfig config() {
    PipelineConfig c;
    c.frames = 6;
    return c;
  }

  static ToyDenoiser* moving_;
  static ToyDenoiser* static_;
};

ToyDenoiser* Trained::moving_ = nullptr;
ToyDenoiser* Trained::static_ = nullptr;

double frame_mse(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace

TEST_F(Trained, VsdsInjectsMotionIntoStaticInput) {
  std::size_t moved = 0;
  const auto items = held_out(20);
  for (const auto& s : items) {
    const auto z = replicate_static(s.cond.image, 6);
    NoiseStream noise(CounterRng(42).derive("vsds/real"));
    const auto out = vsds_refine(z, s.cond, *moving_, moving_->schedule(), VsdsConfig{}, noise);
    EXPECT_EQ(motion_energy(z), 0.0);
    moved += motion_energy(out) > 1e-6;
  }
  EXPECT_EQ(moved, items.size());
}

TEST_F(Trained, FusedVariantsKeepFirstFrameFaithful) {
  const SyntheticProvider prov;
  // Fusion pins frame 0 to the real path; V and Baseline have no such anchor.
  for (PipelineVariant v : {PipelineVariant::S, PipelineVariant::VU, PipelineVariant::VS}) {
    std::size_t ok = 0;
    const auto items = held_out(20);
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& s = items[i];
      const auto r = animate(s.cond.image, s.cond.motion, v, *moving_, moving_->schedule(), config(), prov, 42 + i);
      ok += frame_mse(r.output.frame(0), s.cond.image.values()) < frame_mse(r.output.frame(5), s.cond.image.values());
    }
    EXPECT_EQ(ok, items.size()) << variant_name(v);
  }
}

TEST_F(Trained, BaselineOnStaticOnlyModelStaysStatic) {
  const auto items = held_out(10);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto r = animate(items[i].cond.image, items[i].cond.motion, PipelineVariant::Baseline, *static_,
                           static_->schedule(), config(), SyntheticProvider{}, 42 + i);
    EXPECT_LT(motion_energy(r.output), 1e-3);
  }
}

TEST_F(Trained, SingleStaticItemBaselineHasNearZeroMotion) {
  auto p = params({Motion::Static});
  const auto s = generate_sample(p, 9, 0);
  const std::vector<BenchmarkItem> bench{{0, s.cond.image, Motion::Static, s.video, 42}};
  const auto rows = run_ablation(bench, variant_settings({PipelineVariant::Baseline}, config()), *moving_,
                                 moving_->schedule(), SyntheticProvider{});
  ASSERT_EQ(rows[0].failures, 0u);
  EXPECT_LT(rows[0].metrics.motion_energy, 1e-3);
}

TEST_F(Trained, VsBeatsBaselineOnMotionEnergy) {
  const auto items = held_out(10);
  double vs = 0, base = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& s = items[i];
    for (auto [v, acc] : {std::pair{PipelineVariant::VS, &vs}, std::pair{PipelineVariant::Baseline, &base}}) {
      *acc += motion_energy(
          animate(s.cond.image, s.cond.motion, v, *moving_, moving_->schedule(), config(), SyntheticProvider{}, 42 + i)
              .output);
    }
  }
  EXPECT_GT(vs, 10 * base);
}
