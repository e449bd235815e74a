#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "awaken/checkpoint.hpp"
#include "awaken/dataset.hpp"
#include "awaken/ltn1.hpp"
#include "awaken/metrics.hpp"
#include "awaken/pattern.hpp"
#include "awaken/toy_denoiser.hpp"
#include "awaken/training.hpp"
#include "support.hpp"

using namespace awaken;

namespace {

DatasetParams small_params() {
  DatasetParams p;
  p.height = 8;
  p.width = 8;
  p.frames = 4;
  p.pattern_size = 1.5;
  return p;
}

VideoGeometry geometry_of(const DatasetParams& p) { return {p.frames, p.channels, p.height, p.width}; }

// Random values in every block so no gradient is trivially zero.
void scramble(ToyDenoiser& m, std::uint64_t seed, double scale) {
  CounterRng rng(seed, "scramble");
  for (double& x : m.parameters()) x = scale * rng.normal();
}

}  // namespace

TEST(Dataset, StaticVideosHaveIdenticalFrames) {
  DatasetParams p = small_params();
  p.motions = {Motion::Static};
  for (const auto& s : generate_dataset(10, p, 3).samples) {
    for (std::size_t l = 1; l < p.frames; ++l) EXPECT_EQ(s.video.frame_latent(l), s.video.frame_latent(0));
    EXPECT_EQ(s.cond.image, s.video.frame_latent(0));
  }
}

TEST(Dataset, RightMotionAtUnitVelocityShiftsCentreByOne) {
  DatasetParams p;
  p.frames = 16;
  const PatternSpec spec{3.25, 7.0, 2.5, Motion::Right, 1.0};
  const VideoLatent v = render_video(p, spec);
  for (std::size_t l = 0; l < p.frames; ++l) {
    const auto e = estimate_pattern(v.frame_latent(l));
    EXPECT_NEAR(e.cx, std::fmod(3.25 + static_cast<double>(l), 16.0), 1e-9) << l;
    EXPECT_NEAR(e.cy, 7.0, 1e-9);
  }
}

TEST(Dataset, SameSeedSameDataset) {
  const auto a = generate_dataset(20, small_params(), 5);
  const auto b = generate_dataset(20, small_params(), 5);
  const auto c = generate_dataset(20, small_params(), 6);
  bool any_diff = false;
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(a.samples[i].video, b.samples[i].video);
    any_diff |= !(a.samples[i].video == c.samples[i].video);
  }
  EXPECT_TRUE(any_diff);
}

TEST(Dataset, DisplacementRecoversLabelledMotion) {
  DatasetParams p;
  for (const auto& s : generate_dataset(60, p, 11).samples) {
    const MotionVector c = canonical_motion(s.spec.motion);
    const MotionVector d = estimate_displacement(s.video);
    EXPECT_NEAR(d.dx, c.dx * s.spec.velocity, 1e-9) << motion_name(s.spec.motion);
    EXPECT_NEAR(d.dy, c.dy * s.spec.velocity, 1e-9) << motion_name(s.spec.motion);
    EXPECT_NEAR(d.ds, c.ds * s.spec.velocity, 1e-9) << motion_name(s.spec.motion);
  }
}

TEST(Dataset, VelocitiesWithinRange) {
  for (const auto& s : generate_dataset(200, DatasetParams{}, 2).samples) {
    if (s.spec.motion == Motion::Static) continue;
    EXPECT_GE(s.spec.velocity, 0.1);
    EXPECT_LT(s.spec.velocity, 0.3);
  }
}

TEST(Dataset, LatentsInUnitRange) {
  DatasetParams p = small_params();
  p.shape = PatternShape::Square;
  for (const auto& s : generate_dataset(20, p, 9).samples)
    for (double x : s.video.values()) {
      EXPECT_GE(x, -1.0);
      EXPECT_LE(x, 1.0);
    }
}

TEST(Dataset, InvalidParamsRejected) {
  DatasetParams p = small_params();
  p.frames = 1;
  EXPECT_THROW(generate_dataset(1, p, 1), std::invalid_argument);
  p = small_params();
  p.motions.clear();
  EXPECT_THROW(generate_dataset(1, p, 1), std::invalid_argument);
  EXPECT_THROW(generate_dataset(0, small_params(), 1), std::invalid_argument);
}

TEST(Motion, LabelsParseCaseInsensitively) {
  EXPECT_EQ(parse_motion("RIGHT"), Motion::Right);
  EXPECT_EQ(parse_motion("grow"), Motion::Grow);
  EXPECT_THROW(parse_motion("spin"), std::invalid_argument);
  EXPECT_THROW(motion_from_index(6), std::invalid_argument);
  EXPECT_THROW(motion_from_index(-1), std::invalid_argument);
}

TEST(ToyDenoiser, PureAndShapePreserving) {
  const auto p = small_params();
  ToyDenoiser m(geometry_of(p), NoiseSchedule::cosine(100), {.hidden = 16});
  m.initialize(1);
  scramble(m, 2, 0.05);
  const auto s = generate_sample(p, 1, 0);
  const auto zt = forward_noise(s.video, 40, test::random_video(3, 4, 1, 8, 8), m.schedule());
  const auto a = m.predict_noise(zt, s.cond, 40);
  const auto b = m.predict_noise(zt, s.cond, 40);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.shape(), zt.shape());
}

TEST(ToyDenoiser, UntrainedModelShrinksResidualTowardCondition) {
  // Zero output layers leave only the skip path: x0 = cond + c_skip (z_t / sqrt(abar) - cond).
  const auto p = small_params();
  ToyDenoiser m(geometry_of(p), NoiseSchedule::cosine(100), {.hidden = 16, .lowpass_modes = -1});
  m.initialize(7);
  const FrameLatent img = test::random_frame(4, 1, 8, 8);
  const auto z0 = replicate_static(img, 4);
  const auto zt = forward_noise(z0, 30, test::random_video(5, 4, 1, 8, 8), m.schedule());
  const auto x0 = predict_x0(zt, m.predict_noise(zt, {img, Motion::Right}, 30), 30, m.schedule());
  const double a = m.schedule().alpha_bar(30);
  const double s2 = (1 - a) / a, sd2 = 0.25 * 0.25;
  const double c_skip = sd2 / (sd2 + s2);
  const std::size_t D = img.values().size();
  for (std::size_t i = 0; i < x0.values().size(); ++i) {
    const double c = img.values()[i % D];
    EXPECT_NEAR(x0.values()[i], c + c_skip * (zt.values()[i] / std::sqrt(a) - c), 1e-9);
  }
}

TEST(ToyDenoiser, RejectsBadInputs) {
  const auto p = small_params();
  ToyDenoiser m(geometry_of(p), NoiseSchedule::cosine(100), {.hidden = 8});
  m.initialize(1);
  const auto z = test::random_video(1, 4, 1, 8, 8);
  const Condition ok{z.frame_latent(0), Motion::Up};
  EXPECT_THROW(m.predict_noise(test::random_video(1, 3, 1, 8, 8), ok, 5), std::invalid_argument);
  EXPECT_THROW(m.predict_noise(z, {test::random_frame(1, 1, 4, 4), Motion::Up}, 5), std::invalid_argument);
  EXPECT_THROW(m.predict_noise(z, {z.frame_latent(0), static_cast<Motion>(9)}, 5), std::invalid_argument);
  EXPECT_THROW(m.predict_noise(z, ok, 0), std::out_of_range);
  EXPECT_THROW(m.predict_noise(z, ok, 101), std::out_of_range);
}

TEST(ToyDenoiser, GradientMatchesCentralDifferences) {
  const auto p = small_params();
  const auto data = generate_dataset(4, p, 21);
  ToyDenoiser m(geometry_of(p), NoiseSchedule::cosine(100), {.hidden = 12, .time_embedding = 8, .lowpass_modes = 2});
  m.initialize(3);
  scramble(m, 4, 0.1);
  const auto batch = evaluation_examples(data, m.schedule(), 8);

  const auto picks = test::gradient_picks(m, 20, 99);
  ASSERT_EQ(picks.size(), 20u);
  for (const auto& c : test::check_gradient(m, batch, picks)) {
    EXPECT_LT(c.relative_error, 1e-4) << "parameter " << c.index << " analytic " << c.analytic << " numeric "
                                      << c.numeric;
  }
}

TEST(ToyDenoiser, BlocksRoundTrip) {
  ToyDenoiser m(geometry_of(small_params()), NoiseSchedule::cosine(50), {.hidden = 8});
  m.initialize(5);
  scramble(m, 6, 1.0);
  for (const auto& b : m.blocks()) {
    Tensor t = m.block_tensor(b.name);
    EXPECT_EQ(t.shape(), b.shape);
    t *= 2.0;
    m.set_block(b.name, t);
    EXPECT_EQ(m.block_tensor(b.name), t);
  }
  EXPECT_THROW(m.block_tensor("nope"), std::invalid_argument);
  EXPECT_THROW(m.set_block("W1", Tensor({1})), std::invalid_argument);
}

TEST(ZeroPredictor, LossIsLatentSize) {
  // E ||eps||^2 = L C H W; estimate over 1000 draws.
  const auto p = small_params();
  const auto data = generate_dataset(250, p, 1);
  const auto ex = evaluation_examples(data, NoiseSchedule::cosine(100), 2, 4);
  ASSERT_EQ(ex.size(), 1000u);
  const double d = 4.0 * 8 * 8;
  EXPECT_NEAR(zero_predictor_loss(ex), d, 4 * std::sqrt(2 * d / 1000.0));
}

TEST(Training, BeatsZeroPredictorAndLossDecreases) {
  const auto p = small_params();
  const auto sched = NoiseSchedule::cosine(100);
  const auto data = generate_dataset(1600, p, 1);
  const auto held_out = generate_dataset(100, p, 1001);
  ToyDenoiser m(geometry_of(p), sched, {.hidden = 32});
  m.initialize(42);
  TrainOptions opt;
  opt.epochs = 20;
  opt.batch_size = 16;
  const auto result = train(m, data, opt);
  ASSERT_EQ(result.epoch_losses.size(), 20u);
  EXPECT_EQ(result.steps, 20u * 100u);

  const auto ex = evaluation_examples(held_out, sched, 5, 2);
  EXPECT_LT(evaluate_loss(m, ex), 0.7 * zero_predictor_loss(ex));

  // Window-10 moving average is non-increasing in at least 95% of windows.
  const auto& l = result.epoch_losses;
  std::vector<double> smooth;
  for (std::size_t i = 0; i + 10 <= l.size(); ++i) {
    double s = 0;
    for (std::size_t k = 0; k < 10; ++k) s += l[i + k];
    smooth.push_back(s / 10);
  }
  std::size_t violations = 0;
  for (std::size_t i = 1; i < smooth.size(); ++i) violations += smooth[i] > smooth[i - 1];
  EXPECT_LE(violations, static_cast<std::size_t>(0.05 * (smooth.size() - 1)));
}

TEST(Training, DeterministicForSeed) {
  const auto p = small_params();
  const auto data = generate_dataset(40, p, 1);
  auto run = [&] {
    ToyDenoiser m(geometry_of(p), NoiseSchedule::cosine(50), {.hidden = 8});
    m.initialize(42);
    TrainOptions opt;
    opt.epochs = 3;
    opt.batch_size = 8;
    train(m, data, opt);
    return std::vector<double>(m.parameters().begin(), m.parameters().end());
  };
  EXPECT_EQ(run(), run());
}

TEST(Training, DivergenceReported) {
  const auto p = small_params();
  const auto data = generate_dataset(16, p, 1);
  ToyDenoiser m(geometry_of(p), NoiseSchedule::cosine(50), {.hidden = 8});
  m.initialize(1);
  TrainOptions opt;
  opt.epochs = 50;
  opt.batch_size = 4;
  opt.learning_rate = 1e150;
  EXPECT_THROW(train(m, data, opt), TrainingDiverged);
}

TEST(Checkpoint, RoundTripPreservesPredictions) {
  const auto p = small_params();
  ScheduleParams sp;
  sp.steps = 60;
  ToyDenoiser m(geometry_of(p), NoiseSchedule::from_params(sp), {.hidden = 8});
  m.initialize(3);
  scramble(m, 8, 0.2);
  const auto dir = test::scratch_dir("ckpt");
  save_checkpoint(dir, m, sp, p, "cafebabe");
  const ToyDenoiser back = load_checkpoint(dir);
  EXPECT_TRUE(std::equal(m.parameters().begin(), m.parameters().end(), back.parameters().begin()));
  const auto s = generate_sample(p, 4, 0);
  EXPECT_EQ(m.predict_noise(s.video, s.cond, 17), back.predict_noise(s.video, s.cond, 17));

  const auto info = read_checkpoint_info(dir);
  EXPECT_EQ(info.geometry, m.geometry());
  EXPECT_EQ(info.schedule_hash, m.schedule().hash_hex());
  EXPECT_EQ(info.config.hidden, 8u);

  const auto again = test::scratch_dir("ckpt2");
  save_checkpoint(again, m, sp, p, "cafebabe");
  EXPECT_EQ(checkpoint_digest(dir), checkpoint_digest(again));
}

TEST(Checkpoint, CorruptLayerNamesTheFile) {
  const auto p = small_params();
  ScheduleParams sp;
  sp.steps = 20;
  ToyDenoiser m(geometry_of(p), NoiseSchedule::from_params(sp), {.hidden = 4});
  m.initialize(1);
  const auto dir = test::scratch_dir("ckpt_corrupt");
  save_checkpoint(dir, m, sp, p);
  {
    std::fstream f(dir / "W1.ltn1", std::ios::in | std::ios::out | std::ios::binary);
    f.write("JUNK", 4);
  }
  try {
    load_checkpoint(dir);
    FAIL() << "expected FileFormatError";
  } catch (const FileFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("W1.ltn1"), std::string::npos) << e.what();
  }
}

TEST(Checkpoint, MissingDirectoryFails) {
  EXPECT_THROW(load_checkpoint("/nonexistent/latent_awaken_ckpt"), FileFormatError);
}
