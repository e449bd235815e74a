#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "awaken/fusion.hpp"
#include "support.hpp"

using namespace awaken;

namespace {

VideoLatent from_frames(const std::vector<std::vector<double>>& frames) {
  const std::size_t n = frames.front().size();
  Tensor t({frames.size(), 1, 1, n});
  for (std::size_t l = 0; l < frames.size(); ++l)
    for (std::size_t i = 0; i < n; ++i) t[l * n + i] = frames[l][i];
  return VideoLatent(std::move(t));
}

VideoLatent reversed(const VideoLatent& v) {
  VideoLatent out = v;
  for (std::size_t l = 0; l < v.frames(); ++l) out.set_frame(l, v.frame_latent(v.frames() - 1 - l));
  return out;
}

// Pair with per-frame norms equal to `r` and a chosen per-frame angle.
std::pair<VideoLatent, VideoLatent> equal_norm_pair(std::uint64_t seed, std::size_t L, std::size_t d, double r) {
  CounterRng rng(seed, "pair");
  VideoLatent a(rng.normal_tensor({L, 1, 1, d})), b(rng.normal_tensor({L, 1, 1, d}));
  for (auto* v : {&a, &b})
    for (std::size_t l = 0; l < L; ++l) {
      auto f = v->frame(l);
      const double n = norm(f);
      for (double& x : f) x *= r / n;
    }
  return {a, b};
}

const FusionConfig kPerFrame{FusionMode::Slerp, AngleScope::PerFrame, 1e-6};

}  // namespace

TEST(BetaSchedule, Values) {
  const auto b = beta_schedule(16);
  EXPECT_EQ(b[0], 0.0);
  EXPECT_EQ(b[15], 1.0);
  EXPECT_DOUBLE_EQ(b[5], 1.0 / 3.0);
  EXPECT_EQ(beta_schedule(2), (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(beta_schedule(1), (std::vector<double>{0.0}));
  EXPECT_THROW(beta_schedule(0), std::invalid_argument);
}

TEST(Slerp, IdenticalInputsReturnInputExactly) {
  const auto z = test::random_video(1, 16, 1, 4, 4);
  EXPECT_EQ(slerp_fuse(z, z), z);
  EXPECT_EQ(slerp_fuse(z, z, kPerFrame), z);
}

TEST(Slerp, EndpointsAreExact) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto a = test::random_video(2 * s, 16, 1, 4, 4);
    const auto b = test::random_video(2 * s + 1, 16, 1, 4, 4);
    for (const auto& cfg : {FusionConfig{}, kPerFrame}) {
      const auto out = slerp_fuse(a, b, cfg);
      EXPECT_EQ(out.frame_latent(0), a.frame_latent(0));
      EXPECT_EQ(out.frame_latent(15), b.frame_latent(15));
    }
  }
}

TEST(Slerp, OrthogonalUnitVectorsAtHalf) {
  const auto u = from_frames({{1, 0, 0}});
  const auto v = from_frames({{0, 1, 0}});
  const std::vector<double> half{0.5};
  for (const auto& cfg : {FusionConfig{}, kPerFrame}) {
    const auto out = slerp_fuse_with_betas(u, v, half, cfg);
    EXPECT_NEAR(out.values()[0], std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(out.values()[1], std::sqrt(0.5), 1e-15);
    EXPECT_EQ(out.values()[2], 0.0);
    EXPECT_NEAR(norm(out.values()), 1.0, 1e-15);
  }
}

TEST(Slerp, PerFrameNormPreserved) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto [a, b] = equal_norm_pair(s, 16, 32, 3.5);
    const auto out = slerp_fuse(a, b, kPerFrame);
    for (std::size_t l = 0; l < 16; ++l) EXPECT_NEAR(norm(out.frame(l)), 3.5, 1e-9);
  }
}

TEST(Slerp, NormDominatesLerp) {
  // 1000 equal-norm pairs with angles spread over (0.1, 3.0).
  std::size_t checked = 0;
  for (std::uint64_t s = 0; checked < 1000; ++s) {
    CounterRng rng(s, "dominance");
    const double theta = rng.uniform(0.1, 3.0);
    const auto [a, u] = equal_norm_pair(s, 1, 8, 1.0);
    // b = cos(theta) a + sin(theta) w, w the unit component of u orthogonal to a.
    std::vector<double> w(8);
    const double p = dot(a.values(), u.values());
    for (std::size_t i = 0; i < 8; ++i) w[i] = u.values()[i] - p * a.values()[i];
    const double wn = norm(w);
    std::vector<double> bv(8);
    for (std::size_t i = 0; i < 8; ++i) bv[i] = std::cos(theta) * a.values()[i] + std::sin(theta) * w[i] / wn;
    VideoLatent za(Tensor({3, 1, 1, 8})), zb(Tensor({3, 1, 1, 8}));
    for (std::size_t l = 0; l < 3; ++l)
      for (std::size_t i = 0; i < 8; ++i) {
        za.frame(l)[i] = a.values()[i];
        zb.frame(l)[i] = bv[i];
      }
    const auto sl = slerp_fuse(za, zb, kPerFrame);
    const auto un = uniform_fuse(za, zb);
    for (std::size_t l = 0; l < 3; ++l) ASSERT_GE(norm(sl.frame(l)) + 1e-12, norm(un.frame(l))) << theta;
    ++checked;
  }
}

TEST(Slerp, SwappingOperandsMirrorsWeights) {
  const auto a = test::random_video(5, 8, 1, 3, 3);
  const auto b = test::random_video(6, 8, 1, 3, 3);
  auto betas = beta_schedule(8);
  std::reverse(betas.begin(), betas.end());
  for (const auto& cfg : {FusionConfig{}, kPerFrame}) {
    const auto lhs = slerp_fuse_with_betas(a, b, betas, cfg);
    const auto rhs = slerp_fuse(b, a, cfg);
    for (std::size_t i = 0; i < lhs.values().size(); ++i) EXPECT_NEAR(lhs.values()[i], rhs.values()[i], 1e-12);
    const auto mirrored = reversed(slerp_fuse(reversed(b), reversed(a), cfg));
    const auto direct = slerp_fuse(a, b, cfg);
    for (std::size_t i = 0; i < direct.values().size(); ++i) EXPECT_NEAR(mirrored.values()[i], direct.values()[i], 1e-12);
  }
}

TEST(Slerp, SmallAngleFallsBackToLerp) {
  const auto a = from_frames({{1, 0}, {1, 0}, {1, 0}});
  const auto b = from_frames({{1, 1e-9}, {1, 1e-9}, {1, 1e-9}});
  const auto out = slerp_fuse(a, b);
  EXPECT_DOUBLE_EQ(out.values()[3], 0.5e-9);
}

TEST(Slerp, GlobalAngleUsesWholeLatent) {
  // Frames orthogonal within themselves but the whole vectors nearly aligned:
  // Global weights stay close to lerp, PerFrame weights follow the pi/2 angle.
  const auto a = from_frames({{1, 0}, {1, 0}, {5, 0}});
  const auto b = from_frames({{1, 0}, {0, 1}, {5, 0}});
  const auto g = slerp_fuse(a, b);
  const auto p = slerp_fuse(a, b, kPerFrame);
  EXPECT_NEAR(p.values()[2], std::sqrt(0.5), 1e-12);
  EXPECT_LT(std::abs(g.values()[2] - 0.5), std::abs(p.values()[2] - 0.5));
}

TEST(Slerp, AntipodalAndZeroRejected) {
  const auto a = from_frames({{1, 0}, {1, 0}});
  const auto neg = from_frames({{-1, 0}, {-1, 0}});
  EXPECT_THROW(slerp_fuse(a, neg), std::domain_error);
  const auto zero = from_frames({{0, 0}, {0, 0}});
  EXPECT_THROW(slerp_fuse(a, zero), std::invalid_argument);
  EXPECT_THROW(slerp_fuse(a, from_frames({{1, 0}, {1, 0}, {1, 0}})), std::invalid_argument);
}

TEST(Uniform, HalfwayExampleShrinksNorm) {
  const auto zr = from_frames({{2, 0}, {2, 0}, {2, 0}});
  const auto zs = from_frames({{0, 2}, {0, 2}, {0, 2}});
  const auto out = uniform_fuse(zr, zs);
  EXPECT_EQ(out.values()[2], 1.0);
  EXPECT_EQ(out.values()[3], 1.0);
  EXPECT_NEAR(norm(out.frame(1)), std::sqrt(2.0), 1e-15);
}

TEST(Uniform, EndpointsAndIdentity) {
  const auto a = test::random_video(1, 5, 1, 2, 2);
  const auto b = test::random_video(2, 5, 1, 2, 2);
  const auto out = uniform_fuse(a, b);
  EXPECT_EQ(out.frame_latent(0), a.frame_latent(0));
  EXPECT_EQ(out.frame_latent(4), b.frame_latent(4));
  EXPECT_EQ(uniform_fuse(a, a), a);
}

TEST(Fuse, DispatchesOnMode) {
  const auto a = test::random_video(1, 4, 1, 2, 2);
  const auto b = test::random_video(2, 4, 1, 2, 2);
  EXPECT_EQ(fuse(a, b, {FusionMode::Uniform}), uniform_fuse(a, b));
  EXPECT_EQ(fuse(a, b, {}), slerp_fuse(a, b));
  EXPECT_EQ(parse_fusion_mode("SLERP"), FusionMode::Slerp);
  EXPECT_EQ(parse_angle_scope("per_frame"), AngleScope::PerFrame);
  EXPECT_THROW(parse_fusion_mode("cubic"), std::invalid_argument);
}
