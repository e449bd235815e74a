#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "awaken/linalg.hpp"
#include "awaken/ltn1.hpp"
#include "awaken/rng.hpp"
#include "awaken/tensor.hpp"
#include "support.hpp"

using namespace awaken;

namespace {

std::vector<double> vec(std::initializer_list<double> xs) { return xs; }

Matrix random_rotation(std::size_t d, std::uint64_t seed) {
  // Gram-Schmidt on a Gaussian matrix.
  CounterRng rng(seed, "rotation");
  Matrix q(d, d);
  for (auto& x : q.storage()) x = rng.normal();
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double p = 0.0;
      for (std::size_t i = 0; i < d; ++i) p += q(i, j) * q(i, k);
      for (std::size_t i = 0; i < d; ++i) q(i, j) -= p * q(i, k);
    }
    double n = 0.0;
    for (std::size_t i = 0; i < d; ++i) n += q(i, j) * q(i, j);
    for (std::size_t i = 0; i < d; ++i) q(i, j) /= std::sqrt(n);
  }
  return q;
}

}  // namespace

TEST(Dot, HandComputedValues) {
  EXPECT_EQ(dot(vec({1, 0}), vec({0, 1})), 0.0);
  EXPECT_EQ(dot(vec({1, 2, 3}), vec({4, 5, 6})), 32.0);
  const auto x = vec({0.5, -2.0, 3.25});
  EXPECT_DOUBLE_EQ(dot(x, x), norm(x) * norm(x));
}

TEST(Dot, SymmetricAndBilinear) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    CounterRng rng(s);
    Tensor a = rng.normal_tensor({37}), b = rng.normal_tensor({37}), c = rng.normal_tensor({37});
    const double k = rng.uniform(-3, 3);
    EXPECT_EQ(dot(a, b), dot(b, a));
    Tensor lin = a;
    lin *= k;
    lin += c;
    EXPECT_NEAR(dot(lin, b), k * dot(a, b) + dot(c, b), 1e-10);
  }
}

TEST(Dot, LengthMismatchThrows) { EXPECT_THROW(dot(vec({1, 2}), vec({1, 2, 3})), std::invalid_argument); }

TEST(AngleBetween, ReferenceAngles) {
  const auto v = vec({0.3, -1.2, 4.0});
  EXPECT_NEAR(angle_between(v, v), 0.0, 1e-7);
  EXPECT_NEAR(angle_between(vec({1, 0}), vec({0, 1})), std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(angle_between(vec({1, 0}), vec({-1, 0})), std::numbers::pi, 1e-15);
}

TEST(AngleBetween, PositiveScalingGivesZero) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    CounterRng rng(s);
    Tensor a = rng.normal_tensor({64});
    Tensor b = a;
    b *= rng.uniform(1e-3, 1e3);
    EXPECT_NEAR(angle_between(a, b), 0.0, 1e-7);
  }
}

TEST(AngleBetween, ZeroVectorRejected) {
  EXPECT_THROW(angle_between(vec({0, 0}), vec({1, 0})), std::invalid_argument);
}

TEST(Tensor, RejectsNonFiniteAndBadSizes) {
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>{1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(Tensor({2}, std::vector<double>{1, NAN}), std::domain_error);
  Tensor a({3}, 1.0);
  EXPECT_THROW(a += Tensor({4}), std::invalid_argument);
}

TEST(Ltn1, RoundTripIsBitExact) {
  CounterRng rng(3);
  const Tensor t = rng.normal_tensor({2, 3, 5});
  EXPECT_EQ(decode_ltn1(encode_ltn1(t)), t);
  const auto dir = test::scratch_dir("ltn1");
  write_ltn1(dir / "t.ltn1", t);
  EXPECT_EQ(read_ltn1(dir / "t.ltn1"), t);
  EXPECT_TRUE(has_ltn1_magic(dir / "t.ltn1"));
}

TEST(Ltn1, CorruptMagicNamesTheFile) {
  auto bytes = encode_ltn1(Tensor({2}, 1.0));
  bytes[0] = 'X';
  try {
    decode_ltn1(bytes, "broken.ltn1");
    FAIL() << "expected FileFormatError";
  } catch (const FileFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("broken.ltn1"), std::string::npos);
  }
}

TEST(Ltn1, TruncatedInputRejected) {
  auto bytes = encode_ltn1(Tensor({4}, 1.0));
  bytes.resize(bytes.size() - 3);
  EXPECT_THROW(decode_ltn1(bytes, "short.ltn1"), FileFormatError);
}

TEST(Jacobi, ReconstructsRandomSymmetricMatrices) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::size_t d = 3 + s * 3;
    CounterRng rng(s, "jacobi");
    Matrix a(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) a(i, j) = a(j, i) = rng.normal();
    const auto eig = jacobi_eigen(a);
    for (std::size_t k = 1; k < d; ++k) EXPECT_GE(eig.values[k - 1], eig.values[k]);
    Matrix lam(d, d);
    for (std::size_t k = 0; k < d; ++k) lam(k, k) = eig.values[k];
    const Matrix back = eig.vectors * lam * eig.vectors.transposed();
    for (std::size_t i = 0; i < d * d; ++i) EXPECT_NEAR(back.storage()[i], a.storage()[i], 1e-10);
  }
}

TEST(SqrtPsd, SquaresBack) {
  CounterRng rng(11);
  Matrix b(6, 6);
  for (auto& x : b.storage()) x = rng.normal();
  const Matrix a = b * b.transposed();
  const Matrix r = sqrt_psd(a);
  const Matrix rr = r * r;
  for (std::size_t i = 0; i < 36; ++i) EXPECT_NEAR(rr.storage()[i], a.storage()[i], 1e-9);
}

TEST(SqrtPsd, IndefiniteThrows) {
  Matrix a = Matrix::identity(2);
  a(1, 1) = -1.0;
  EXPECT_THROW(sqrt_psd(a), std::domain_error);
}

TEST(PrincipalAxis, CollinearPointsGiveRatioOne) {
  Matrix pts(6, 3);
  for (std::size_t i = 0; i < 6; ++i) {
    pts(i, 0) = 1.0 + 2.0 * i;
    pts(i, 1) = -0.5 * i;
    pts(i, 2) = 3.0 * i;
  }
  const auto pa = principal_axis_stats(pts);
  EXPECT_FALSE(pa.degenerate);
  EXPECT_NEAR(pa.variance_ratio, 1.0, 1e-12);
}

TEST(PrincipalAxis, IsotropicCloudIsNearHalf) {
  CounterRng rng(2024, "iso");
  Matrix pts(10000, 2);
  for (auto& x : pts.storage()) x = rng.normal();
  // Oracle: eigenvalues of the 2x2 sample covariance in closed form.
  const Matrix c = sample_covariance(pts);
  const double tr = c(0, 0) + c(1, 1);
  const double det = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
  const double l1 = tr / 2 + std::sqrt(tr * tr / 4 - det);
  const auto pa = principal_axis_stats(pts);
  EXPECT_NEAR(pa.variance_ratio, l1 / tr, 1e-9);
  EXPECT_NEAR(pa.variance_ratio, 0.5, 0.02);
}

TEST(PrincipalAxis, RepeatedPointIsDegenerate) {
  Matrix pts(5, 4, 0.75);
  const auto pa = principal_axis_stats(pts);
  EXPECT_TRUE(pa.degenerate);
  EXPECT_EQ(pa.variance_ratio, 0.0);
}

TEST(PrincipalAxis, RatioInvariantUnderRotation) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const std::size_t d = 8;
    CounterRng rng(s, "cloud");
    Matrix pts(30, d);
    for (std::size_t i = 0; i < 30; ++i)
      for (std::size_t j = 0; j < d; ++j) pts(i, j) = rng.normal() * (1.0 + j);
    const Matrix rotated = pts * random_rotation(d, s);
    EXPECT_NEAR(principal_axis_stats(pts).variance_ratio, principal_axis_stats(rotated).variance_ratio, 1e-9);
  }
}

TEST(PrincipalAxis, GramPathMatchesCovariancePath) {
  // d > N takes the Gram route; padding with zero columns must not change the answer.
  CounterRng rng(9);
  Matrix small(6, 4), wide(6, 40);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 4; ++j) small(i, j) = wide(i, j) = rng.normal();
  const auto a = principal_axis_stats(small);
  const auto b = principal_axis_stats(wide);
  EXPECT_NEAR(a.variance_ratio, b.variance_ratio, 1e-10);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(a.projections[i], b.projections[i], 1e-9);
}

TEST(Ranks, TiesAveraged) {
  const auto r = average_ranks(vec({10, 20, 20, 5}));
  EXPECT_EQ(r, vec({2, 3.5, 3.5, 1}));
}

TEST(Spearman, MonotoneTransformsGiveOne) {
  EXPECT_NEAR(spearman_correlation(vec({1, 2, 3, 4}), vec({1, 8, 27, 64})), 1.0, 1e-15);
  EXPECT_NEAR(spearman_correlation(vec({1, 2, 3, 4}), vec({4, 3, 2, 1})), -1.0, 1e-15);
}

TEST(CounterRng, SameSeedSameStream) {
  CounterRng a(42, "x"), b(42, "x"), c(42, "y");
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    EXPECT_NE(va, c.next_u64());
  }
}

TEST(CounterRng, DerivedStreamsIgnoreParentPosition) {
  CounterRng a(7);
  const auto before = a.derive("child").next_u64();
  a.next_u64();
  EXPECT_EQ(a.derive("child").next_u64(), before);
}

TEST(CounterRng, NormalMoments) {
  CounterRng rng(5, "moments");
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(CounterRng, BelowStaysInRange) {
  CounterRng rng(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[rng.below(7)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(NoiseStream, CountsDraws) {
  NoiseStream s(CounterRng(1));
  s.draw({3});
  s.draw({2, 2});
  EXPECT_EQ(s.draws(), 2u);
}
