#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace awaken::test {

VideoLatent CleanVideoOracle::predict_noise(const VideoLatent& z_t, const Condition&, int t) const {
  const double ab = sched_.alpha_bar(t);
  VideoLatent eps = z_t;
  auto e = eps.values();
  auto z0 = z0_.values();
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = (e[i] - std::sqrt(ab) * z0[i]) / std::sqrt(1.0 - ab);
  return eps;
}

Matrix random_orthogonal(std::size_t d, CounterRng& rng) {
  Matrix q(d, d);
  for (auto& x : q.storage()) x = rng.normal();
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double p = 0;
      for (std::size_t i = 0; i < d; ++i) p += q(i, j) * q(i, k);
      for (std::size_t i = 0; i < d; ++i) q(i, j) -= p * q(i, k);
    }
    double n = 0;
    for (std::size_t i = 0; i < d; ++i) n += q(i, j) * q(i, j);
    for (std::size_t i = 0; i < d; ++i) q(i, j) /= std::sqrt(n);
  }
  return q;
}

Matrix conjugate(const Matrix& q, const std::vector<double>& v) {
  Matrix d(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d(i, i) = v[i];
  return q * d * q.transposed();
}

// Along each shared eigenaxis the optimal coupling is the monotone one, so
// sorted samples are paired.
double mc_w2(const std::vector<double>& ma, const std::vector<double>& va, const std::vector<double>& mb,
             const std::vector<double>& vb, const Matrix& q, std::size_t n, std::uint64_t seed) {
  const std::size_t d = ma.size();
  CounterRng rng(seed, "mc-w2");
  std::vector<std::vector<double>> xa(d, std::vector<double>(n)), xb(d, std::vector<double>(n));
  std::vector<double> sample(d), g(d);
  auto draw = [&](const std::vector<double>& m, const std::vector<double>& v, std::vector<std::vector<double>>& out,
                  std::size_t s) {
    // x = m + Q diag(sqrt v) g, then project back onto Q's axes.
    for (std::size_t k = 0; k < d; ++k) g[k] = rng.normal() * std::sqrt(v[k]);
    for (std::size_t i = 0; i < d; ++i) {
      sample[i] = m[i];
      for (std::size_t k = 0; k < d; ++k) sample[i] += q(i, k) * g[k];
    }
    for (std::size_t k = 0; k < d; ++k) {
      double proj = 0;
      for (std::size_t i = 0; i < d; ++i) proj += q(i, k) * sample[i];
      out[k][s] = proj;
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    draw(ma, va, xa, s);
    draw(mb, vb, xb, s);
  }
  double w2 = 0;
  for (std::size_t k = 0; k < d; ++k) {
    std::sort(xa[k].begin(), xa[k].end());
    std::sort(xb[k].begin(), xb[k].end());
    for (std::size_t s = 0; s < n; ++s) w2 += (xa[k][s] - xb[k][s]) * (xa[k][s] - xb[k][s]);
  }
  return std::sqrt(w2 / static_cast<double>(n));
}

std::vector<std::size_t> gradient_picks(const ToyDenoiser& m, std::size_t count, std::uint64_t seed) {
  CounterRng rng(seed, "gradcheck");
  std::vector<std::size_t> picks;
  for (const auto& b : m.blocks()) picks.push_back(b.offset + rng.below(shape_size(b.shape)));
  while (picks.size() < count) picks.push_back(rng.below(m.parameter_count()));
  return picks;
}

std::vector<GradientCheck> check_gradient(ToyDenoiser& m, std::span<const TrainingExample> batch,
                                          const std::vector<std::size_t>& picks, double h) {
  std::vector<double> grad;
  m.loss_and_gradient(batch, grad);
  std::vector<GradientCheck> out;
  for (std::size_t idx : picks) {
    const double orig = m.parameters()[idx];
    m.parameters()[idx] = orig + h;
    const double up = m.loss(batch);
    m.parameters()[idx] = orig - h;
    const double down = m.loss(batch);
    m.parameters()[idx] = orig;
    const double numeric = (up - down) / (2 * h);
    const double rel = std::abs(numeric - grad[idx]) / std::max({std::abs(numeric), std::abs(grad[idx]), 1e-6});
    out.push_back({idx, grad[idx], numeric, rel});
  }
  return out;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("latent_awaken_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace awaken::test
