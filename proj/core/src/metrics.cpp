#include "awaken/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "awaken/pattern.hpp"

namespace awaken {

double motion_energy(const VideoLatent& v) {
  const std::size_t L = v.frames();
  if (L < 2) return 0.0;
  double s = 0.0;
  for (std::size_t l = 0; l + 1 < L; ++l) s += mean_squared_difference(v.frame(l + 1), v.frame(l));
  return s / static_cast<double>(L - 1);
}

double fidelity(const VideoLatent& v, const FrameLatent& image) {
  require_frame_shape(v, image, "fidelity");
  return mean_squared_difference(v.frame(0), image.values());
}

MotionVector estimate_displacement(const VideoLatent& v) {
  const std::size_t L = v.frames();
  if (L < 2) return {};
  std::vector<PatternEstimate> est(L);
  for (std::size_t l = 0; l < L; ++l) est[l] = estimate_pattern(v.frame(l), v.channels(), v.height(), v.width());
  const double floor = 1e-9 * static_cast<double>(v.frame_size());
  const double w = static_cast<double>(v.width());
  const double h = static_cast<double>(v.height());
  MotionVector m;
  for (std::size_t l = 0; l + 1 < L; ++l) {
    const auto& a = est[l];
    const auto& b = est[l + 1];
    if (a.mag_x > floor && b.mag_x > floor) m.dx += wrap_delta(b.cx - a.cx, w);
    if (a.mag_y > floor && b.mag_y > floor) m.dy += wrap_delta(b.cy - a.cy, h);
    m.ds += 0.5 * ((b.spread_x - a.spread_x) + (b.spread_y - a.spread_y));
  }
  const double n = static_cast<double>(L - 1);
  m.dx /= n;
  m.dy /= n;
  m.ds /= n;
  return m;
}

std::size_t video_feature_size(std::size_t frames) { return 2 * frames + 4; }

std::vector<std::string> video_feature_names(std::size_t frames) {
  std::vector<std::string> names;
  for (std::size_t l = 0; l < frames; ++l) names.push_back("mean_" + std::to_string(l));
  for (std::size_t l = 0; l < frames; ++l) names.push_back("energy_" + std::to_string(l));
  names.insert(names.end(), {"mean_abs_frame_diff", "disp_x", "disp_y", "disp_scale"});
  return names;
}

std::vector<double> video_features(const VideoLatent& v) {
  const std::size_t L = v.frames();
  if (L < 2) throw std::invalid_argument("video_features: need at least 2 frames");
  std::vector<double> f;
  f.reserve(video_feature_size(L));
  for (std::size_t l = 0; l < L; ++l) f.push_back(mean(v.frame(l)));
  for (std::size_t l = 0; l < L; ++l) f.push_back(dot(v.frame(l), v.frame(l)) / static_cast<double>(v.frame_size()));
  double mad = 0.0;
  for (std::size_t l = 0; l + 1 < L; ++l) {
    auto a = v.frame(l);
    auto b = v.frame(l + 1);
    for (std::size_t i = 0; i < a.size(); ++i) mad += std::abs(b[i] - a[i]);
  }
  f.push_back(mad / static_cast<double>((L - 1) * v.frame_size()));
  const MotionVector m = estimate_displacement(v);
  f.insert(f.end(), {m.dx, m.dy, m.ds});
  return f;
}

FeatureStats FeatureStats::from_samples(const std::vector<std::vector<double>>& samples) {
  if (samples.empty()) throw std::invalid_argument("FeatureStats: no samples");
  const std::size_t d = samples.front().size();
  Matrix pts(samples.size(), d);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != d) throw std::invalid_argument("FeatureStats: feature length mismatch");
    std::copy(samples[i].begin(), samples[i].end(), pts.row(i).begin());
  }
  FeatureStats s;
  s.mean = column_means(pts);
  s.covariance = samples.size() >= 2 ? sample_covariance(pts) : Matrix(d, d);
  s.n = samples.size();
  return s;
}

void validate(const FeatureStats& s) {
  const std::size_t d = s.mean.size();
  if (s.covariance.rows() != d || s.covariance.cols() != d) throw std::invalid_argument("FeatureStats: covariance shape mismatch");
  double scale = 1.0;
  for (double x : s.covariance.storage()) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (std::abs(s.covariance(i, j) - s.covariance(j, i)) > 1e-12 * scale) {
        throw std::domain_error("FeatureStats: covariance is not symmetric");
      }
  const auto eig = jacobi_eigen(s.covariance);
  if (!eig.values.empty() && eig.values.back() < -1e-10 * scale) {
    throw std::domain_error("FeatureStats: covariance is not positive semidefinite");
  }
}

double frechet_distance(const FeatureStats& a, const FeatureStats& b) {
  if (a.mean.size() != b.mean.size()) throw std::invalid_argument("frechet_distance: dimension mismatch");
  validate(a);
  validate(b);
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.mean.size(); ++i) d2 += (a.mean[i] - b.mean[i]) * (a.mean[i] - b.mean[i]);
  const Matrix ra = sqrt_psd(a.covariance);
  const Matrix inner = ra * b.covariance * ra;
  const auto eig = jacobi_eigen(inner);
  double tr_sqrt = 0.0;
  for (double l : eig.values) tr_sqrt += std::sqrt(std::max(l, 0.0));
  d2 += a.covariance.trace() + b.covariance.trace() - 2.0 * tr_sqrt;
  return std::sqrt(std::max(d2, 0.0));
}

double alignment_score(const VideoLatent& v, Motion motion) {
  const MotionVector c = canonical_motion(motion_from_index(static_cast<int>(motion)));
  if (motion == Motion::Static) {
    const double me = motion_energy(v);
    double var = 0.0;
    for (std::size_t l = 0; l < v.frames(); ++l) {
      const double m = mean(v.frame(l));
      double s = 0.0;
      for (double x : v.frame(l)) s += (x - m) * (x - m);
      var += s / static_cast<double>(v.frame_size());
    }
    var /= static_cast<double>(v.frames());
    if (me == 0.0) return 1.0;
    if (var == 0.0) return -1.0;
    return 1.0 - std::clamp(me / (2.0 * var), 0.0, 2.0);
  }
  const MotionVector d = estimate_displacement(v);
  const double n = std::sqrt(d.dx * d.dx + d.dy * d.dy + d.ds * d.ds);
  if (n < 1e-12) return 0.0;
  return std::clamp((d.dx * c.dx + d.dy * c.dy + d.ds * c.ds) / n, -1.0, 1.0);
}

Linearity linearity_score(const VideoLatent& v) {
  const std::size_t L = v.frames();
  if (L < 3) throw std::invalid_argument("linearity_score: need at least 3 frames");
  Matrix pts(L, v.frame_size());
  for (std::size_t l = 0; l < L; ++l) std::copy(v.frame(l).begin(), v.frame(l).end(), pts.row(l).begin());
  const auto pa = principal_axis_stats(pts);
  if (pa.degenerate) return {0.0, 0.0, true};
  std::vector<double> index(L);
  for (std::size_t l = 0; l < L; ++l) index[l] = static_cast<double>(l);
  return {pa.variance_ratio, std::abs(spearman_correlation(pa.projections, index)), false};
}

}  // namespace awaken
