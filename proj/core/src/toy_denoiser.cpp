#include "awaken/toy_denoiser.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "awaken/rng.hpp"

namespace awaken {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double dot_n(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline void axpy_n(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

struct Scales {
  double sigma, c_in, c_skip, c_out, inv_sqrt_abar;
};

Scales scales_at(const NoiseSchedule& sched, int t, double sd) {
  const double a = sched.alpha_bar(t);
  const double s2 = (1.0 - a) / a;
  const double norm = std::sqrt(s2 + sd * sd);
  return {std::sqrt(s2), 1.0 / norm, sd * sd / (s2 + sd * sd), std::sqrt(s2) * sd / norm, 1.0 / std::sqrt(a)};
}

}  // namespace

std::vector<double> timestep_embedding(int t, std::size_t dim) {
  if (dim % 2 != 0) throw std::invalid_argument("timestep embedding dimension must be even");
  const std::size_t half = dim / 2;
  std::vector<double> e(dim);
  for (std::size_t k = 0; k < half; ++k) {
    const double f = std::exp(-std::log(10000.0) * static_cast<double>(k) / static_cast<double>(half));
    e[k] = std::sin(t * f);
    e[half + k] = std::cos(t * f);
  }
  return e;
}

std::vector<double> fourier_lowpass_projector(std::size_t n, int modes) {
  std::vector<double> p(n * n, 0.0);
  if (modes < 0 || 2 * static_cast<std::size_t>(modes) + 1 >= n) {
    for (std::size_t i = 0; i < n; ++i) p[i * n + i] = 1.0;
    return p;
  }
  std::vector<std::vector<double>> basis;
  basis.emplace_back(n, 1.0 / std::sqrt(static_cast<double>(n)));
  for (int k = 1; k <= modes; ++k) {
    std::vector<double> c(n), s(n);
    for (std::size_t x = 0; x < n; ++x) {
      const double a = 2.0 * std::numbers::pi * k * static_cast<double>(x) / static_cast<double>(n);
      c[x] = std::cos(a);
      s[x] = std::sin(a);
    }
    for (auto* v : {&c, &s}) {
      const double nv = std::sqrt(dot_n(v->data(), v->data(), n));
      for (double& x : *v) x /= nv;
      basis.push_back(*v);
    }
  }
  for (const auto& b : basis)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p[i * n + j] += b[i] * b[j];
  return p;
}

struct ToyDenoiser::Cache {
  Scales sc{};
  std::vector<double> ztc, u, side, pre, act, proj;
  std::vector<double> mix;  // effective L x L temporal matrix
};

ToyDenoiser::ToyDenoiser(VideoGeometry geometry, NoiseSchedule schedule, ToyDenoiserConfig config)
    : geometry_(geometry), schedule_(std::move(schedule)), config_(config) {
  if (geometry_.frames == 0 || geometry_.frame_size() == 0) throw std::invalid_argument("toy denoiser geometry must be non-empty");
  if (config_.hidden == 0) throw std::invalid_argument("toy denoiser hidden size must be positive");
  if (config_.time_embedding % 2 != 0) throw std::invalid_argument("time embedding size must be even");
  if (!(config_.sigma_data > 0)) throw std::invalid_argument("sigma_data must be positive");
  const std::size_t d = geometry_.frame_size();
  const std::size_t h = config_.hidden;
  const std::size_t l = geometry_.frames;
  input_size_ = 2 * d + config_.time_embedding + kMotionCount;

  auto add = [&](const std::string& name, Shape shape) {
    const std::size_t off = params_.size();
    blocks_.push_back({name, shape, off});
    params_.resize(off + shape_size(shape), 0.0);
    return off;
  };
  off_w1_ = add("W1", {h, input_size_});
  off_b1_ = add("b1", {h});
  off_w2_ = add("W2", {d, h});
  off_b2_ = add("b2", {d});
  off_a_ = add("A", {l, l});

  proj_h_ = fourier_lowpass_projector(geometry_.height, config_.lowpass_modes);
  proj_w_ = fourier_lowpass_projector(geometry_.width, config_.lowpass_modes);
  lowpass_identity_ = config_.lowpass_modes < 0 ||
                      (2 * static_cast<std::size_t>(config_.lowpass_modes) + 1 >= geometry_.height &&
                       2 * static_cast<std::size_t>(config_.lowpass_modes) + 1 >= geometry_.width);
}

void ToyDenoiser::initialize(std::uint64_t seed) {
  CounterRng rng(seed, "toy_denoiser/init");
  const double bound = 1.0 / std::sqrt(static_cast<double>(input_size_));
  std::fill(params_.begin(), params_.end(), 0.0);
  for (std::size_t i = 0; i < config_.hidden * input_size_; ++i) params_[off_w1_ + i] = rng.uniform(-bound, bound);
  for (std::size_t i = 0; i < config_.hidden; ++i) params_[off_b1_ + i] = rng.uniform(-bound, bound);
}

const ToyDenoiser::ParameterBlock& ToyDenoiser::block(const std::string& name) const {
  for (const auto& b : blocks_)
    if (b.name == name) return b;
  throw std::invalid_argument("toy denoiser has no parameter block '" + name + "'");
}

Tensor ToyDenoiser::block_tensor(const std::string& name) const {
  const auto& b = block(name);
  const auto n = shape_size(b.shape);
  return Tensor(b.shape, std::vector<double>(params_.begin() + static_cast<std::ptrdiff_t>(b.offset),
                                             params_.begin() + static_cast<std::ptrdiff_t>(b.offset + n)));
}

void ToyDenoiser::set_block(const std::string& name, const Tensor& value) {
  const auto& b = block(name);
  if (value.shape() != b.shape) {
    throw std::invalid_argument("parameter block '" + name + "' expects shape " + shape_string(b.shape) + ", got " +
                                shape_string(value.shape()));
  }
  std::copy(value.values().begin(), value.values().end(), params_.begin() + static_cast<std::ptrdiff_t>(b.offset));
}

void ToyDenoiser::check_inputs(const VideoLatent& z_t, const Condition& cond, int t) const {
  if (z_t.shape() != geometry_.video_shape()) {
    throw std::invalid_argument("toy denoiser expects latent " + shape_string(geometry_.video_shape()) + ", got " +
                                shape_string(z_t.shape()));
  }
  if (cond.image.shape() != geometry_.frame_shape()) {
    throw std::invalid_argument("toy denoiser expects condition image " + shape_string(geometry_.frame_shape()) +
                                ", got " + shape_string(cond.image.shape()));
  }
  motion_from_index(static_cast<int>(cond.motion));
  require_step(schedule_, t, 1, "toy denoiser");
}

void ToyDenoiser::lowpass(std::span<const double> in, std::span<double> out, std::span<double> scratch) const {
  const std::size_t h = geometry_.height, w = geometry_.width;
  if (lowpass_identity_) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  for (std::size_t c = 0; c < geometry_.channels; ++c) {
    const double* x = in.data() + c * h * w;
    double* y = out.data() + c * h * w;
    // scratch = P_h x
    std::fill(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(h * w), 0.0);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t k = 0; k < h; ++k) axpy_n(proj_h_[i * h + k], x + k * w, scratch.data() + i * w, w);
    // y = scratch P_w
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) y[i * w + j] = dot_n(scratch.data() + i * w, proj_w_.data() + j * w, w);
  }
}

double ToyDenoiser::forward(const VideoLatent& z_t, const Condition& cond, int t, std::span<double> eps_out,
                            Cache* cache) const {
  const std::size_t L = geometry_.frames, D = geometry_.frame_size(), H = config_.hidden, I = input_size_;
  const std::size_t S = I - D;
  Cache local;
  Cache& c = cache ? *cache : local;
  c.sc = scales_at(schedule_, t, config_.sigma_data);
  const Scales& sc = c.sc;
  const double* W1 = params_.data() + off_w1_;
  const double* b1 = params_.data() + off_b1_;
  const double* W2 = params_.data() + off_w2_;
  const double* b2 = params_.data() + off_b2_;
  const double* A = params_.data() + off_a_;
  auto z = z_t.values();
  auto img = cond.image.values();

  c.ztc.resize(L * D);
  c.u.resize(L * D);
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t k = 0; k < D; ++k) {
      const double v = z[l * D + k] * sc.inv_sqrt_abar - img[k];
      c.ztc[l * D + k] = v;
      c.u[l * D + k] = sc.c_in * v;
    }

  c.side.assign(S, 0.0);
  std::copy(img.begin(), img.end(), c.side.begin());
  const auto temb = timestep_embedding(t, config_.time_embedding);
  std::copy(temb.begin(), temb.end(), c.side.begin() + static_cast<std::ptrdiff_t>(D));
  c.side[D + config_.time_embedding + static_cast<std::size_t>(cond.motion)] = 1.0;

  std::vector<double> shared(H);
  for (std::size_t j = 0; j < H; ++j) shared[j] = b1[j] + dot_n(W1 + j * I + D, c.side.data(), S);

  c.pre.resize(L * H);
  c.act.resize(L * H);
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t j = 0; j < H; ++j) {
      const double p = shared[j] + dot_n(W1 + j * I, c.u.data() + l * D, D);
      c.pre[l * H + j] = p;
      c.act[l * H + j] = p * sigmoid(p);
    }

  std::vector<double> q(D), scratch(D);
  c.proj.resize(L * D);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t d = 0; d < D; ++d) {
      const double f0 = b2[d] + dot_n(W2 + d * H, c.act.data() + l * H, H);
      q[d] = sc.c_skip * c.ztc[l * D + d] + sc.c_out * f0;
    }
    lowpass(q, std::span<double>(c.proj).subspan(l * D, D), scratch);
  }

  c.mix.assign(L * L, 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    double row = 0.0;
    for (std::size_t m = 0; m < L; ++m) row += A[l * L + m];
    for (std::size_t m = 0; m < L; ++m) c.mix[l * L + m] = (l == m ? 1.0 : 0.0) + A[l * L + m] - row / L;
  }

  const double inv_sigma = 1.0 / sc.sigma;
  for (std::size_t l = 0; l < L; ++l) {
    double* e = eps_out.data() + l * D;
    for (std::size_t d = 0; d < D; ++d) e[d] = c.ztc[l * D + d];
    for (std::size_t m = 0; m < L; ++m) axpy_n(-c.mix[l * L + m], c.proj.data() + m * D, e, D);
    for (std::size_t d = 0; d < D; ++d) e[d] *= inv_sigma;
  }
  return sc.sigma;
}

void ToyDenoiser::backward(const Cache& c, std::span<const double> d_eps, std::span<double> grad) const {
  const std::size_t L = geometry_.frames, D = geometry_.frame_size(), H = config_.hidden, I = input_size_;
  const std::size_t S = I - D;
  const Scales& sc = c.sc;
  const double* W2 = params_.data() + off_w2_;
  double* gW1 = grad.data() + off_w1_;
  double* gb1 = grad.data() + off_b1_;
  double* gW2 = grad.data() + off_w2_;
  double* gb2 = grad.data() + off_b2_;
  double* gA = grad.data() + off_a_;

  std::vector<double> dr(L * D);
  const double inv_sigma = 1.0 / sc.sigma;
  for (std::size_t i = 0; i < L * D; ++i) dr[i] = -d_eps[i] * inv_sigma;

  // Temporal mixer.
  std::vector<double> dmix(L * L);
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t m = 0; m < L; ++m) dmix[l * L + m] = dot_n(dr.data() + l * D, c.proj.data() + m * D, D);
  for (std::size_t l = 0; l < L; ++l) {
    double row = 0.0;
    for (std::size_t m = 0; m < L; ++m) row += dmix[l * L + m];
    for (std::size_t m = 0; m < L; ++m) gA[l * L + m] += dmix[l * L + m] - row / L;
  }
  std::vector<double> dp(L * D, 0.0);
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t m = 0; m < L; ++m) axpy_n(c.mix[l * L + m], dr.data() + l * D, dp.data() + m * D, D);

  std::vector<double> dq(D), scratch(D), dh(H), dpre_sum(H, 0.0);
  for (std::size_t m = 0; m < L; ++m) {
    lowpass(std::span<const double>(dp).subspan(m * D, D), dq, scratch);
    const double* act = c.act.data() + m * H;
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t d = 0; d < D; ++d) {
      const double g = sc.c_out * dq[d];
      gb2[d] += g;
      axpy_n(g, act, gW2 + d * H, H);
      axpy_n(g, W2 + d * H, dh.data(), H);
    }
    const double* u = c.u.data() + m * D;
    for (std::size_t j = 0; j < H; ++j) {
      const double p = c.pre[m * H + j];
      const double s = sigmoid(p);
      const double g = dh[j] * s * (1.0 + p * (1.0 - s));
      gb1[j] += g;
      dpre_sum[j] += g;
      axpy_n(g, u, gW1 + j * I, D);
    }
  }
  for (std::size_t j = 0; j < H; ++j) axpy_n(dpre_sum[j], c.side.data(), gW1 + j * I + D, S);
}

VideoLatent ToyDenoiser::predict_noise(const VideoLatent& z_t, const Condition& cond, int t) const {
  check_inputs(z_t, cond, t);
  Tensor out(z_t.shape());
  forward(z_t, cond, t, out.values(), nullptr);
  return VideoLatent(std::move(out));
}

double ToyDenoiser::loss(std::span<const TrainingExample> batch) const {
  if (batch.empty()) throw std::invalid_argument("loss of an empty batch");
  std::vector<double> eps_hat(geometry_.frames * geometry_.frame_size());
  double total = 0.0;
  for (const auto& ex : batch) {
    const VideoLatent zt = forward_noise(*ex.z0, ex.t, VideoLatent(ex.eps), schedule_);
    check_inputs(zt, *ex.cond, ex.t);
    forward(zt, *ex.cond, ex.t, eps_hat, nullptr);
    for (std::size_t i = 0; i < eps_hat.size(); ++i) {
      const double r = eps_hat[i] - ex.eps[i];
      total += r * r;
    }
  }
  return total / static_cast<double>(batch.size());
}

double ToyDenoiser::loss_and_gradient(std::span<const TrainingExample> batch, std::vector<double>& grad) const {
  if (batch.empty()) throw std::invalid_argument("loss of an empty batch");
  grad.assign(params_.size(), 0.0);
  const std::size_t n = geometry_.frames * geometry_.frame_size();
  std::vector<double> eps_hat(n), d_eps(n);
  const double scale = 2.0 / static_cast<double>(batch.size());
  double total = 0.0;
  Cache cache;
  for (const auto& ex : batch) {
    const VideoLatent zt = forward_noise(*ex.z0, ex.t, VideoLatent(ex.eps), schedule_);
    check_inputs(zt, *ex.cond, ex.t);
    forward(zt, *ex.cond, ex.t, eps_hat, &cache);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = eps_hat[i] - ex.eps[i];
      total += r * r;
      d_eps[i] = scale * r;
    }
    backward(cache, d_eps, grad);
  }
  return total / static_cast<double>(batch.size());
}

}  // namespace awaken
