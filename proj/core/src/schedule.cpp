#include "awaken/schedule.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>


namespace awaken {

std::string_view schedule_kind_name(ScheduleKind kind) {
  return kind == ScheduleKind::Linear ? "linear" : "cosine";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "linear") return ScheduleKind::Linear;
  if (name == "cosine") return ScheduleKind::Cosine;
  throw std::invalid_argument("unknown schedule kind '" + std::string(name) + "'");
}

NoiseSchedule::NoiseSchedule(std::vector<double> betas) : betas_(std::move(betas)) {
  if (betas_.empty()) throw std::invalid_argument("noise schedule needs at least one step");
  alpha_bars_.resize(betas_.size() + 1);
  alpha_bars_[0] = 1.0;
  for (std::size_t i = 0; i < betas_.size(); ++i) {
    const double b = betas_[i];
    if (!(b > 0.0) || b > 0.999) {
      throw std::invalid_argument("beta at step " + std::to_string(i + 1) + " outside (0, 0.999]");
    }
    alpha_bars_[i + 1] = alpha_bars_[i] * (1.0 - b);
  }
}

NoiseSchedule NoiseSchedule::linear(int steps, double beta_start, double beta_end) {
  if (steps < 1) throw std::invalid_argument("schedule steps must be >= 1");
  std::vector<double> b(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double f = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    b[static_cast<std::size_t>(i)] = beta_start + f * (beta_end - beta_start);
  }
  return NoiseSchedule(std::move(b));
}

NoiseSchedule NoiseSchedule::cosine(int steps, double offset) {
  if (steps < 1) throw std::invalid_argument("schedule steps must be >= 1");
  if (!(offset > 0.0)) throw std::invalid_argument("cosine offset must be positive");
  auto f = [&](int t) {
    const double c = std::cos((static_cast<double>(t) / steps + offset) / (1.0 + offset) * std::numbers::pi / 2);
    return c * c;
  };
  std::vector<double> b(static_cast<std::size_t>(steps));
  for (int t = 1; t <= steps; ++t) b[static_cast<std::size_t>(t - 1)] = std::min(1.0 - f(t) / f(t - 1), 0.999);
  return NoiseSchedule(std::move(b));
}

NoiseSchedule NoiseSchedule::from_betas(std::vector<double> betas) { return NoiseSchedule(std::move(betas)); }

NoiseSchedule NoiseSchedule::from_params(const ScheduleParams& p) {
  return p.kind == ScheduleKind::Linear ? linear(p.steps, p.beta_start, p.beta_end)
                                        : cosine(p.steps, p.cosine_offset);
}

void NoiseSchedule::check_step(int t, int lo) const {
  if (t < lo || t > steps()) {
    throw std::out_of_range("timestep " + std::to_string(t) + " outside [" + std::to_string(lo) + ", " +
                            std::to_string(steps()) + "]");
  }
}

double NoiseSchedule::beta(int t) const {
  check_step(t, 1);
  return betas_[static_cast<std::size_t>(t - 1)];
}

double NoiseSchedule::alpha(int t) const { return 1.0 - beta(t); }

double NoiseSchedule::alpha_bar(int t) const {
  check_step(t, 0);
  return alpha_bars_[static_cast<std::size_t>(t)];
}

std::uint64_t NoiseSchedule::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double b : betas_) {
    const auto bits = std::bit_cast<std::uint64_t>(b);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string NoiseSchedule::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

void require_step(const NoiseSchedule& sched, int t, int lo, std::string_view what) {
  if (t < lo || t > sched.steps()) {
    throw std::out_of_range(std::string(what) + ": timestep " + std::to_string(t) + " outside [" +
                            std::to_string(lo) + ", " + std::to_string(sched.steps()) + "]");
  }
}

}  // namespace awaken
