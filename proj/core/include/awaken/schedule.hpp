#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace awaken {

enum class ScheduleKind { Linear, Cosine };

std::string_view schedule_kind_name(ScheduleKind kind);
ScheduleKind parse_schedule_kind(std::string_view name);

struct ScheduleParams {
  ScheduleKind kind = ScheduleKind::Cosine;
  int steps = 1000;
  double beta_start = 1e-4;
  double beta_end = 0.02;
  double cosine_offset = 0.008;
};

// Discrete diffusion coefficients indexed by t = 1..T; alpha_bar(0) == 1.
class NoiseSchedule {
 public:
  static NoiseSchedule linear(int steps, double beta_start = 1e-4, double beta_end = 0.02);
  static NoiseSchedule cosine(int steps, double offset = 0.008);
  static NoiseSchedule from_betas(std::vector<double> betas);
  static NoiseSchedule from_params(const ScheduleParams& params);

  int steps() const noexcept { return static_cast<int>(betas_.size()); }
  double beta(int t) const;
  double alpha(int t) const;
  double alpha_bar(int t) const;
  const std::vector<double>& betas() const noexcept { return betas_; }

  // FNV-1a over the bit patterns of the betas.
  std::uint64_t hash() const;
  std::string hash_hex() const;

 private:
  explicit NoiseSchedule(std::vector<double> betas);
  void check_step(int t, int lo) const;

  std::vector<double> betas_;
  std::vector<double> alpha_bars_;  // index t, alpha_bars_[0] == 1
};

void require_step(const NoiseSchedule& sched, int t, int lo, std::string_view what);

}  // namespace awaken
