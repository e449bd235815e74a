#include "awaken/training.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "awaken/rng.hpp"

namespace awaken {

namespace {

void shuffle(std::vector<std::size_t>& v, CounterRng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

TrainResult train(ToyDenoiser& model, const MotionDataset& data, const TrainOptions& opt,
                  const EpochCallback& on_epoch) {
  if (data.samples.empty()) throw std::invalid_argument("train: dataset is empty");
  if (opt.batch_size == 0) throw std::invalid_argument("train: batch size must be positive");
  if (!(opt.learning_rate > 0)) throw std::invalid_argument("train: learning rate must be positive");
  const auto& geo = model.geometry();
  for (const auto& s : data.samples) {
    if (s.video.shape() != geo.video_shape()) {
      throw std::invalid_argument("train: dataset video " + shape_string(s.video.shape()) +
                                  " does not match model " + shape_string(geo.video_shape()));
    }
  }

  CounterRng root(opt.seed, "train");
  CounterRng order_rng = root.derive("order");
  CounterRng draw_rng = root.derive("draws");
  const NoiseSchedule& sched = model.schedule();
  const auto n_params = model.parameter_count();
  std::vector<double> m(n_params, 0.0), v(n_params, 0.0), grad;
  std::vector<std::size_t> order(data.samples.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  std::vector<TrainingExample> batch;
  for (std::size_t epoch = 0; epoch < opt.epochs; ++epoch) {
    shuffle(order, order_rng);
    double epoch_sum = 0.0;
    std::size_t epoch_batches = 0;
    for (std::size_t start = 0; start < order.size(); start += opt.batch_size) {
      const std::size_t end = std::min(order.size(), start + opt.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) {
        const auto& s = data.samples[order[k]];
        const int t = 1 + static_cast<int>(draw_rng.below(static_cast<std::uint64_t>(sched.steps())));
        batch.push_back({&s.video, &s.cond, t, draw_rng.normal_tensor(s.video.shape())});
      }
      const double loss = model.loss_and_gradient(batch, grad);
      if (!std::isfinite(loss) || !all_finite(grad)) {
        throw TrainingDiverged("training diverged at epoch " + std::to_string(epoch) + ", step " +
                               std::to_string(result.steps) + " (loss " + std::to_string(loss) + ")");
      }
      ++result.steps;
      const double bc1 = 1.0 - std::pow(opt.adam_beta1, static_cast<double>(result.steps));
      const double bc2 = 1.0 - std::pow(opt.adam_beta2, static_cast<double>(result.steps));
      auto p = model.parameters();
      for (std::size_t i = 0; i < n_params; ++i) {
        m[i] = opt.adam_beta1 * m[i] + (1.0 - opt.adam_beta1) * grad[i];
        v[i] = opt.adam_beta2 * v[i] + (1.0 - opt.adam_beta2) * grad[i] * grad[i];
        p[i] -= opt.learning_rate * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + opt.adam_epsilon);
      }
      epoch_sum += loss;
      ++epoch_batches;
    }
    const double epoch_loss = epoch_sum / static_cast<double>(epoch_batches);
    result.epoch_losses.push_back(epoch_loss);
    if (on_epoch) on_epoch(epoch, epoch_loss);
  }
  return result;
}

std::vector<TrainingExample> evaluation_examples(const MotionDataset& data, const NoiseSchedule& sched,
                                                 std::uint64_t seed, std::size_t draws_per_sample) {
  CounterRng rng(seed, "evaluate");
  std::vector<TrainingExample> out;
  out.reserve(data.samples.size() * draws_per_sample);
  for (const auto& s : data.samples)
    for (std::size_t k = 0; k < draws_per_sample; ++k) {
      const int t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(sched.steps())));
      out.push_back({&s.video, &s.cond, t, rng.normal_tensor(s.video.shape())});
    }
  return out;
}

double evaluate_loss(const ToyDenoiser& model, std::span<const TrainingExample> examples) {
  return model.loss(examples);
}

double zero_predictor_loss(std::span<const TrainingExample> examples) {
  if (examples.empty()) throw std::invalid_argument("zero_predictor_loss: no examples");
  double total = 0.0;
  for (const auto& ex : examples) total += dot(ex.eps, ex.eps);
  return total / static_cast<double>(examples.size());
}

}  // namespace awaken
