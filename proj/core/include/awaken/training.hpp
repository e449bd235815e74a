#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "awaken/dataset.hpp"
#include "awaken/toy_denoiser.hpp"

namespace awaken {

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainOptions {
  std::size_t epochs = 64;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 42;
};

struct TrainResult {
  std::vector<double> epoch_losses;  // mean minibatch loss per epoch
  std::size_t steps = 0;
};

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

// Minibatch Adam on the noise-prediction loss. One epoch visits every
// sample once in a seeded random order.
TrainResult train(ToyDenoiser& model, const MotionDataset& data, const TrainOptions& options,
                  const EpochCallback& on_epoch = {});

// Fixed evaluation draws (timestep and noise) derived from `seed`.
std::vector<TrainingExample> evaluation_examples(const MotionDataset& data, const NoiseSchedule& sched,
                                                 std::uint64_t seed, std::size_t draws_per_sample = 1);

double evaluate_loss(const ToyDenoiser& model, std::span<const TrainingExample> examples);

// Loss of the predictor that always outputs zero: mean ||eps||^2.
double zero_predictor_loss(std::span<const TrainingExample> examples);

}  // namespace awaken
