#include <benchmark/benchmark.h>

#include "awaken/dataset.hpp"
#include "awaken/fusion.hpp"
#include "awaken/linalg.hpp"
#include "awaken/metrics.hpp"
#include "awaken/pipeline.hpp"
#include "awaken/rng.hpp"
#include "awaken/toy_denoiser.hpp"
#include "awaken/training.hpp"

using namespace awaken;

namespace {

ToyDenoiser make_model(int steps) {
  ToyDenoiser m(VideoGeometry{}, NoiseSchedule::cosine(steps));
  m.initialize(42);
  // Non-zero output layers so the full forward path is exercised.
  CounterRng rng(7, "bench/params");
  for (double& x : m.parameters()) x = 0.01 * rng.normal();
  return m;
}

void BM_DenoiserForward(benchmark::State& state) {
  const ToyDenoiser m = make_model(1000);
  const auto s = generate_sample(DatasetParams{}, 1, 0);
  CounterRng rng(3);
  const VideoLatent z(rng.normal_tensor(m.geometry().video_shape()));
  for (auto _ : state) benchmark::DoNotOptimize(m.predict_noise(z, s.cond, 500));
}
BENCHMARK(BM_DenoiserForward);

void BM_LossAndGradient(benchmark::State& state) {
  ToyDenoiser m = make_model(1000);
  const auto data = generate_dataset(static_cast<std::size_t>(state.range(0)), DatasetParams{}, 1);
  const auto batch = evaluation_examples(data, m.schedule(), 5, 1);
  std::vector<double> grad;
  for (auto _ : state) benchmark::DoNotOptimize(m.loss_and_gradient(batch, grad));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LossAndGradient)->Arg(32);

void BM_SlerpFuse(benchmark::State& state) {
  CounterRng rng(1);
  const VideoLatent a(rng.normal_tensor({16, 1, 16, 16})), b(rng.normal_tensor({16, 1, 16, 16}));
  const FusionConfig cfg{FusionMode::Slerp, state.range(0) ? AngleScope::PerFrame : AngleScope::Global, 1e-6};
  for (auto _ : state) benchmark::DoNotOptimize(slerp_fuse(a, b, cfg));
}
BENCHMARK(BM_SlerpFuse)->Arg(0)->Arg(1);

void BM_JacobiEigen(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CounterRng rng(2);
  Matrix x(n, n);
  for (double& v : x.storage()) v = rng.normal();
  const Matrix a = x * x.transposed();
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(a));
}
BENCHMARK(BM_JacobiEigen)->Arg(8)->Arg(36)->Arg(64);

void BM_FrechetDistance(benchmark::State& state) {
  const auto ref = generate_dataset(64, DatasetParams{}, 4);
  std::vector<std::vector<double>> fa, fb;
  for (std::size_t i = 0; i < 32; ++i) {
    fa.push_back(video_features(ref.samples[i].video));
    fb.push_back(video_features(ref.samples[32 + i].video));
  }
  const auto sa = FeatureStats::from_samples(fa), sb = FeatureStats::from_samples(fb);
  for (auto _ : state) benchmark::DoNotOptimize(frechet_distance(sa, sb));
}
BENCHMARK(BM_FrechetDistance);

void BM_AnimateVS(benchmark::State& state) {
  const ToyDenoiser m = make_model(static_cast<int>(state.range(0)));
  const auto s = generate_sample(DatasetParams{}, 1, 0);
  const SyntheticProvider prov;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        animate(s.cond.image, Motion::Right, PipelineVariant::VS, m, m.schedule(), PipelineConfig{}, prov, 42));
}
BENCHMARK(BM_AnimateVS)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
