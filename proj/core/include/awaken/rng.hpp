#pragma once

#include <cstdint>
#include <string_view>

#include "awaken/tensor.hpp"

namespace awaken {

std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t x);

// Counter-based generator: output i is a pure function of (key, i).
// Child streams are derived by domain label, so adding a new consumer never
// shifts the draws seen by existing ones.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::string_view domain = {});

  CounterRng derive(std::string_view domain) const;
  CounterRng derive(std::uint64_t index) const;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  std::uint64_t below(std::uint64_t n);   // [0, n)
  double normal();
  Tensor normal_tensor(const Shape& shape);

 private:
  CounterRng(std::uint64_t key, int) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Gaussian tensor source that counts how many tensors it has produced.
class NoiseStream {
 public:
  explicit NoiseStream(CounterRng rng) : rng_(rng) {}
  Tensor draw(const Shape& shape);
  std::size_t draws() const noexcept { return draws_; }

 private:
  CounterRng rng_;
  std::size_t draws_ = 0;
};

}  // namespace awaken
