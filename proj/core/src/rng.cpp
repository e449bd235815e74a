#include "awaken/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace awaken {

std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::string_view domain)
    : key_(splitmix64(splitmix64(seed) ^ fnv1a64(domain))) {}

CounterRng CounterRng::derive(std::string_view domain) const {
  return CounterRng(splitmix64(key_ ^ fnv1a64(domain)), 0);
}

CounterRng CounterRng::derive(std::uint64_t index) const {
  return CounterRng(splitmix64(key_ ^ splitmix64(index ^ 0x5851f42d4c957f2dULL)), 0);
}

std::uint64_t CounterRng::next_u64() {
  return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * (++counter_));
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t CounterRng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("CounterRng::below(0)");
  // Rejection keeps the result unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Tensor CounterRng::normal_tensor(const Shape& shape) {
  Tensor t(shape);
  for (double& v : t.values()) v = normal();
  return t;
}

Tensor NoiseStream::draw(const Shape& shape) {
  ++draws_;
  return rng_.normal_tensor(shape);
}

}  // namespace awaken
