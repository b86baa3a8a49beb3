#include "privreg/rng.hpp"

#include <cmath>

namespace privreg {
namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer (Steele, Lea, Flood).
uint64_t mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t hash_key(uint64_t key, uint64_t id, uint64_t round) {
  return mix(key + kGolden * (round + 1) + id);
}

}  // namespace

RngStream::RngStream(uint64_t seed) : key_(mix(seed + kGolden)), state_(key_) {}

RngStream RngStream::derive(uint64_t a, uint64_t b, uint64_t c) const {
  uint64_t k = hash_key(key_, a, 1);
  k = hash_key(k, b, 2);
  k = hash_key(k, c, 3);
  return RngStream(k, k);
}

uint64_t RngStream::next_u64() {
  state_ += kGolden;
  return mix(state_);
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + uniform01() * (hi - lo);
}

uint64_t RngStream::uniform_below(uint64_t bound) {
  if (bound <= 1) return 0;
  // Reject the low remainder zone so every residue is equally likely.
  const uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
  uint64_t r = next_u64();
  while (r < threshold) r = next_u64();
  return r % bound;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

double RngStream::exponential(double scale) {
  return -scale * std::log1p(-uniform01());
}

double RngStream::gamma_int(int shape, double scale) {
  // Sum of integer-shape exponentials; exact for the shapes used here.
  double acc = 0.0;
  for (int i = 0; i < shape; ++i) acc += -std::log1p(-uniform01());
  return scale * acc;
}

}  // namespace privreg
