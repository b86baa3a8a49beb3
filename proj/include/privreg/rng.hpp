// Deterministic random streams for reproducible simulation runs.
// splitmix64 core with keyed substream derivation. Derivation depends only
// on the stream's key, never on how much has been sampled, so per-trial
// streams are stable under any degree of parallelism. All samplers use
// plain IEEE arithmetic and are byte-stable across platforms.
#pragma once

#include <cstdint>
#include <vector>

namespace privreg {

class RngStream {
 public:
  explicit RngStream(uint64_t seed);

  // Child stream keyed by (this stream's key, a, b, c). Pure in the key.
  RngStream derive(uint64_t a, uint64_t b = 0, uint64_t c = 0) const;

  uint64_t next_u64();
  double uniform01();                      // [0, 1), 53-bit resolution
  double uniform(double lo, double hi);    // [lo, hi)
  uint64_t uniform_below(uint64_t bound);  // unbiased integer in [0, bound)
  double normal();                         // standard normal (Box-Muller)
  double exponential(double scale);        // mean = scale
  double gamma_int(int shape, double scale);  // Gamma(shape, scale), integer shape

  // Fisher-Yates; identical permutation for identical stream state.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  RngStream(uint64_t key, uint64_t state) : key_(key), state_(state) {}

  uint64_t key_;    // identity; advanced only by derive()
  uint64_t state_;  // sampling position
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace privreg
