#pragma once

#include <cstdint>
#include <random>

namespace sgl {

// Seeded random stream. Each chain or replicate owns one; streams are
// derived from a base seed so parallel units never share state.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream derive(std::uint64_t base_seed, std::uint64_t stream_id) {
    // splitmix64 of (base ^ id) decorrelates nearby ids
    std::uint64_t z = base_seed ^ (stream_id * 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return RngStream(z ^ (z >> 31));
  }

  double normal() { return normal_(engine_); }
  double normal(double mean, double sd) { return mean + sd * normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  long poisson(double mean) {
    std::poisson_distribution<long> d(mean);
    return d(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace sgl
