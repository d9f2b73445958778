#pragma once

#include <cstdint>
#include <random>

namespace bathsim {

/// Deterministic pseudorandom source. Streams are keyed by (seed, stream id,
/// lane); different keys go through seed_seq mixing and are treated as
/// independent.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0, std::uint32_t lane = 0);

  double normal() { return normal_(engine_); }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    double u;
    do {
      u = unit_(engine_);
    } while (u == 0.0);
    return u;
  }

  /// Uniform on [0, 1).
  double uniform() { return unit_(engine_); }

  std::uint64_t poisson(double mean);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace bathsim
