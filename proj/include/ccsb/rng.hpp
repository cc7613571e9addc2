#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

// Reproducible random streams.
//
// Engine: std::mt19937_64 (output sequence pinned by the C++ standard).
// Stream splitting: the generator for stream i of run seed s is seeded with
// splitmix64(s ^ (i+1)*0x9E3779B97F4A7C15). All variate transforms are
// written out explicitly (no std::*_distribution, whose output is
// implementation-defined), so identical seeds give bit-identical samples on
// any conforming platform.
namespace ccsb {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline uint64_t derive_stream_seed(uint64_t seed, uint64_t stream) {
  return splitmix64(seed ^ ((stream + 1) * 0x9E3779B97F4A7C15ull));
}

class RandomStream {
 public:
  explicit RandomStream(uint64_t stream_seed) : eng_(stream_seed) {}

  static RandomStream for_mode(uint64_t run_seed, uint64_t mode_index) {
    return RandomStream(derive_stream_seed(run_seed, mode_index));
  }

  // Uniform on (0, 1]; top 53 bits of the engine output.
  double uniform01() {
    const uint64_t bits = eng_() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  // Trigonometric Box-Muller: two uniforms -> two independent N(0,1).
  std::pair<double, double> normal_pair() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  double exponential(double scale) { return -scale * std::log(uniform01()); }

  // Gamma with integer shape k >= 1: sum of k exponentials (exact, fixed
  // draw count, no rejection).
  double gamma_integer_shape(int shape, double scale) {
    double sum = 0.0;
    for (int i = 0; i < shape; ++i) sum += -std::log(uniform01());
    return scale * sum;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ccsb
