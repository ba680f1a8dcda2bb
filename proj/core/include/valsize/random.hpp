#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace valsize {

/// Seedable generator with portable output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The variate transforms below are implemented here rather than
/// through <random> distributions, whose algorithms are implementation
/// defined, so a (seed, stream) pair yields identical draws on every platform.
///
/// Stream splitting: substream k of a base seed s is seeded with
/// splitmix64(s + (k + 1) * 0x9E3779B97F4A7C15). Parallel work derives one
/// substream per fixed-size chunk or repetition, never per thread.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal();
  double gamma(double shape);
  double beta(double a, double b);
  double exponential(double rate);
  double weibull(double shape, double scale);
  bool bernoulli(double p) { return uniform() < p; }
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace valsize
