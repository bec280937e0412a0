#pragma once

#include "espresso/series.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testutil {

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(n);
  double v = 0.0;
  for (auto& e : x) {
    v += g(rng);
    e = v;
  }
  return x;
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& e : x) e = g(rng);
  return x;
}

// Two phases with different level and motif: a sine of period 20 around 0,
// then a sawtooth of period 20 around 3.
inline std::vector<double> two_phase(std::size_t n, std::size_t boundary, double noise,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, noise);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = double(i) / 20.0;
    x[i] = i < boundary ? std::sin(2.0 * M_PI * t) : 3.0 + 2.0 * (t - std::floor(t)) - 1.0;
    if (noise > 0.0) x[i] += g(rng);
  }
  return x;
}

inline espresso::MultiSeries one_channel(std::vector<double> x) {
  return espresso::validate_series({std::move(x)});
}

} // namespace testutil
