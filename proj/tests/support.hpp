#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "levelcross/model.hpp"

namespace levelcross::testing {

inline double rel_dev(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Test-side randomness, deliberately separate from the library generator.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  std::size_t integer(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
  }
  Complex disc(double radius) {
    return std::polar(radius * std::sqrt(uniform(0.0, 1.0)), uniform(0.0, 6.283185307179586));
  }
  CoefficientProfile profile(std::size_t count, double var_lo, double var_hi, double mean = 0.0) {
    std::vector<CoefficientLaw> laws(count);
    for (auto& l : laws) l = {mean, uniform(var_lo, var_hi), mean, uniform(var_lo, var_hi)};
    return CoefficientProfile(std::move(laws));
  }
  CoefficientProfile profile_with_means(std::size_t count) {
    std::vector<CoefficientLaw> laws(count);
    for (auto& l : laws) l = {uniform(-1.0, 1.0), uniform(0.25, 4.0), uniform(-1.0, 1.0), uniform(0.25, 4.0)};
    return CoefficientProfile(std::move(laws));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace levelcross::testing
