#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "levelcross/model.hpp"

namespace levelcross {

struct WindingOptions {
  // Uniform segments per rectangle edge before adaptive refinement.
  std::size_t initial_segments = 32;
  // Segments are bisected until the argument change across each one is
  // below this bound.
  double max_step_angle = std::numbers::pi / 2.0;
  int max_depth = 40;
  // min |w| < hit_ratio * max |w| on the sampled boundary is a boundary hit.
  double hit_ratio = 1e-9;
};

// Winding number of w(z) around 0 as z runs counterclockwise over the
// rectangle's boundary, i.e. the number of zeros of w inside (argument
// principle, multiplicities included). Throws BoundaryHit when a zero sits
// on or numerically at the contour.
int count_zeros_winding(const std::function<Complex(Complex)>& w, const Rectangle& region,
                        const WindingOptions& options = {});

// Zeros of sum_j coeffs[j] f_j(z) - K inside the region.
int count_zeros_winding(std::span<const Complex> coeffs, const BasisFamily& basis,
                        ComplexLevel level, const Rectangle& region,
                        const WindingOptions& options = {});

// Zeros of sum_j coeffs[j] z^j - K inside the region, from the eigenvalues of
// the monic companion matrix. The leading coefficient must be nonzero.
// Eigenvalues within boundary_tol of the boundary raise BoundaryHit.
int count_zeros_companion(std::span<const Complex> coeffs, ComplexLevel level,
                          const Rectangle& region, double boundary_tol = 1e-9);

// One coefficient draw: eta_j = a_j + i b_j, a_j from slot 2j, b_j from 2j+1.
std::vector<Complex> draw_coefficients(const CoefficientProfile& profile, std::uint64_t seed,
                                       std::uint64_t trial);

struct MCEstimate {
  std::size_t trials = 0;  // requested
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;   // 95% normal interval
  double ci_high = 0.0;
  std::size_t discarded_trials = 0;
};

enum class ZeroCounter {
  automatic,  // companion for MonomialBasis, winding otherwise
  winding,
  companion,
};

struct MonteCarloOptions {
  ZeroCounter counter = ZeroCounter::automatic;
  unsigned threads = 0;
  double max_discard_fraction = 0.01;
  WindingOptions winding;
};

// Mean number of zeros of S_N - K in the region over `trials` independent
// draws. Trials whose count is undecidable (boundary hits) are discarded;
// reaching max_discard_fraction aborts. Results depend only on (seed,
// trials), not on thread count.
MCEstimate estimate_expected_count(const CoefficientProfile& profile, const BasisFamily& basis,
                                   ComplexLevel level, const Rectangle& region,
                                   std::size_t trials, std::uint64_t seed,
                                   const MonteCarloOptions& options = {});

}  // namespace levelcross
