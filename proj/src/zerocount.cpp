#include "levelcross/zerocount.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "levelcross/detail/parallel.hpp"
#include "levelcross/errors.hpp"
#include "levelcross/rng.hpp"

namespace levelcross {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ArgumentTracker {
  const std::function<Complex(Complex)>& w;
  const WindingOptions& options;
  double total_angle = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;

  Complex sample(Complex z) {
    const Complex value = w(z);
    const double a = std::abs(value);
    if (!std::isfinite(a)) throw BoundaryHit("non-finite value on the contour");
    min_abs = std::min(min_abs, a);
    max_abs = std::max(max_abs, a);
    return value;
  }

  // Adds the argument change of w along [z0, z1] given the endpoint values.
  // A segment is accepted once both halves turn by less than the step bound
  // and agree with the whole; the midpoint test catches full turns that the
  // endpoints alone cannot see.
  void segment(Complex z0, Complex w0, Complex z1, Complex w1, int depth) {
    if (w0 == 0.0 || w1 == 0.0) throw BoundaryHit("zero of S - K on the contour");
    const Complex zm = 0.5 * (z0 + z1);
    const Complex wm = sample(zm);
    if (wm == 0.0) throw BoundaryHit("zero of S - K on the contour");
    const double whole = std::arg(w1 / w0);
    const double left = std::arg(wm / w0);
    const double right = std::arg(w1 / wm);
    const double bound = options.max_step_angle;
    if (std::abs(whole) < bound && std::abs(left) < bound && std::abs(right) < bound &&
        std::abs(left + right - whole) < 1e-9) {
      total_angle += left + right;
      return;
    }
    if (depth >= options.max_depth) {
      throw BoundaryHit("argument tracking did not resolve near the contour");
    }
    segment(z0, w0, zm, wm, depth + 1);
    segment(zm, wm, z1, w1, depth + 1);
  }
};

}  // namespace

int count_zeros_winding(const std::function<Complex(Complex)>& w, const Rectangle& region,
                        const WindingOptions& options) {
  if (options.initial_segments == 0) throw ConfigError("initial_segments must be > 0");
  const std::array<Complex, 5> corners = {
      Complex(region.x_min, region.y_min), Complex(region.x_max, region.y_min),
      Complex(region.x_max, region.y_max), Complex(region.x_min, region.y_max),
      Complex(region.x_min, region.y_min)};

  ArgumentTracker tracker{w, options};
  const std::size_t m = options.initial_segments;
  Complex z_prev = corners[0];
  Complex w_prev = tracker.sample(z_prev);
  const Complex w_start = w_prev;
  for (std::size_t edge = 0; edge < 4; ++edge) {
    for (std::size_t i = 1; i <= m; ++i) {
      const bool last = edge == 3 && i == m;
      const double t = static_cast<double>(i) / static_cast<double>(m);
      const Complex z = i == m ? corners[edge + 1] : corners[edge] + t * (corners[edge + 1] - corners[edge]);
      const Complex wz = last ? w_start : tracker.sample(z);
      tracker.segment(z_prev, w_prev, z, wz, 0);
      z_prev = z;
      w_prev = wz;
    }
  }

  if (tracker.min_abs < options.hit_ratio * tracker.max_abs) {
    throw BoundaryHit("|S - K| nearly vanishes on the contour");
  }
  const double turns = tracker.total_angle / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-6) {
    throw BoundaryHit("winding number is not an integer (" + std::to_string(turns) + ")");
  }
  return static_cast<int>(rounded);
}

int count_zeros_winding(std::span<const Complex> coeffs, const BasisFamily& basis,
                        ComplexLevel level, const Rectangle& region,
                        const WindingOptions& options) {
  if (coeffs.size() != basis.count()) {
    throw ConfigError("coefficient count does not match the basis");
  }
  const Complex k = level.value();
  const std::size_t n = basis.count();
  auto w = [&, n](Complex z) {
    // Small per-call buffers; the contour has at most a few thousand points.
    std::vector<Complex> f(n), df(n);
    basis.evaluate(z, f, df);
    Complex s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += coeffs[j] * f[j];
    return s - k;
  };
  return count_zeros_winding(std::function<Complex(Complex)>(w), region, options);
}

int count_zeros_companion(std::span<const Complex> coeffs, ComplexLevel level,
                          const Rectangle& region, double boundary_tol) {
  if (coeffs.size() < 2) throw ConfigError("companion counter needs degree >= 1");
  const std::size_t degree = coeffs.size() - 1;
  const Complex lead = coeffs[degree];
  if (lead == 0.0) throw ContractViolation("leading coefficient is zero");

  std::vector<Complex> a(coeffs.begin(), coeffs.end());
  a[0] -= level.value();

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(degree),
                                                      static_cast<Eigen::Index>(degree));
  const auto d = static_cast<Eigen::Index>(degree);
  for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -a[static_cast<std::size_t>(i)] / lead;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw Error("companion eigenvalue solver failed");

  int inside = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const Complex root = solver.eigenvalues()(i);
    if (region.boundary_distance(root) < boundary_tol) {
      throw BoundaryHit("a root lies within tolerance of the region boundary");
    }
    if (region.contains(root)) ++inside;
  }
  return inside;
}

std::vector<Complex> draw_coefficients(const CoefficientProfile& profile, std::uint64_t seed,
                                       std::uint64_t trial) {
  std::vector<Complex> eta(profile.size());
  for (std::size_t j = 0; j < profile.size(); ++j) {
    const auto& law = profile[j];
    const double a = rng::normal({seed, trial, 2 * j}, law.mu_a, std::sqrt(law.var_a));
    const double b = rng::normal({seed, trial, 2 * j + 1}, law.mu_b, std::sqrt(law.var_b));
    eta[j] = Complex(a, b);
  }
  return eta;
}

MCEstimate estimate_expected_count(const CoefficientProfile& profile, const BasisFamily& basis,
                                   ComplexLevel level, const Rectangle& region,
                                   std::size_t trials, std::uint64_t seed,
                                   const MonteCarloOptions& options) {
  if (trials < 100) throw ConfigError("Monte Carlo needs at least 100 trials");
  if (basis.count() != profile.size()) {
    throw ConfigError("basis and coefficient profile differ in length");
  }

  bool use_companion = false;
  switch (options.counter) {
    case ZeroCounter::automatic:
      use_companion = dynamic_cast<const MonomialBasis*>(&basis) != nullptr;
      break;
    case ZeroCounter::companion:
      if (dynamic_cast<const MonomialBasis*>(&basis) == nullptr) {
        throw ConfigError("the companion counter needs a monomial basis");
      }
      use_companion = true;
      break;
    case ZeroCounter::winding:
      break;
  }

  constexpr int kDiscarded = -1;
  std::vector<int> counts(trials, kDiscarded);
  detail::parallel_for(trials, options.threads, [&](std::size_t t) {
    const std::vector<Complex> eta = draw_coefficients(profile, seed, t);
    try {
      counts[t] = use_companion ? count_zeros_companion(eta, level, region)
                                : count_zeros_winding(eta, basis, level, region, options.winding);
    } catch (const BoundaryHit&) {
      counts[t] = kDiscarded;
    } catch (const ContractViolation&) {
      counts[t] = kDiscarded;  // zero leading coefficient, a null event
    }
  });

  MCEstimate est;
  est.trials = trials;
  double sum = 0.0;
  std::size_t used = 0;
  for (int c : counts) {
    if (c == kDiscarded) {
      ++est.discarded_trials;
    } else {
      sum += c;
      ++used;
    }
  }
  const double discard_fraction = static_cast<double>(est.discarded_trials) / static_cast<double>(trials);
  if (discard_fraction >= options.max_discard_fraction) {
    throw BoundaryHit("discarded " + std::to_string(est.discarded_trials) + " of " +
                      std::to_string(trials) +
                      " trials; the region boundary probably crosses a high-density zone");
  }
  est.mean = sum / static_cast<double>(used);
  double ss = 0.0;
  for (int c : counts) {
    if (c != kDiscarded) ss += (c - est.mean) * (c - est.mean);
  }
  const double variance = used > 1 ? ss / static_cast<double>(used - 1) : 0.0;
  est.std_error = std::sqrt(variance / static_cast<double>(used));
  constexpr double kZ975 = 1.959963984540054;
  est.ci_low = est.mean - kZ975 * est.std_error;
  est.ci_high = est.mean + kZ975 * est.std_error;
  return est;
}

}  // namespace levelcross
