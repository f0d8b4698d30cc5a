// One line per acceptance criterion; exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "levelcross/density.hpp"
#include "levelcross/errors.hpp"
#include "levelcross/quadrature.hpp"
#include "levelcross/zerocount.hpp"
#include "support.hpp"

using namespace levelcross;
using levelcross::testing::Draws;
using levelcross::testing::rel_dev;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome ac1_reduction_chain() {
  Stopwatch clock;
  Draws d(101);
  double t4 = 0.0, t3 = 0.0, c2 = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = d.integer(2, 8);
    const MonomialBasis b(n);
    const auto p = d.profile(n + 1, 0.25, 4.0);
    const double s2 = d.uniform(0.25, 4.0);
    const Complex z = d.disc(2.0);
    const ComplexLevel level(d.disc(2.0));
    const double h2 = theorem2_density(p, b, level, z).h;
    t4 = std::max(t4, rel_dev(theorem4_density(p, b, level, z).h, h2));
    t3 = std::max(t3, rel_dev(theorem2_density(CoefficientProfile::equal_variance(n + 1, s2), b, level, z).h,
                              theorem3_density(s2, b, level, z).h));
    c2 = std::max(c2, rel_dev(corollary2_density(p, b, z), theorem2_density(p, b, {}, z).h));
  }
  const double t = clock.seconds();
  const bool ok = t4 <= 1e-12 && t3 <= 1e-12 && c2 <= 1e-12 && t < 1.0;
  return {ok, fmt("t4/t2 %.2e, t2/t3 %.2e, c2/t2 %.2e (tol 1e-12), %.3f s (limit 1 s)", t4, t3, c2, t)};
}

Outcome ac2_moments_path() {
  Stopwatch clock;
  Draws d(202);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = d.integer(2, 8);
    const MonomialBasis b(n);
    const auto p = d.profile(n + 1, 0.25, 4.0);
    const Complex z = d.disc(2.0);
    const ComplexLevel level(d.disc(2.0));
    worst = std::max(worst, rel_dev(theorem2_density(p, b, level, z).h, moments_path_density(p, b, level, z)));
  }
  const double t = clock.seconds();
  return {worst <= 1e-9 && t < 5.0, fmt("max rel dev %.2e (tol 1e-9), %.3f s (limit 5 s)", worst, t)};
}

Outcome ac3_total_count() {
  Stopwatch clock;
  Draws d(303);
  double worst_total = 0.0, worst_increment = 0.0;
  bool converged = true;
  for (int i = 0; i < 6; ++i) {
    const std::size_t n = i % 2 == 0 ? 2 : 3;
    const double sa = d.uniform(0.5, 2.0);
    const double sb = d.uniform(0.5, 2.0);
    const auto p = CoefficientProfile::broadcast(n + 1, {0.0, sa * sa, 0.0, sb * sb});
    const ComplexLevel level(d.disc(1.0));
    const auto h = make_density(Theorem::t2, p, std::make_shared<MonomialBasis>(n), level);
    const auto inner = integrate_density(h, Rectangle(-20, 20, -20, 20), 1e-9, 1e-9, 50000);
    const auto outer = integrate_density(h, Rectangle(-40, 40, -40, 40), 1e-9, 1e-9, 50000);
    converged = converged && inner.converged && outer.converged;
    worst_total = std::max(worst_total, std::abs(inner.value - static_cast<double>(n)));
    worst_increment = std::max(worst_increment, outer.value - inner.value);
  }
  const double t = clock.seconds();
  const bool ok = converged && worst_total <= 1e-2 && worst_increment < 1e-3 && t < 60.0;
  return {ok, fmt("max |I20 - N| %.2e (tol 1e-2), max I40 - I20 %.2e (tol 1e-3), converged %s, %.2f s (limit 60 s)",
                  worst_total, worst_increment, converged ? "yes" : "no", t)};
}

struct McConfig {
  std::string name;
  CoefficientProfile profile;
  BasisPtr basis;
  DensityFunction density;
  ComplexLevel level;
  Rectangle region;
};

struct McSummary {
  int inside = 0;
  int total = 0;
  double worst_z = 0.0;
  std::string lines;
};

McSummary run_mc(const std::vector<McConfig>& configs, std::uint64_t seed) {
  McSummary s;
  for (const auto& c : configs) {
    const auto q = integrate_density(c.density, c.region, 1e-9, 1e-9, 20000);
    const auto m = estimate_expected_count(c.profile, *c.basis, c.level, c.region, 10000, seed++);
    const double z = (q.value - m.mean) / m.std_error;
    const bool in_ci = q.value >= m.ci_low && q.value <= m.ci_high;
    s.inside += in_ci ? 1 : 0;
    ++s.total;
    s.worst_z = std::max(s.worst_z, std::abs(z));
    s.lines += fmt("    %-34s quad %.5f  mc %.5f +- %.5f  z %+.2f%s\n", c.name.c_str(), q.value, m.mean,
                   m.std_error, z, in_ci ? "" : "  (outside CI)");
  }
  return s;
}

Outcome ac4_mc_agreement() {
  Stopwatch clock;
  const auto basis = std::make_shared<MonomialBasis>(3);
  const Rectangle t1(-1, 1, -1, 1);
  const Rectangle t2(0, 2, -1, 1);
  std::vector<McConfig> configs;
  for (int var = 0; var < 2; ++var) {
    for (int k = 0; k < 2; ++k) {
      for (int mean = 0; mean < 2; ++mean) {
        const double mu = mean ? 0.5 : 0.0;
        std::vector<CoefficientLaw> laws(4);
        const double va[] = {1.0, 2.0, 0.5, 1.5};
        const double vb[] = {0.5, 1.0, 2.0, 1.0};
        for (std::size_t j = 0; j < 4; ++j) {
          laws[j] = var ? CoefficientLaw{mu, va[j], mu, vb[j]} : CoefficientLaw{mu, 1.0, mu, 1.0};
        }
        const CoefficientProfile p(laws);
        const ComplexLevel level = k ? ComplexLevel(1.0, 0.5) : ComplexLevel();
        const Theorem th = mean ? Theorem::t4 : (var ? Theorem::t2 : Theorem::t3);
        const auto density = make_density(th, p, basis, level);
        const std::string name = std::string(var ? "unequal" : "equal") + (k ? " K=1+0.5i" : " K=0") +
                                 (mean ? " mu=0.5" : " mu=0");
        configs.push_back({name + " T1", p, basis, density, level, t1});
        // Half fraction on the second region: the even-parity combinations.
        if ((var + k + mean) % 2 == 0) configs.push_back({name + " T2", p, basis, density, level, t2});
      }
    }
  }
  const McSummary s = run_mc(configs, 4000);
  const double t = clock.seconds();
  const bool ok = s.total == 12 && s.inside >= 10 && s.worst_z < 4.0 && t < 600.0;
  return {ok, fmt("%d of %d inside the 95%% CI (need 10), max |z| %.2f (limit 4), %.1f s (limit 600 s)\n",
                  s.inside, s.total, s.worst_z, t) +
                  s.lines};
}

Outcome ac5_cross_oracle() {
  Stopwatch clock;
  const auto p = CoefficientProfile::equal_variance(4, 1.0);
  const MonomialBasis b(3);
  const Rectangle regions[] = {Rectangle(-1, 1, -1, 1), Rectangle(0, 2, -1, 1), Rectangle(-0.6, 0.9, -1.2, 0.3)};
  const ComplexLevel level(0.4, -0.3);
  int mismatches = 0, discarded = 0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const auto coeffs = draw_coefficients(p, 5005, trial);
    for (const auto& r : regions) {
      try {
        if (count_zeros_winding(coeffs, b, level, r) != count_zeros_companion(coeffs, level, r)) ++mismatches;
      } catch (const BoundaryHit&) {
        ++discarded;
      }
    }
  }
  const double t = clock.seconds();
  const double rate = discarded / 3000.0;
  return {mismatches == 0 && rate < 0.01 && t < 30.0,
          fmt("%d mismatches in 3000 counts, discard rate %.4f (limit 0.01), %.2f s (limit 30 s)", mismatches, rate, t)};
}

Outcome ac6_spot_values() {
  const MonomialBasis b(2);
  const auto p = CoefficientProfile::equal_variance(3, 1.0);
  double worst = rel_dev(theorem2_density(p, b, {}, 0.0).h, 1.0 / std::numbers::pi);
  worst = std::max(worst, rel_dev(theorem3_density(1.0, b, {}, 0.0).h, 1.0 / std::numbers::pi));
  for (const Complex k : {Complex(1.0, 0.5), Complex(-1.5, 0.25), Complex(0.0, 2.0), Complex(3.0, -1.0)}) {
    const double expected = std::exp(-std::norm(k) / 2.0) / std::numbers::pi;
    worst = std::max(worst, rel_dev(theorem2_density(p, b, ComplexLevel(k), 0.0).h, expected));
    worst = std::max(worst, rel_dev(theorem3_density(1.0, b, ComplexLevel(k), 0.0).h, expected));
  }
  return {worst <= 1e-12, fmt("max rel dev %.2e (tol 1e-12)", worst)};
}

Outcome ac7_brownian() {
  Stopwatch clock;
  Draws d(707);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = d.integer(2, 8);
    const auto inner = std::make_shared<MonomialBasis>(n);
    std::vector<double> times(n + 1);
    double t = 0.0;
    for (auto& ti : times) ti = (t += d.uniform(0.25, 2.0));
    const TimeGrid grid(times);
    const Complex z = d.disc(2.0);
    const ComplexLevel level(d.disc(2.0));
    worst = std::max(worst, rel_dev(theorem5_direct(*inner, grid, level, z).h, theorem5_density(inner, grid, level, z).h));
  }
  std::vector<McConfig> configs;
  const auto m1 = build_brownian_basis(std::make_shared<MonomialBasis>(2), TimeGrid({0.5, 1.5, 3.0}));
  configs.push_back({"grid 0.5,1.5,3 K=0 T1", m1.profile, m1.basis, make_density(m1, {}), {}, Rectangle(-1, 1, -1, 1)});
  const auto m2 = build_brownian_basis(std::make_shared<MonomialBasis>(3), TimeGrid({1.0, 2.0, 3.0, 4.0}));
  configs.push_back({"grid 1,2,3,4 K=0.5+0.5i T2", m2.profile, m2.basis, make_density(m2, {0.5, 0.5}), {0.5, 0.5},
                     Rectangle(0, 2, -1, 1)});
  const McSummary s = run_mc(configs, 7000);
  const bool coverage = s.inside * 12 >= 10 * s.total;
  const bool ok = worst <= 1e-12 && coverage && s.worst_z < 4.0;
  return {ok, fmt("direct vs composed max rel dev %.2e (tol 1e-12); MC %d of %d inside CI, max |z| %.2f, %.1f s\n",
                  worst, s.inside, s.total, s.worst_z, clock.seconds()) +
                  s.lines};
}

Outcome ac8_positivity_symmetry() {
  Draws d(808);
  double most_negative = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = d.integer(1, 10);
    const MonomialBasis b(n);
    const Complex z = d.disc(3.0);
    const ComplexLevel level(d.disc(3.0));
    double h = 0.0;
    switch (i % 4) {
      case 0: h = theorem2_density(d.profile(n + 1, 0.25, 4.0), b, level, z).h; break;
      case 1: h = theorem3_density(d.uniform(0.25, 4.0), b, level, z).h; break;
      case 2: h = theorem4_density(d.profile_with_means(n + 1), b, level, z).h; break;
      default: {
        std::vector<double> times(n + 1);
        double t = 0.0;
        for (auto& ti : times) ti = (t += d.uniform(0.25, 2.0));
        h = theorem5_density(std::make_shared<MonomialBasis>(n), TimeGrid(times), level, z).h;
      }
    }
    most_negative = std::min(most_negative, h / (1.0 + std::abs(h)));
  }
  double rotation = 0.0, conjugation = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = d.integer(1, 10);
    const MonomialBasis b(n);
    const double s2 = d.uniform(0.25, 4.0);
    const Complex z = d.disc(2.0);
    const double h0 = theorem3_density(s2, b, {}, z).h;
    const double h1 = theorem3_density(s2, b, {}, std::polar(std::abs(z), d.uniform(0.0, 6.3))).h;
    rotation = std::max(rotation, std::abs(h0 - h1) / h0);
    const auto p = d.profile(n + 1, 0.25, 4.0);
    const ComplexLevel level(d.uniform(-2.0, 2.0), 0.0);
    conjugation = std::max(conjugation,
                           rel_dev(theorem2_density(p, b, level, z).h, theorem2_density(p, b, level, std::conj(z)).h));
  }
  const bool ok = most_negative >= -1e-10 && rotation < 1e-10 && conjugation < 1e-10;
  return {ok, fmt("min h/(1+|h|) %.2e (floor -1e-10), rotation dev %.2e, conjugation dev %.2e (tol 1e-10)",
                  most_negative, rotation, conjugation)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 reduction chain", ac1_reduction_chain},
      {"AC2 moments-path oracle", ac2_moments_path},
      {"AC3 total-count law", ac3_total_count},
      {"AC4 MC-quadrature agreement", ac4_mc_agreement},
      {"AC5 winding vs companion", ac5_cross_oracle},
      {"AC6 closed-form spot values", ac6_spot_values},
      {"AC7 Brownian consistency", ac7_brownian},
      {"AC8 positivity and symmetry", ac8_positivity_symmetry},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
