#include "levelcross/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "levelcross/density.hpp"
#include "levelcross/errors.hpp"
#include "levelcross/quadrature.hpp"
#include "levelcross/rng.hpp"
#include "levelcross/zerocount.hpp"

namespace levelcross::cli {
namespace {

using nlohmann::ordered_json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// nlohmann writes non-finite numbers as null.
std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

QuadratureOptions quadrature_options(const RunConfig& c) {
  return QuadratureOptions{c.abs_tol, c.rel_tol, c.max_cells, 0};
}

ordered_json quadrature_json(const QuadratureResult& q) {
  return ordered_json{{"value", q.value}, {"error_estimate", q.error_estimate}, {"converged", q.converged}};
}

ordered_json mc_json(const MCEstimate& m) {
  return ordered_json{{"trials", m.trials},     {"mean", m.mean},       {"std_error", m.std_error},
                      {"ci_low", m.ci_low},     {"ci_high", m.ci_high}, {"discarded", m.discarded_trials}};
}

MCEstimate run_mc(const ResolvedRun& run, const RunConfig& c) {
  return estimate_expected_count(run.profile, *run.basis, run.level, run.region, c.trials, c.seed);
}

double relative_deviation(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Deterministic draws for the reduction suite.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : seed_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * rng::uniform(rng::StreamKey{seed_, 0, slot_++});
  }
  std::size_t integer(std::size_t lo, std::size_t hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    return lo + std::min(static_cast<std::size_t>(uniform(0.0, span)), hi - lo);
  }
  Complex disc(double radius) {
    const double r = radius * std::sqrt(uniform(0.0, 1.0));
    const double t = uniform(0.0, 2.0 * std::numbers::pi);
    return std::polar(r, t);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t slot_ = 0;
};

struct Check {
  std::string name;
  double tolerance;
  double max_dev = 0.0;
  std::size_t samples = 0;
  std::size_t failures = 0;  // evaluation errors
  void record(double a, double b) {
    max_dev = std::max(max_dev, relative_deviation(a, b));
    ++samples;
  }
  bool pass() const { return failures == 0 && max_dev <= tolerance; }
};

CoefficientProfile random_profile(Sampler& s, std::size_t count, bool equal, double mean) {
  std::vector<CoefficientLaw> laws(count);
  const double common = s.uniform(0.25, 4.0);
  for (auto& law : laws) {
    law.var_a = equal ? common : s.uniform(0.25, 4.0);
    law.var_b = equal ? common : s.uniform(0.25, 4.0);
    law.mu_a = mean;
    law.mu_b = mean;
  }
  return CoefficientProfile(std::move(laws));
}

template <typename F>
void guarded(Check& check, F&& f) {
  try {
    f();
  } catch (const Error&) {
    ++check.failures;
  }
}

}  // namespace

CommandResult cmd_density(const RunConfig& config) {
  const ResolvedRun run = resolve(config);
  if (config.nx < 2 || config.ny < 2) throw ConfigError("nx and ny must be >= 2");
  const DensityFunction h = density_function(run);

  std::string out = "x,y,h\n";
  std::size_t bad = 0;
  std::string first_error;
  for (std::size_t iy = 0; iy < config.ny; ++iy) {
    const double y = config.y_min + (config.y_max - config.y_min) * static_cast<double>(iy) /
                                        static_cast<double>(config.ny - 1);
    for (std::size_t ix = 0; ix < config.nx; ++ix) {
      const double x = config.x_min + (config.x_max - config.x_min) * static_cast<double>(ix) /
                                          static_cast<double>(config.nx - 1);
      double value = std::numeric_limits<double>::quiet_NaN();
      try {
        value = h(Complex(x, y));
      } catch (const DegeneratePoint& e) {
        if (bad++ == 0) first_error = e.what();
      } catch (const DegenerateCovariance& e) {
        if (bad++ == 0) first_error = e.what();
      }
      out += format_double(x) + "," + format_double(y) + "," + format_double(value) + "\n";
    }
  }
  CommandResult result{std::move(out), {}, 0};
  if (bad > 0) {
    result.diagnostics = std::to_string(bad) + " of " + std::to_string(config.nx * config.ny) +
                         " grid points undefined (first: " + first_error + ")";
    result.exit_code = 1;
  }
  return result;
}

CommandResult cmd_expect(const RunConfig& config) {
  const ResolvedRun run = resolve(config);
  const QuadratureResult q = integrate_density(density_function(run), run.region, quadrature_options(config));
  return {dump(quadrature_json(q)), {}, 0};
}

CommandResult cmd_mc(const RunConfig& config) {
  const ResolvedRun run = resolve(config);
  return {dump(mc_json(run_mc(run, config))), {}, 0};
}

CommandResult cmd_compare(const RunConfig& config) {
  const ResolvedRun run = resolve(config);
  const QuadratureResult q = integrate_density(density_function(run), run.region, quadrature_options(config));
  const MCEstimate m = run_mc(run, config);
  const double diff = q.value - m.mean;
  double z = 0.0;
  if (m.std_error > 0.0) z = diff / m.std_error;
  else if (diff != 0.0) z = std::copysign(std::numeric_limits<double>::infinity(), diff);
  const bool agree = std::abs(diff) <= 3.0 * m.std_error + q.error_estimate;

  ordered_json j;
  j["quadrature"] = quadrature_json(q);
  j["mc"] = mc_json(m);
  j["z_score"] = z;
  j["agree"] = agree;
  CommandResult result{dump(j), {}, agree ? 0 : 1};
  if (!agree) result.diagnostics = "quadrature and Monte Carlo disagree";
  return result;
}

CommandResult cmd_reduce_check(const RunConfig& config) {
  constexpr std::size_t kSamples = 100;
  Sampler s(config.seed);

  Check t4_t2{"theorem4_zero_mean_vs_theorem2", 1e-12};
  Check t4p_t2{"theorem4_published_zero_mean_vs_theorem2", 1e-12};
  Check t2_t3{"theorem2_equal_variance_vs_theorem3", 1e-12};
  Check c2_t2{"corollary2_vs_theorem2_at_zero_level", 1e-12};
  Check c1_t2{"corollary1_vs_theorem2_on_circle", 1e-12};
  Check t3_kac{"theorem3_unit_variance_zero_level_vs_closed_form", 1e-12};
  Check mp_t2{"moments_path_vs_theorem2", 1e-9};
  Check t5_t2{"theorem5_direct_vs_prefix_basis", 1e-12};

  for (std::size_t i = 0; i < kSamples; ++i) {
    const std::size_t degree = s.integer(2, 8);
    const auto basis = std::make_shared<MonomialBasis>(degree);
    const Complex z = s.disc(2.0);
    const Complex kc = s.disc(2.0);
    const ComplexLevel level(kc.real(), kc.imag());

    const CoefficientProfile general = random_profile(s, degree + 1, false, 0.0);
    const CoefficientProfile equal = random_profile(s, degree + 1, true, 0.0);
    const double radius = s.uniform(0.0, 2.0);

    guarded(t4_t2, [&] {
      const double ref = theorem2_density(general, *basis, level, z).h;
      t4_t2.record(theorem4_density(general, *basis, level, z).h, ref);
      t4p_t2.record(theorem4_density(general, *basis, level, z, Theorem4Form::as_published).h, ref);
    });
    guarded(t2_t3, [&] {
      t2_t3.record(theorem2_density(equal, *basis, level, z).h,
                   theorem3_density(*equal.common_variance(), *basis, level, z).h);
    });
    guarded(c2_t2, [&] {
      c2_t2.record(corollary2_density(general, *basis, z),
                   theorem2_density(general, *basis, ComplexLevel(0.0, 0.0), z).h);
    });
    guarded(c1_t2, [&] {
      c1_t2.record(corollary1_density(general, *basis, radius, z),
                   theorem2_density(general, *basis, corollary1_level(radius), z).h);
    });
    guarded(t3_kac, [&] {
      const auto p = theorem3_density(1.0, *basis, ComplexLevel(0.0, 0.0), z);
      const double closed = (p.b2 - std::norm(p.b1) / p.b0) / (std::numbers::pi * p.b0);
      t3_kac.record(p.h, closed);
    });
    if (i % 2 == 0) {
      guarded(mp_t2, [&] {
        mp_t2.record(moments_path_density(general, *basis, level, z),
                     theorem2_density(general, *basis, level, z).h);
      });
    }
    guarded(t5_t2, [&] {
      std::vector<double> times(degree + 1);
      double t = 0.0;
      for (auto& ti : times) ti = (t += s.uniform(0.25, 4.0));
      const TimeGrid grid(times);
      t5_t2.record(theorem5_direct(*basis, grid, level, z).h,
                   theorem5_density(basis, grid, level, z).h);
    });
  }

  ordered_json checks = ordered_json::array();
  bool all_pass = true;
  for (const Check* c : {&t4_t2, &t4p_t2, &t2_t3, &c2_t2, &c1_t2, &t3_kac, &mp_t2, &t5_t2}) {
    checks.push_back(ordered_json{{"name", c->name},
                                  {"samples", c->samples},
                                  {"errors", c->failures},
                                  {"max_relative_deviation", c->max_dev},
                                  {"tolerance", c->tolerance},
                                  {"pass", c->pass()}});
    all_pass = all_pass && c->pass();
  }
  ordered_json j{{"seed", config.seed}, {"checks", checks}, {"pass", all_pass}};
  CommandResult result{dump(j), {}, all_pass ? 0 : 1};
  if (!all_pass) result.diagnostics = "one or more reduction checks failed";
  return result;
}

}  // namespace levelcross::cli
