#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levelcross/density.hpp"
#include "levelcross/model.hpp"

namespace levelcross::cli {

enum class BasisKind { monomial, weighted_monomial, brownian_prefix };
enum class TheoremChoice { automatic, t2, t3, t4, t5 };

// Everything a run needs. Profile vectors hold either one value (broadcast
// to every index) or degree + 1 values.
struct RunConfig {
  BasisKind basis = BasisKind::monomial;
  std::size_t degree = 2;
  std::vector<double> weights;  // weighted-monomial only
  std::vector<double> times;    // brownian-prefix only

  std::vector<double> mu_a{0.0};
  std::vector<double> var_a{1.0};
  std::vector<double> mu_b{0.0};
  std::vector<double> var_b{1.0};

  double k1 = 0.0;
  double k2 = 0.0;

  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = -1.0;
  double y_max = 1.0;

  std::size_t nx = 101;
  std::size_t ny = 101;

  std::size_t trials = 10000;
  std::uint64_t seed = 1;

  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  std::size_t max_cells = 20000;

  TheoremChoice theorem = TheoremChoice::automatic;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Every key accepted in a config file (and as a --key flag).
const std::vector<std::string>& config_keys();

// "key = value" lines; '#' starts a comment; lists are comma separated.
// Unknown keys and duplicates are ConfigErrors.
std::map<std::string, std::string> parse_key_values(std::string_view text);

// Applies the given key/value overrides on top of `base`.
RunConfig apply_values(const std::map<std::string, std::string>& values, RunConfig base = {});

RunConfig parse_config(std::string_view text);

// Text that parse_config reads back to an identical RunConfig.
std::string to_config_text(const RunConfig& config);

// Basis, profile and evaluator selected by a config.
struct ResolvedRun {
  BasisPtr basis;
  CoefficientProfile profile;
  std::optional<BrownianModel> brownian;
  Theorem theorem;
  ComplexLevel level;
  Rectangle region;
};

// Validates the config and builds the model objects. auto picks theorem 5
// for a Brownian basis, 4 for nonzero means, 3 for one common variance and
// 2 otherwise.
ResolvedRun resolve(const RunConfig& config);

DensityFunction density_function(const ResolvedRun& run);

std::string theorem_name(Theorem t);

}  // namespace levelcross::cli
