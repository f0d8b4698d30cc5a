#pragma once

#include <string>

#include "levelcross/cli/config.hpp"

namespace levelcross::cli {

struct CommandResult {
  std::string output;       // CSV or JSON, LF terminated
  std::string diagnostics;  // for stderr; empty on success
  int exit_code = 0;
};

// CSV "x,y,h" over the nx-by-ny grid spanning the region, endpoints
// included, x varying fastest. Undefined points are written as nan.
CommandResult cmd_density(const RunConfig& config);

// {"value", "error_estimate", "converged"}
CommandResult cmd_expect(const RunConfig& config);

// {"trials", "mean", "std_error", "ci_low", "ci_high", "discarded"}
CommandResult cmd_mc(const RunConfig& config);

// {"quadrature": {...}, "mc": {...}, "z_score", "agree"}; exits nonzero
// unless |value - mean| <= 3 std_error + error_estimate.
CommandResult cmd_compare(const RunConfig& config);

// Random-configuration agreement between the evaluators that must coincide.
// Configurations are drawn from the config's seed.
CommandResult cmd_reduce_check(const RunConfig& config);

}  // namespace levelcross::cli
