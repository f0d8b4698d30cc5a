#include "levelcross/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "levelcross/errors.hpp"

namespace levelcross::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("key '" + key + "': '" + t + "' is not a number");
  }
  return value;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("key '" + key + "': '" + t + "' is not a non-negative integer");
  }
  return value;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError("key '" + key + "' needs at least one value");
  return out;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_double(xs[i]);
  }
  return out;
}

const char* basis_text(BasisKind k) {
  switch (k) {
    case BasisKind::monomial: return "monomial";
    case BasisKind::weighted_monomial: return "weighted-monomial";
    case BasisKind::brownian_prefix: return "brownian-prefix";
  }
  return "monomial";
}

const char* theorem_text(TheoremChoice t) {
  switch (t) {
    case TheoremChoice::automatic: return "auto";
    case TheoremChoice::t2: return "2";
    case TheoremChoice::t3: return "3";
    case TheoremChoice::t4: return "4";
    case TheoremChoice::t5: return "5";
  }
  return "auto";
}

std::vector<double> expand(const std::vector<double>& v, std::size_t count, const char* key) {
  if (v.size() == 1) return std::vector<double>(count, v.front());
  if (v.size() != count) {
    throw ConfigError(std::string("key '") + key + "' must have 1 or " + std::to_string(count) +
                      " values, got " + std::to_string(v.size()));
  }
  return v;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "basis", "degree", "weights", "times", "mu_a", "var_a", "mu_b", "var_b",
      "k1", "k2", "x_min", "x_max", "y_min", "y_max", "nx", "ny",
      "trials", "seed", "abs_tol", "rel_tol", "max_cells", "theorem"};
  return keys;
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> values;
  const auto& keys = config_keys();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!values.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return values;
}

RunConfig apply_values(const std::map<std::string, std::string>& values, RunConfig c) {
  for (const auto& [key, value] : values) {
    if (key == "basis") {
      if (value == "monomial") c.basis = BasisKind::monomial;
      else if (value == "weighted-monomial") c.basis = BasisKind::weighted_monomial;
      else if (value == "brownian-prefix") c.basis = BasisKind::brownian_prefix;
      else throw ConfigError("unknown basis '" + value + "'");
    } else if (key == "degree") {
      c.degree = parse_unsigned(key, value);
    } else if (key == "weights") {
      c.weights = parse_list(key, value);
    } else if (key == "times") {
      c.times = parse_list(key, value);
    } else if (key == "mu_a") {
      c.mu_a = parse_list(key, value);
    } else if (key == "var_a") {
      c.var_a = parse_list(key, value);
    } else if (key == "mu_b") {
      c.mu_b = parse_list(key, value);
    } else if (key == "var_b") {
      c.var_b = parse_list(key, value);
    } else if (key == "k1") {
      c.k1 = parse_double(key, value);
    } else if (key == "k2") {
      c.k2 = parse_double(key, value);
    } else if (key == "x_min") {
      c.x_min = parse_double(key, value);
    } else if (key == "x_max") {
      c.x_max = parse_double(key, value);
    } else if (key == "y_min") {
      c.y_min = parse_double(key, value);
    } else if (key == "y_max") {
      c.y_max = parse_double(key, value);
    } else if (key == "nx") {
      c.nx = parse_unsigned(key, value);
    } else if (key == "ny") {
      c.ny = parse_unsigned(key, value);
    } else if (key == "trials") {
      c.trials = parse_unsigned(key, value);
    } else if (key == "seed") {
      c.seed = parse_unsigned(key, value);
    } else if (key == "abs_tol") {
      c.abs_tol = parse_double(key, value);
    } else if (key == "rel_tol") {
      c.rel_tol = parse_double(key, value);
    } else if (key == "max_cells") {
      c.max_cells = parse_unsigned(key, value);
    } else if (key == "theorem") {
      if (value == "auto") c.theorem = TheoremChoice::automatic;
      else if (value == "2") c.theorem = TheoremChoice::t2;
      else if (value == "3") c.theorem = TheoremChoice::t3;
      else if (value == "4") c.theorem = TheoremChoice::t4;
      else if (value == "5") c.theorem = TheoremChoice::t5;
      else throw ConfigError("theorem must be one of auto, 2, 3, 4, 5");
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  return c;
}

RunConfig parse_config(std::string_view text) { return apply_values(parse_key_values(text)); }

std::string to_config_text(const RunConfig& c) {
  std::ostringstream out;
  out << "basis = " << basis_text(c.basis) << '\n';
  out << "degree = " << c.degree << '\n';
  if (!c.weights.empty()) out << "weights = " << format_list(c.weights) << '\n';
  if (!c.times.empty()) out << "times = " << format_list(c.times) << '\n';
  out << "mu_a = " << format_list(c.mu_a) << '\n';
  out << "var_a = " << format_list(c.var_a) << '\n';
  out << "mu_b = " << format_list(c.mu_b) << '\n';
  out << "var_b = " << format_list(c.var_b) << '\n';
  out << "k1 = " << format_double(c.k1) << '\n';
  out << "k2 = " << format_double(c.k2) << '\n';
  out << "x_min = " << format_double(c.x_min) << '\n';
  out << "x_max = " << format_double(c.x_max) << '\n';
  out << "y_min = " << format_double(c.y_min) << '\n';
  out << "y_max = " << format_double(c.y_max) << '\n';
  out << "nx = " << c.nx << '\n';
  out << "ny = " << c.ny << '\n';
  out << "trials = " << c.trials << '\n';
  out << "seed = " << c.seed << '\n';
  out << "abs_tol = " << format_double(c.abs_tol) << '\n';
  out << "rel_tol = " << format_double(c.rel_tol) << '\n';
  out << "max_cells = " << c.max_cells << '\n';
  out << "theorem = " << theorem_text(c.theorem) << '\n';
  return out.str();
}

ResolvedRun resolve(const RunConfig& c) {
  if (c.degree < 1) throw ConfigError("degree must be >= 1");
  const std::size_t count = c.degree + 1;

  const ComplexLevel level(c.k1, c.k2);
  const Rectangle region(c.x_min, c.x_max, c.y_min, c.y_max);

  const auto mu_a = expand(c.mu_a, count, "mu_a");
  const auto mu_b = expand(c.mu_b, count, "mu_b");

  if (c.basis == BasisKind::brownian_prefix) {
    if (c.times.size() != count) {
      throw ConfigError("brownian-prefix needs degree + 1 = " + std::to_string(count) + " times");
    }
    const bool zero_means = std::all_of(mu_a.begin(), mu_a.end(), [](double m) { return m == 0.0; }) &&
                            std::all_of(mu_b.begin(), mu_b.end(), [](double m) { return m == 0.0; });
    if (!zero_means) throw ConfigError("brownian-prefix increments have zero mean");
    if (c.theorem != TheoremChoice::automatic && c.theorem != TheoremChoice::t5 &&
        c.theorem != TheoremChoice::t2) {
      throw ConfigError("brownian-prefix runs use theorem 5 (or its theorem 2 form)");
    }
    BrownianModel model = build_brownian_basis(std::make_shared<MonomialBasis>(c.degree),
                                               TimeGrid(c.times));
    ResolvedRun run{model.basis, model.profile, model, Theorem::t5, level, region};
    return run;
  }
  if (c.theorem == TheoremChoice::t5) throw ConfigError("theorem 5 needs basis = brownian-prefix");

  BasisPtr basis;
  if (c.basis == BasisKind::monomial) {
    basis = std::make_shared<MonomialBasis>(c.degree);
  } else {
    if (c.weights.size() != count) {
      throw ConfigError("weighted-monomial needs degree + 1 = " + std::to_string(count) + " weights");
    }
    basis = std::make_shared<WeightedMonomialBasis>(c.weights);
  }

  const auto var_a = expand(c.var_a, count, "var_a");
  const auto var_b = expand(c.var_b, count, "var_b");
  std::vector<CoefficientLaw> laws(count);
  for (std::size_t j = 0; j < count; ++j) laws[j] = {mu_a[j], var_a[j], mu_b[j], var_b[j]};
  CoefficientProfile profile(std::move(laws));

  Theorem theorem = Theorem::t2;
  switch (c.theorem) {
    case TheoremChoice::automatic:
      if (!profile.has_zero_means()) theorem = Theorem::t4;
      else if (profile.common_variance()) theorem = Theorem::t3;
      else theorem = Theorem::t2;
      break;
    case TheoremChoice::t2:
      if (!profile.has_zero_means()) throw ConfigError("theorem 2 needs zero means");
      theorem = Theorem::t2;
      break;
    case TheoremChoice::t3:
      if (!profile.has_zero_means() || !profile.common_variance()) {
        throw ConfigError("theorem 3 needs zero means and var_a = var_b = one common value");
      }
      theorem = Theorem::t3;
      break;
    case TheoremChoice::t4:
      theorem = Theorem::t4;
      break;
    case TheoremChoice::t5:
      break;  // rejected above
  }
  return ResolvedRun{std::move(basis), std::move(profile), std::nullopt, theorem, level, region};
}

DensityFunction density_function(const ResolvedRun& run) {
  if (run.theorem == Theorem::t5) return make_density(*run.brownian, run.level);
  return make_density(run.theorem, run.profile, run.basis, run.level);
}

std::string theorem_name(Theorem t) {
  switch (t) {
    case Theorem::t2: return "2";
    case Theorem::t3: return "3";
    case Theorem::t4: return "4";
    case Theorem::t5: return "5";
  }
  return "?";
}

}  // namespace levelcross::cli
