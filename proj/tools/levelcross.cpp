#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "levelcross/cli/commands.hpp"
#include "levelcross/cli/config.hpp"
#include "levelcross/errors.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw levelcross::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  namespace lc = levelcross::cli;

  CLI::App app{"Expected level crossings of random sums"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  bool echo_config = false;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--out", out_path, "write the result here instead of stdout");
  app.add_flag("--echo-config", echo_config, "print the effective config to stderr");

  // Every config key is also a flag; flags override the file.
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  for (const auto& key : lc::config_keys()) {
    flag_options[key] = app.add_option("--" + key, flag_values[key], "config key '" + key + "'");
  }

  CLI::App* density = app.add_subcommand("density", "density grid as CSV x,y,h");
  CLI::App* expect = app.add_subcommand("expect", "expected count over the region by quadrature");
  CLI::App* mc = app.add_subcommand("mc", "expected count over the region by simulation");
  CLI::App* compare = app.add_subcommand("compare", "quadrature against simulation");
  CLI::App* reduce = app.add_subcommand("reduce-check", "agreement of the evaluators that must coincide");

  CLI11_PARSE(app, argc, argv);

  try {
    std::map<std::string, std::string> values;
    if (!config_path.empty()) values = lc::parse_key_values(read_file(config_path));
    for (const auto& [key, option] : flag_options) {
      if (option->count() > 0) values[key] = flag_values[key];
    }
    const lc::RunConfig config = lc::apply_values(values);
    if (echo_config) std::cerr << lc::to_config_text(config);

    lc::CommandResult result;
    if (density->parsed()) result = lc::cmd_density(config);
    else if (expect->parsed()) result = lc::cmd_expect(config);
    else if (mc->parsed()) result = lc::cmd_mc(config);
    else if (compare->parsed()) result = lc::cmd_compare(config);
    else if (reduce->parsed()) result = lc::cmd_reduce_check(config);

    if (out_path.empty()) {
      std::cout << result.output;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw levelcross::ConfigError("cannot write '" + out_path + "'");
      out << result.output;
    }
    if (!result.diagnostics.empty()) std::cerr << "levelcross: " << result.diagnostics << '\n';
    return result.exit_code;
  } catch (const levelcross::Error& e) {
    std::cerr << "levelcross: " << e.what() << '\n';
    return 2;
  }
}
