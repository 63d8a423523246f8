#include <iostream>

#include <CLI11.hpp>

#include "floquet/cli/commands.hpp"
#include "floquet/verify.hpp"

namespace fc = floquet::cli;

int main(int argc, char** argv) {
  CLI::App app{"Driven-oscillator Floquet modes: closed forms and numerical verification", "floquet-lab"};
  app.set_version_flag("--version", fc::tool_version());
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::string suites;
  fc::CommandOptions opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", config, "INI or JSON configuration")->required();
    sub->add_option("--out,-o", out, "output directory (overrides output.directory)");
    sub->add_option("--jobs,-j", opt.jobs, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
  };
  auto* qe = app.add_subcommand("quasienergy", "table of quasienergies");
  common(qe);
  qe->add_option("--n-max", opt.n_max, "largest mode index (2D: largest n1+n2)");
  auto* mode = app.add_subcommand("mode", "sample one Floquet mode on the configured grid");
  common(mode);
  mode->add_option("--index", opt.index, "mode index, \"n\" or \"n1,n2\"");
  mode->add_option("--t", opt.t, "time");
  auto* ver = app.add_subcommand("verify", "run verification suites");
  common(ver);
  ver->add_option("--suite", suites, "comma separated: residual,period,monodromy,berry,limits,shift");
  ver->add_flag("--timings", opt.timings, "record runtimes in the report");
  auto* sw = app.add_subcommand("sweep", "sweep one model parameter");
  common(sw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fc::kUsage;
  }
  if (!out.empty()) opt.out = out;
  if (!suites.empty()) {
    std::stringstream ss(suites);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const auto s = floquet::verify::parse_suite(name);
      if (!s) {
        std::cerr << "floquet-lab: error: unknown suite '" << name << "'\n";
        return fc::kUsage;
      }
      opt.suites.push_back(*s);
    }
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return fc::run_command(command, config, opt, std::cout, std::cerr);
}
