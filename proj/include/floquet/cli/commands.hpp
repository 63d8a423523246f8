#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "floquet/analytic.hpp"
#include "floquet/cli/config.hpp"

namespace floquet::cli {

using analytic::ModeIndex;

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kNumerical = 3 };

struct CommandOptions {
  std::optional<std::filesystem::path> out;  // overrides output.directory
  int n_max = 4;
  std::optional<std::string> index;  // "n" or "n1,n2"
  double t = 0.0;
  std::vector<verify::Suite> suites;  // empty: take the config's list
  int jobs = 0;                       // 0: config value, then hardware
  bool timings = false;
};

ModeIndex parse_index(const ModelSpec& spec, const std::string& text);

/// Validation plus resonance screening shared by every command.
void check_model(const ModelSpec& spec);

int run_quasienergy(const RunConfig& c, const CommandOptions& o, std::ostream& out);
int run_mode(const RunConfig& c, const CommandOptions& o, std::ostream& out);
int run_verify(const RunConfig& c, const CommandOptions& o, std::ostream& out, std::ostream& err);
int run_sweep(const RunConfig& c, const CommandOptions& o, std::ostream& out);

int exit_code_for(const std::exception& e);

/// Loads the config, dispatches and maps exceptions to exit codes.
int run_command(const std::string& command, const std::filesystem::path& config, const CommandOptions& o,
                std::ostream& out, std::ostream& err);

}  // namespace floquet::cli
