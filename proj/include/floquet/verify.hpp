#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "floquet/analytic.hpp"
#include "floquet/model.hpp"
#include "floquet/numerics.hpp"

namespace floquet::verify {

using analytic::ModeIndex;
using numerics::Grid;

struct Tolerances {
  double residual_1d = 1e-6;
  double residual_2d = 1e-5;
  double infidelity = 1e-5;
  double phase = 1e-3;  // rad
  double monodromy_phase = 2e-3;
  double unitarity = 1e-8;
  double berry_rel = 1e-3;
  double berry_rel_coupled = 5e-3;
  double berry_n = 1e-6;  // rad
  double berry_zero = 1e-10;
  double reduction = 1e-12;
  double factorization = 1e-10;
  double shift = 1e-8;
};

/// Named tolerance access for config overrides.
std::vector<std::pair<std::string, double*>> tolerance_fields(Tolerances& t);

struct VerificationReport {
  std::string check_name;
  ModelSpec model;
  std::map<std::string, double> metrics;     // gated: metric <= tolerance of the same name
  std::map<std::string, double> tolerances;
  std::map<std::string, double> data;        // reported values without a verdict
  std::optional<std::string> error;
  bool gated = true;
  bool passed = false;
  double runtime = 0.0;  // seconds

  /// Records a gated metric together with its tolerance.
  void gate(const std::string& name, double value, double tol);
  /// Sets `passed` from metrics and tolerances (false on error, NaN or missing tolerance).
  void finalize();
  std::string verdict() const;  // "pass", "fail" or "no verdict"
};

struct ResidualOptions {
  int fd_order = 8;
  int dt_divisions = 4096;  // time-derivative step T / dt_divisions
  int gauge = 0;
  std::optional<double> tolerance;  // default: residual_1d / residual_2d
};

/// max over t samples of ||(H(t) - i hbar d/dt - E) u|| / ||u||.
VerificationReport floquet_residual(const ModelSpec& spec, ModeIndex idx, const Grid& grid,
                                    int t_samples, const ResidualOptions& opt = {},
                                    const Tolerances& tol = {});

enum class LinearBoundary {
  Window,  // Dirichlet data taken from the exact solution at both ends
  Wall,    // psi(x_min) clamped to 0; reported without a verdict
};

struct PeriodOptions {
  numerics::KineticScheme scheme = numerics::KineticScheme::Numerov;
  LinearBoundary boundary = LinearBoundary::Window;
};

VerificationReport period_fidelity(const ModelSpec& spec, ModeIndex idx, const Grid& grid, int steps,
                                   const PeriodOptions& opt = {}, const Tolerances& tol = {});

VerificationReport monodromy_check(const ModelSpec& spec, const Grid& grid, int steps, int n_modes,
                                   const numerics::MonodromyOptions& opt = {},
                                   const Tolerances& tol = {});

struct BerryOptions {
  int fd_order = 8;
  bool strict = false;
  int strict_steps = 4096;
  numerics::KineticScheme scheme = numerics::KineticScheme::Numerov;
};

/// Phase pieces from the expectation of H along the analytic cycle.
analytic::PhaseDecomposition berry_phases(const ModelSpec& spec, ModeIndex idx, const Grid& grid,
                                          int t_steps, int fd_order = 8);

VerificationReport berry_phase_numeric(const ModelSpec& spec, ModeIndex idx, const Grid& grid,
                                       int t_steps, const BerryOptions& opt = {},
                                       const Tolerances& tol = {});
VerificationReport berry_n_independence(const ModelSpec& spec, ModeIndex a, ModeIndex b,
                                        const Grid& grid, int t_steps, int fd_order = 8,
                                        const Tolerances& tol = {});

std::vector<VerificationReport> limit_suite(const ModelSpec& spec, const Tolerances& tol = {});

/// Analytic argument translation against a Fourier multiplier for the shift c(t).
VerificationReport momentum_shift_crosscheck(const analytic::FloquetMode& mode, double t,
                                             const Grid& grid, const Tolerances& tol = {});

/// The k lowest modes by undriven energy.
std::vector<ModeIndex> lowest_modes(const ModelSpec& spec, int k);

Grid default_grid(const ModelSpec& spec);
Grid default_monodromy_grid(const ModelSpec& spec);

enum class Suite { Residual, Period, Monodromy, Berry, Limits, Shift };
std::string_view suite_name(Suite s);
std::optional<Suite> parse_suite(std::string_view name);
std::vector<Suite> all_suites();

struct Settings {
  Tolerances tol;
  std::optional<Grid> grid;
  std::optional<Grid> monodromy_grid;
  int steps = 4096;
  int monodromy_steps = 4096;
  int t_samples = 8;
  int modes = 2;
  int monodromy_modes = 3;
  int fd_order = 8;
  int berry_t_steps = 256;
  bool berry_strict = false;
  numerics::KineticScheme scheme = numerics::KineticScheme::Numerov;
  int jobs = 1;
};

/// Runs one suite; a failing check becomes a report carrying the error text.
/// Suites that do not apply to the model return no reports.
std::vector<VerificationReport> run_suite(const ModelSpec& spec, Suite suite, const Settings& s);

/// JSON object for one report. `with_runtime` false writes null.
void write_json(std::ostream& os, const VerificationReport& r, bool with_runtime, int indent = 2);
std::string model_json(const ModelSpec& spec);

}  // namespace floquet::verify
