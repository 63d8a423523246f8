#pragma once

// Periodically driven model definitions, resonance checks, separation
// coefficients of the time-dependent unitary transform, and the normal-mode
// decomposition of the coupled oscillators.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace floquet {

/// Particle in the potential m g x, driven by lambda x cos(omega t).
struct LinearSingleDrive {
  double m = 1.0;
  double g = 1.0;
  double lambda = 0.0;
  double omega = 1.0;
};

/// Linear potential with two drives lambda_k x cos(omega_k t).
struct LinearDualDrive {
  double m = 1.0;
  double g = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double omega1 = 1.0;
  double omega2 = 2.0;
};

/// Oscillator (m, omega_m) driven by lambda x cos(omega t).
struct HarmonicDriven {
  double m = 1.0;
  double omega_m = 1.0;
  double lambda = 0.0;
  double omega = 2.0;
};

/// Two oscillators coupled by g x1 x2; the first is driven by lambda x1 cos(omega t).
struct CoupledDriven {
  double m1 = 1.0;
  double m2 = 1.0;
  double omega1 = 1.0;
  double omega2 = 1.5;
  double g = 0.0;
  double lambda = 0.0;
  double omega = 2.5;
};

enum class Variant { LinearSingleDrive, LinearDualDrive, HarmonicDriven, CoupledDriven };

using ModelParams = std::variant<LinearSingleDrive, LinearDualDrive, HarmonicDriven, CoupledDriven>;

struct ModelSpec {
  ModelParams params;
  double hbar = 1.0;

  Variant variant() const noexcept { return static_cast<Variant>(params.index()); }
  int dimension() const noexcept { return variant() == Variant::CoupledDriven ? 2 : 1; }
  bool is_linear_potential() const noexcept {
    return variant() == Variant::LinearSingleDrive || variant() == Variant::LinearDualDrive;
  }
};

std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

/// Throws ConfigError on non-positive masses/frequencies/hbar or non-finite
/// values, StabilityError for an unstable coupled spectrum.
void validate(const ModelSpec& spec);

/// Numeric fields of the active variant in declaration order, plus "hbar".
std::vector<std::pair<std::string, double>> parameters(const ModelSpec& spec);
/// Default-constructed spec of the given variant.
ModelSpec default_spec(Variant v);
/// Sets a numeric field by name; ConfigError for names the variant does not have.
void set_parameter(ModelSpec& spec, std::string_view name, double value);

inline constexpr double kResonanceEpsilon = 1e-9;

struct ResonanceDiagnostic {
  std::string denominator;  // which factor vanishes, e.g. "omega_m^2 - omega^2"
  double value = 0.0;
  double scale = 0.0;
  std::string message() const;
};

/// Every denominator of the separation coefficients with its signed value.
std::vector<ResonanceDiagnostic> resonance_denominators(const ModelSpec& spec);

/// Every coefficient denominator D must satisfy |D| > eps * S, S being the
/// sum of the magnitudes of D's terms.
std::optional<ResonanceDiagnostic> check_resonance(const ModelSpec& spec,
                                                   double eps = kResonanceEpsilon);

/// One e^{i alpha A(t) x_c} e^{i beta B(t) p_c} factor with A = sin(omega t),
/// B = cos(omega t) acting on coordinate `coordinate`.
struct ShiftTerm {
  int coordinate = 0;
  double alpha = 0.0;  // 1/length
  double beta = 0.0;   // 1/momentum
  double omega = 0.0;  // angular frequency of both profiles
};

struct TransformPlan {
  std::vector<ShiftTerm> shifts;
  double period = 0.0;

  /// hbar * sum(alpha A(t)) on a coordinate: the momentum boost.
  double momentum_boost(int coordinate, double t, double hbar) const;
  /// hbar * sum(beta B(t)) on a coordinate: the argument translation.
  double translation(int coordinate, double t, double hbar) const;
};

/// Separation coefficients; throws ResonanceError, or ConfigError for
/// incommensurate dual drives.
TransformPlan separate(const ModelSpec& spec);

/// Drive period (common period for the dual drive).
double drive_period(const ModelSpec& spec);

struct Commensurability {
  int p = 1;  // omega1 / omega2 = p / q
  int q = 1;
};
inline constexpr int kMaxCommensurateDenominator = 64;
std::optional<Commensurability> commensurability(double omega1, double omega2);

struct NormalModeData {
  double theta = 0.0;
  double eta = 1.0;
  double M = 1.0;
  double Omega1 = 1.0;
  double Omega2 = 1.0;
};

/// Rotation angle, mass scaling and normal-mode frequencies of the coupled
/// oscillators. Throws StabilityError if either Omega^2 <= 0.
NormalModeData normal_modes(const CoupledDriven& p);

/// Linear map (X1, X2, P1, P2) -> (x1, x2, p1, p2) of the canonical rotation.
Eigen::Matrix4d canonical_transform(const NormalModeData& nm);

/// Rotated coordinates (X1, X2) of the lab point (x1, x2).
struct RotatedPoint {
  double X1;
  double X2;
};
RotatedPoint to_normal_coordinates(const NormalModeData& nm, double x1, double x2);

}  // namespace floquet
