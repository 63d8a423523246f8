#pragma once

#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "floquet/model.hpp"

namespace floquet::analytic {

using cplx = std::complex<double>;

/// Mode label. n2 is only used by the coupled model; linear models count from 1.
struct ModeIndex {
  int n1 = 0;
  int n2 = 0;
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

inline constexpr int kMaxModeIndex = 64;

/// Lowest admissible index for the variant (1 for the Airy models, 0 otherwise).
int first_index(Variant v);
/// The k-th mode counted from the ground state (k = 0, 1, ...), 1D models only.
ModeIndex nth_mode(const ModelSpec& spec, int k);
void check_index(const ModelSpec& spec, ModeIndex idx);

/// Eigenvalue of the undriven Hamiltonian.
double undriven_energy(const ModelSpec& spec, ModeIndex idx);
/// Index-independent drive contribution E_t (gauge s = 0).
double drive_shift(const ModelSpec& spec);
/// Fundamental drive frequency 2 pi / T; the quasienergy zone width is hbar times this.
double zone_frequency(const ModelSpec& spec);

double quasienergy(const ModelSpec& spec, ModeIndex idx, int gauge = 0);

/// Argument of phi(t) for gauge 0 (the s-shift adds s * omega * t).
double time_phase_exponent(const ModelSpec& spec, double t);
cplx time_phase(const ModelSpec& spec, double t, int gauge = 0);

/// A_n, N_n or the coupled product normalization.
double normalization(const ModelSpec& spec, ModeIndex idx);

class FloquetMode {
 public:
  FloquetMode(const ModelSpec& spec, ModeIndex idx, int gauge = 0);

  const ModelSpec& spec() const noexcept { return spec_; }
  const TransformPlan& plan() const noexcept { return plan_; }
  ModeIndex index() const noexcept { return idx_; }
  int gauge() const noexcept { return gauge_; }
  double quasienergy() const noexcept { return energy_; }
  double normalization() const noexcept { return norm_; }
  double period() const noexcept { return plan_.period; }

  /// Undriven eigenfunction (1D) at y.
  double stationary(double y) const;
  /// Undriven coupled eigenfunction at lab coordinates.
  double stationary(double y1, double y2) const;

  cplx operator()(double x, double t) const;
  cplx operator()(double x1, double x2, double t) const;

  /// Left end of the translated half-line on which the Airy modes are normalized.
  /// -infinity for the oscillator models.
  double support_lower(double t) const;

 private:
  ModelSpec spec_;
  TransformPlan plan_;
  ModeIndex idx_;
  int gauge_ = 0;
  double energy_ = 0.0;
  double norm_ = 1.0;
  // linear: Ai(k*y + a_n); oscillators: sqrt(a) psi_n(a y)
  double k_ = 1.0;
  double airy_zero_ = 0.0;
  double a1_ = 1.0, a2_ = 1.0;
  NormalModeData nm_{};
};

/// Finite superposition sum_n c_n exp(-i E_n t / hbar) u_n(x, t).
class Wavefunction {
 public:
  Wavefunction(const ModelSpec& spec, const std::vector<std::pair<ModeIndex, cplx>>& terms,
               int gauge = 0);
  cplx operator()(double x, double t) const;
  cplx operator()(double x1, double x2, double t) const;

 private:
  double hbar_;
  std::vector<std::pair<FloquetMode, cplx>> terms_;
};

cplx wavefunction(const ModelSpec& spec, const std::vector<std::pair<ModeIndex, cplx>>& terms,
                  double x, double t);

/// Harmonic and coupled models only; UnsupportedVariant otherwise.
double berry_phase_analytic(const ModelSpec& spec);

struct PhaseDecomposition {
  double chi = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  static PhaseDecomposition from(double chi, double delta) { return {chi, delta, chi - delta}; }
};

/// Overall phase -E_n T / hbar over one period (gauge 0).
double overall_phase(const ModelSpec& spec, ModeIndex idx);

}  // namespace floquet::analytic
