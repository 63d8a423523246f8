#include "floquet/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "floquet/errors.hpp"
#include "floquet/specfun.hpp"

namespace floquet::analytic {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_no_resonance(const ModelSpec& spec) {
  validate(spec);
  if (auto d = check_resonance(spec)) throw ResonanceError(d->message());
}

double harmonic_norm(int n, double a) {
  double log_fact = std::lgamma(n + 1.0);
  return std::sqrt(a / std::sqrt(std::numbers::pi)) * std::exp(-0.5 * (n * std::log(2.0) + log_fact));
}

double airy_scale(double m, double g, double hbar) {
  return std::cbrt(2.0 / (m * g * g * hbar * hbar));
}

double airy_norm(double m, double g, double hbar, int n) {
  const double c = airy_scale(m, g, hbar);
  const double k = c * m * g;  // Ai(k x + a_n)
  const double an = specfun::airy_zero(n);
  const double upper = (40.0 - an) / k;
  specfun::QuadratureOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-16;
  opt.initial_panels = 32 + 4 * n;
  const double I = specfun::integrate(
      [&](double x) {
        const double v = specfun::airy_ai(k * x + an);
        return v * v;
      },
      0.0, upper, opt);
  return 1.0 / std::sqrt(I);
}

}  // namespace

int first_index(Variant v) {
  return (v == Variant::LinearSingleDrive || v == Variant::LinearDualDrive) ? 1 : 0;
}

ModeIndex nth_mode(const ModelSpec& spec, int k) {
  if (spec.dimension() != 1) throw DimensionError("nth_mode: 1D models only");
  return {first_index(spec.variant()) + k, 0};
}

void check_index(const ModelSpec& spec, ModeIndex idx) {
  const int lo = first_index(spec.variant());
  const bool bad1 = idx.n1 < lo || idx.n1 > kMaxModeIndex;
  const bool bad2 = spec.dimension() == 2 ? (idx.n2 < 0 || idx.n2 > kMaxModeIndex) : false;
  if (bad1 || bad2) {
    throw RangeError("mode index out of range for " + std::string(variant_name(spec.variant())) +
                     ": (" + std::to_string(idx.n1) + "," + std::to_string(idx.n2) + ")");
  }
}

double undriven_energy(const ModelSpec& spec, ModeIndex idx) {
  check_index(spec, idx);
  const double hb = spec.hbar;
  auto airy_level = [&](double m, double g) {
    return -std::cbrt(m * g * g * hb * hb / 2.0) * specfun::airy_zero(idx.n1);
  };
  return std::visit(
      overloaded{
          [&](const LinearSingleDrive& p) { return airy_level(p.m, p.g); },
          [&](const LinearDualDrive& p) { return airy_level(p.m, p.g); },
          [&](const HarmonicDriven& p) { return hb * p.omega_m * (idx.n1 + 0.5); },
          [&](const CoupledDriven& p) {
            const auto nm = normal_modes(p);
            return hb * nm.Omega1 * (idx.n1 + 0.5) + hb * nm.Omega2 * (idx.n2 + 0.5);
          },
      },
      spec.params);
}

double drive_shift(const ModelSpec& spec) {
  require_no_resonance(spec);
  return std::visit(
      overloaded{
          [](const LinearSingleDrive& p) {
            return p.lambda * p.lambda / (4 * p.m * p.omega * p.omega);
          },
          [](const LinearDualDrive& p) {
            return p.lambda1 * p.lambda1 / (4 * p.m * p.omega1 * p.omega1) +
                   p.lambda2 * p.lambda2 / (4 * p.m * p.omega2 * p.omega2);
          },
          [](const HarmonicDriven& p) {
            const double w2 = p.omega * p.omega, wm2 = p.omega_m * p.omega_m;
            return p.lambda * p.lambda / (4 * p.m * (w2 - wm2));
          },
          [](const CoupledDriven& p) {
            const double w2 = p.omega * p.omega;
            const double Q =
                p.g * p.g - p.m1 * p.m2 * (w2 - p.omega1 * p.omega1) * (w2 - p.omega2 * p.omega2);
            return -p.m2 * p.lambda * p.lambda * (w2 - p.omega2 * p.omega2) / (4 * Q);
          },
      },
      spec.params);
}

double zone_frequency(const ModelSpec& spec) { return 2 * std::numbers::pi / drive_period(spec); }

double quasienergy(const ModelSpec& spec, ModeIndex idx, int gauge) {
  const double shift = drive_shift(spec);
  const double e = undriven_energy(spec, idx) + shift;
  if (gauge == 0) return e;
  return e + gauge * spec.hbar * zone_frequency(spec);
}

double time_phase_exponent(const ModelSpec& spec, double t) {
  require_no_resonance(spec);
  const double hb = spec.hbar;
  return std::visit(
      overloaded{
          [&](const LinearSingleDrive& p) {
            const double w = p.omega;
            return p.lambda * (p.lambda * std::cos(w * t) - 4 * p.m * p.g) * std::sin(w * t) /
                   (4 * p.m * w * w * w * hb);
          },
          [&](const LinearDualDrive& p) {
            auto single = [&](double lam, double w) {
              return lam * lam * std::sin(2 * w * t) / (8 * p.m * w * w * w) -
                     p.g * lam * std::sin(w * t) / (w * w * w);
            };
            const double w1 = p.omega1, w2 = p.omega2;
            const double cross = p.lambda1 * p.lambda2 / (2 * p.m * w1 * w2) *
                                 (std::sin((w1 + w2) * t) / (w1 + w2) -
                                  std::sin((w1 - w2) * t) / (w1 - w2));
            return (single(p.lambda1, w1) + single(p.lambda2, w2) + cross) / hb;
          },
          [&](const HarmonicDriven& p) {
            const double w2 = p.omega * p.omega, wm2 = p.omega_m * p.omega_m;
            const double d = w2 - wm2;
            return p.lambda * p.lambda * (w2 + wm2) * std::sin(2 * p.omega * t) /
                   (8 * p.m * hb * p.omega * d * d);
          },
          [&](const CoupledDriven& p) {
            const double w2 = p.omega * p.omega;
            const double o1 = p.omega1 * p.omega1, o2 = p.omega2 * p.omega2;
            const double Q = p.g * p.g - p.m1 * p.m2 * (w2 - o1) * (w2 - o2);
            const double br =
                p.m1 * p.m2 * (w2 + o1) * (w2 - o2) * (w2 - o2) + p.g * p.g * (3 * w2 - o2);
            return p.m2 * p.lambda * p.lambda * br * std::sin(2 * p.omega * t) /
                   (8 * hb * p.omega * Q * Q);
          },
      },
      spec.params);
}

cplx time_phase(const ModelSpec& spec, double t, int gauge) {
  double arg = time_phase_exponent(spec, t);
  if (gauge != 0) arg += gauge * zone_frequency(spec) * t;
  return std::polar(1.0, arg);
}

double normalization(const ModelSpec& spec, ModeIndex idx) {
  check_index(spec, idx);
  const double hb = spec.hbar;
  return std::visit(
      overloaded{
          [&](const LinearSingleDrive& p) { return airy_norm(p.m, p.g, hb, idx.n1); },
          [&](const LinearDualDrive& p) { return airy_norm(p.m, p.g, hb, idx.n1); },
          [&](const HarmonicDriven& p) {
            return harmonic_norm(idx.n1, std::sqrt(p.m * p.omega_m / hb));
          },
          [&](const CoupledDriven& p) {
            const auto nm = normal_modes(p);
            return harmonic_norm(idx.n1, std::sqrt(nm.M * nm.Omega1 / hb)) *
                   harmonic_norm(idx.n2, std::sqrt(nm.M * nm.Omega2 / hb));
          },
      },
      spec.params);
}

FloquetMode::FloquetMode(const ModelSpec& spec, ModeIndex idx, int gauge)
    : spec_(spec), plan_(separate(spec)), idx_(idx), gauge_(gauge) {
  check_index(spec, idx);
  energy_ = analytic::quasienergy(spec, idx, gauge);
  norm_ = analytic::normalization(spec, idx);
  const double hb = spec.hbar;
  std::visit(overloaded{
                 [&](const LinearSingleDrive& p) { k_ = airy_scale(p.m, p.g, hb) * p.m * p.g; },
                 [&](const LinearDualDrive& p) { k_ = airy_scale(p.m, p.g, hb) * p.m * p.g; },
                 [&](const HarmonicDriven& p) { a1_ = std::sqrt(p.m * p.omega_m / hb); },
                 [&](const CoupledDriven& p) {
                   nm_ = normal_modes(p);
                   a1_ = std::sqrt(nm_.M * nm_.Omega1 / hb);
                   a2_ = std::sqrt(nm_.M * nm_.Omega2 / hb);
                 },
             },
             spec.params);
  if (spec.is_linear_potential()) airy_zero_ = specfun::airy_zero(idx.n1);
}

double FloquetMode::stationary(double y) const {
  if (spec_.dimension() != 1) throw DimensionError("stationary(y): 1D models only");
  if (spec_.is_linear_potential()) return norm_ * specfun::airy_ai(k_ * y + airy_zero_);
  return std::sqrt(a1_) * specfun::hermite_function(idx_.n1, a1_ * y);
}

double FloquetMode::stationary(double y1, double y2) const {
  if (spec_.dimension() != 2) throw DimensionError("stationary(y1, y2): 2D models only");
  const auto r = to_normal_coordinates(nm_, y1, y2);
  return std::sqrt(a1_ * a2_) * specfun::hermite_function(idx_.n1, a1_ * r.X1) *
         specfun::hermite_function(idx_.n2, a2_ * r.X2);
}

cplx FloquetMode::operator()(double x, double t) const {
  if (spec_.dimension() != 1) throw DimensionError("mode(x, t): 1D models only");
  const double hb = spec_.hbar;
  const double boost = plan_.momentum_boost(0, t, hb) / hb;
  const double shift = plan_.translation(0, t, hb);
  double arg = boost * x + time_phase_exponent(spec_, t);
  if (gauge_ != 0) arg += gauge_ * zone_frequency(spec_) * t;
  return std::polar(stationary(x + shift), arg);
}

cplx FloquetMode::operator()(double x1, double x2, double t) const {
  if (spec_.dimension() != 2) throw DimensionError("mode(x1, x2, t): 2D models only");
  const double hb = spec_.hbar;
  double arg = (plan_.momentum_boost(0, t, hb) * x1 + plan_.momentum_boost(1, t, hb) * x2) / hb +
               time_phase_exponent(spec_, t);
  if (gauge_ != 0) arg += gauge_ * zone_frequency(spec_) * t;
  return std::polar(
      stationary(x1 + plan_.translation(0, t, hb), x2 + plan_.translation(1, t, hb)), arg);
}

double FloquetMode::support_lower(double t) const {
  if (!spec_.is_linear_potential()) return -std::numeric_limits<double>::infinity();
  return -plan_.translation(0, t, spec_.hbar);
}

Wavefunction::Wavefunction(const ModelSpec& spec,
                           const std::vector<std::pair<ModeIndex, cplx>>& terms, int gauge)
    : hbar_(spec.hbar) {
  terms_.reserve(terms.size());
  for (const auto& [idx, c] : terms) terms_.emplace_back(FloquetMode(spec, idx, gauge), c);
}

cplx Wavefunction::operator()(double x, double t) const {
  cplx s = 0.0;
  for (const auto& [u, c] : terms_) s += c * std::polar(1.0, -u.quasienergy() * t / hbar_) * u(x, t);
  return s;
}

cplx Wavefunction::operator()(double x1, double x2, double t) const {
  cplx s = 0.0;
  for (const auto& [u, c] : terms_)
    s += c * std::polar(1.0, -u.quasienergy() * t / hbar_) * u(x1, x2, t);
  return s;
}

cplx wavefunction(const ModelSpec& spec, const std::vector<std::pair<ModeIndex, cplx>>& terms,
                  double x, double t) {
  return Wavefunction(spec, terms)(x, t);
}

double berry_phase_analytic(const ModelSpec& spec) {
  require_no_resonance(spec);
  const double hb = spec.hbar;
  const double pi = std::numbers::pi;
  return std::visit(
      overloaded{
          [&](const HarmonicDriven& p) {
            const double d = p.omega * p.omega - p.omega_m * p.omega_m;
            return p.omega * p.lambda * p.lambda * pi / (p.m * hb * d * d);
          },
          [&](const CoupledDriven& p) {
            const double w2 = p.omega * p.omega;
            const double d2 = w2 - p.omega2 * p.omega2;
            const double Q = p.g * p.g - p.m1 * p.m2 * (w2 - p.omega1 * p.omega1) * d2;
            return p.m2 * pi * p.lambda * p.lambda * p.omega * (p.g * p.g + p.m1 * p.m2 * d2 * d2) /
                   (Q * Q * hb);
          },
          [](const auto&) -> double {
            throw UnsupportedVariant("berry phase: no closed form for the linear-potential models");
          },
      },
      spec.params);
}

double overall_phase(const ModelSpec& spec, ModeIndex idx) {
  return -quasienergy(spec, idx) * drive_period(spec) / spec.hbar;
}

}  // namespace floquet::analytic
