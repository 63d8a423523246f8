#include "floquet/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "floquet/errors.hpp"

namespace floquet {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw ConfigError(std::string("parameter '") + name + "' must be finite and > 0");
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ConfigError(std::string("parameter '") + name + "' must be finite");
}

// g^2 - m1 m2 (omega^2 - omega1^2)(omega^2 - omega2^2)
double coupled_denominator(const CoupledDriven& p) {
  const double w2 = p.omega * p.omega;
  return p.g * p.g -
         p.m1 * p.m2 * (w2 - p.omega1 * p.omega1) * (w2 - p.omega2 * p.omega2);
}

}  // namespace

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::LinearSingleDrive: return "linear";
    case Variant::LinearDualDrive: return "dual";
    case Variant::HarmonicDriven: return "harmonic";
    case Variant::CoupledDriven: return "coupled";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (auto v : {Variant::LinearSingleDrive, Variant::LinearDualDrive, Variant::HarmonicDriven,
                 Variant::CoupledDriven}) {
    if (variant_name(v) == name) return v;
  }
  return std::nullopt;
}

namespace {

template <class F>
void for_each_field(ModelParams& params, F&& f) {
  std::visit(overloaded{
                 [&](LinearSingleDrive& p) {
                   f("m", p.m), f("g", p.g), f("lambda", p.lambda), f("omega", p.omega);
                 },
                 [&](LinearDualDrive& p) {
                   f("m", p.m), f("g", p.g), f("lambda1", p.lambda1), f("lambda2", p.lambda2);
                   f("omega1", p.omega1), f("omega2", p.omega2);
                 },
                 [&](HarmonicDriven& p) {
                   f("m", p.m), f("omega_m", p.omega_m), f("lambda", p.lambda), f("omega", p.omega);
                 },
                 [&](CoupledDriven& p) {
                   f("m1", p.m1), f("m2", p.m2), f("omega1", p.omega1), f("omega2", p.omega2);
                   f("g", p.g), f("lambda", p.lambda), f("omega", p.omega);
                 },
             },
             params);
}

}  // namespace

std::vector<std::pair<std::string, double>> parameters(const ModelSpec& spec) {
  std::vector<std::pair<std::string, double>> out;
  ModelParams copy = spec.params;
  for_each_field(copy, [&](const char* name, double& v) { out.emplace_back(name, v); });
  out.emplace_back("hbar", spec.hbar);
  return out;
}

ModelSpec default_spec(Variant v) {
  switch (v) {
    case Variant::LinearSingleDrive: return {LinearSingleDrive{}, 1.0};
    case Variant::LinearDualDrive: return {LinearDualDrive{}, 1.0};
    case Variant::HarmonicDriven: return {HarmonicDriven{}, 1.0};
    case Variant::CoupledDriven: return {CoupledDriven{}, 1.0};
  }
  throw ConfigError("unknown model variant");
}

void set_parameter(ModelSpec& spec, std::string_view name, double value) {
  if (name == "hbar") {
    spec.hbar = value;
    return;
  }
  bool found = false;
  for_each_field(spec.params, [&](const char* field, double& v) {
    if (name == field) {
      v = value;
      found = true;
    }
  });
  if (!found) {
    throw ConfigError("model '" + std::string(variant_name(spec.variant())) + "' has no parameter '" +
                      std::string(name) + "'");
  }
}

void validate(const ModelSpec& spec) {
  require_positive(spec.hbar, "hbar");
  std::visit(overloaded{
                 [](const LinearSingleDrive& p) {
                   require_positive(p.m, "m");
                   require_positive(p.g, "g");
                   require_positive(p.omega, "omega");
                   require_finite(p.lambda, "lambda");
                 },
                 [](const LinearDualDrive& p) {
                   require_positive(p.m, "m");
                   require_positive(p.g, "g");
                   require_positive(p.omega1, "omega1");
                   require_positive(p.omega2, "omega2");
                   require_finite(p.lambda1, "lambda1");
                   require_finite(p.lambda2, "lambda2");
                 },
                 [](const HarmonicDriven& p) {
                   require_positive(p.m, "m");
                   require_positive(p.omega_m, "omega_m");
                   require_positive(p.omega, "omega");
                   require_finite(p.lambda, "lambda");
                 },
                 [](const CoupledDriven& p) {
                   require_positive(p.m1, "m1");
                   require_positive(p.m2, "m2");
                   require_positive(p.omega1, "omega1");
                   require_positive(p.omega2, "omega2");
                   require_positive(p.omega, "omega");
                   require_finite(p.g, "g");
                   require_finite(p.lambda, "lambda");
                   normal_modes(p);  // stability
                 },
             },
             spec.params);
}

std::string ResonanceDiagnostic::message() const {
  std::ostringstream os;
  os.precision(15);
  os << "resonance: denominator " << denominator << " = " << value << " (scale " << scale << ")";
  return os.str();
}

std::vector<ResonanceDiagnostic> resonance_denominators(const ModelSpec& spec) {
  return std::visit(
      overloaded{
          [](const LinearSingleDrive&) { return std::vector<ResonanceDiagnostic>{}; },
          [](const LinearDualDrive& p) {
            return std::vector<ResonanceDiagnostic>{
                {"omega1 - omega2", p.omega1 - p.omega2, p.omega1 + p.omega2}};
          },
          [](const HarmonicDriven& p) {
            const double wm2 = p.omega_m * p.omega_m, w2 = p.omega * p.omega;
            return std::vector<ResonanceDiagnostic>{{"omega_m^2 - omega^2", wm2 - w2, wm2 + w2}};
          },
          [](const CoupledDriven& p) {
            const double w2 = p.omega * p.omega;
            const double scale = p.g * p.g + p.m1 * p.m2 * (w2 + p.omega1 * p.omega1) *
                                                 (w2 + p.omega2 * p.omega2);
            return std::vector<ResonanceDiagnostic>{
                {"g^2 - m1 m2 (omega^2 - omega1^2)(omega^2 - omega2^2)", coupled_denominator(p), scale}};
          },
      },
      spec.params);
}

std::optional<ResonanceDiagnostic> check_resonance(const ModelSpec& spec, double eps) {
  for (auto& d : resonance_denominators(spec)) {
    if (!(std::abs(d.value) > eps * d.scale)) return d;
  }
  return std::nullopt;
}

std::optional<Commensurability> commensurability(double omega1, double omega2) {
  const double ratio = omega1 / omega2;
  for (int q = 1; q <= kMaxCommensurateDenominator; ++q) {
    const long p = std::lround(ratio * q);
    if (p < 1 || p > kMaxCommensurateDenominator) continue;
    if (std::abs(omega1 * q - omega2 * static_cast<double>(p)) <=
        1e-12 * std::max(omega1 * q, omega2 * static_cast<double>(p))) {
      return Commensurability{static_cast<int>(p), q};  // smallest q is lowest terms
    }
  }
  return std::nullopt;
}

double drive_period(const ModelSpec& spec) {
  return std::visit(
      overloaded{
          [](const LinearDualDrive& p) {
            const auto c = commensurability(p.omega1, p.omega2);
            if (!c) {
              throw ConfigError(
                  "dual drive: omega1/omega2 is not a ratio p/q with p, q <= 64; no common period");
            }
            return 2.0 * std::numbers::pi * c->q / p.omega2;
          },
          [](const LinearSingleDrive& p) { return 2.0 * std::numbers::pi / p.omega; },
          [](const HarmonicDriven& p) { return 2.0 * std::numbers::pi / p.omega; },
          [](const CoupledDriven& p) { return 2.0 * std::numbers::pi / p.omega; },
      },
      spec.params);
}

double TransformPlan::momentum_boost(int coordinate, double t, double hbar) const {
  double s = 0.0;
  for (const auto& sh : shifts) {
    if (sh.coordinate == coordinate) s += sh.alpha * std::sin(sh.omega * t);
  }
  return hbar * s;
}

double TransformPlan::translation(int coordinate, double t, double hbar) const {
  double s = 0.0;
  for (const auto& sh : shifts) {
    if (sh.coordinate == coordinate) s += sh.beta * std::cos(sh.omega * t);
  }
  return hbar * s;
}

TransformPlan separate(const ModelSpec& spec) {
  validate(spec);
  if (auto diag = check_resonance(spec)) throw ResonanceError(diag->message());
  const double hbar = spec.hbar;
  TransformPlan plan;
  plan.period = drive_period(spec);
  std::visit(
      overloaded{
          [&](const LinearSingleDrive& p) {
            plan.shifts.push_back({0, -p.lambda / (hbar * p.omega),
                                   -p.lambda / (p.m * hbar * p.omega * p.omega), p.omega});
          },
          [&](const LinearDualDrive& p) {
            plan.shifts.push_back({0, -p.lambda1 / (hbar * p.omega1),
                                   -p.lambda1 / (p.m * hbar * p.omega1 * p.omega1), p.omega1});
            plan.shifts.push_back({0, -p.lambda2 / (hbar * p.omega2),
                                   -p.lambda2 / (p.m * hbar * p.omega2 * p.omega2), p.omega2});
          },
          [&](const HarmonicDriven& p) {
            const double d = p.omega_m * p.omega_m - p.omega * p.omega;
            plan.shifts.push_back(
                {0, p.lambda * p.omega / (hbar * d), p.lambda / (p.m * hbar * d), p.omega});
          },
          [&](const CoupledDriven& p) {
            const double q = coupled_denominator(p) * hbar;
            const double w2 = p.omega * p.omega;
            const double d2 = w2 - p.omega2 * p.omega2;
            plan.shifts.push_back({0, p.m1 * p.m2 * p.lambda * p.omega * d2 / q,
                                   p.m2 * p.lambda * d2 / q, p.omega});
            plan.shifts.push_back(
                {1, p.g * p.m2 * p.lambda * p.omega / q, p.g * p.lambda / q, p.omega});
          },
      },
      spec.params);
  return plan;
}

NormalModeData normal_modes(const CoupledDriven& p) {
  NormalModeData nm;
  nm.M = std::sqrt(p.m1 * p.m2);
  nm.eta = std::pow(p.m1 / p.m2, 0.25);
  const double w1s = p.omega1 * p.omega1, w2s = p.omega2 * p.omega2;
  const double den = nm.M * (w2s - w1s);
  if (den == 0.0) {
    nm.theta = p.g > 0 ? 0.25 * std::numbers::pi : (p.g < 0 ? -0.25 * std::numbers::pi : 0.0);
  } else {
    nm.theta = 0.5 * std::atan(2.0 * p.g / den);
  }
  const double c = std::cos(nm.theta), s = std::sin(nm.theta);
  const double s2 = std::sin(2.0 * nm.theta);
  const double om1sq = w1s * c * c + w2s * s * s - p.g * s2 / nm.M;
  const double om2sq = w2s * c * c + w1s * s * s + p.g * s2 / nm.M;
  if (!(om1sq > 0.0) || !(om2sq > 0.0)) {
    std::ostringstream os;
    os << "coupled oscillators unstable: Omega1^2 = " << om1sq << ", Omega2^2 = " << om2sq;
    throw StabilityError(os.str());
  }
  nm.Omega1 = std::sqrt(om1sq);
  nm.Omega2 = std::sqrt(om2sq);
  return nm;
}

Eigen::Matrix4d canonical_transform(const NormalModeData& nm) {
  const double c = std::cos(nm.theta), s = std::sin(nm.theta);
  const double e = nm.eta, ei = 1.0 / nm.eta;
  Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
  // x1 = eta^-1 (X1 c + X2 s), x2 = eta (X2 c - X1 s)
  t(0, 0) = ei * c;
  t(0, 1) = ei * s;
  t(1, 0) = -e * s;
  t(1, 1) = e * c;
  // p1 = eta (P1 c + P2 s), p2 = eta^-1 (P2 c - P1 s)
  t(2, 2) = e * c;
  t(2, 3) = e * s;
  t(3, 2) = -ei * s;
  t(3, 3) = ei * c;
  return t;
}

RotatedPoint to_normal_coordinates(const NormalModeData& nm, double x1, double x2) {
  const double c = std::cos(nm.theta), s = std::sin(nm.theta);
  return {nm.eta * x1 * c - x2 * s / nm.eta, x2 * c / nm.eta + nm.eta * x1 * s};
}

}  // namespace floquet
