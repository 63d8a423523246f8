#include "floquet/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "floquet/errors.hpp"
#include "floquet/format.hpp"
#include "floquet/specfun.hpp"

namespace floquet::verify {
namespace {

using numerics::GridState;
using numerics::Vector;
using cplx = std::complex<double>;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

VerificationReport make_report(std::string name, const ModelSpec& spec) {
  VerificationReport r;
  r.check_name = std::move(name);
  r.model = spec;
  return r;
}

std::string index_label(const ModelSpec& spec, ModeIndex idx) {
  if (spec.dimension() == 2) return std::to_string(idx.n1) + "_" + std::to_string(idx.n2);
  return std::to_string(idx.n1);
}

// Samples u on `grid` widened by `ghost` points per side, flattened like the grid.
Vector sample_padded(const analytic::FloquetMode& u, const Grid& grid, int ghost, double t) {
  const auto ax = numerics::padded_axes(grid, ghost);
  if (grid.dim() == 1) {
    Vector v(ax[0].points);
    for (int i = 0; i < ax[0].points; ++i) v(i) = u(ax[0].x(i), t);
    return v;
  }
  Vector v(static_cast<Eigen::Index>(ax[0].points) * ax[1].points);
  for (int i = 0; i < ax[0].points; ++i)
    for (int j = 0; j < ax[1].points; ++j)
      v(static_cast<Eigen::Index>(i) * ax[1].points + j) = u(ax[0].x(i), ax[1].x(j), t);
  return v;
}

// Boundary ratio of a sampled mode; for Airy windows only the far end is checked.
double edge_ratio(const ModelSpec& spec, const GridState& s) {
  if (!spec.is_linear_potential()) return s.boundary_ratio();
  const double peak = s.values.cwiseAbs().maxCoeff();
  return peak == 0.0 ? 0.0 : std::abs(s.values(s.values.size() - 1)) / peak;
}

void require_contained(const ModelSpec& spec, const GridState& s) {
  const double r = edge_ratio(spec, s);
  if (r > 1e-6) {
    throw ConfigError("domain too small: boundary amplitude ratio " + format_number(r) +
                      " exceeds 1e-6");
  }
}

double simpson(const std::vector<double>& f, double h) {
  const size_t n = f.size() - 1;  // even number of intervals
  double s = f.front() + f.back();
  for (size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
  return s * h / 3;
}

ModelSpec with(const ModelSpec& spec, std::string_view name, double value) {
  ModelSpec out = spec;
  set_parameter(out, name, value);
  return out;
}

}  // namespace

std::vector<std::pair<std::string, double*>> tolerance_fields(Tolerances& t) {
  return {{"residual_1d", &t.residual_1d},
          {"residual_2d", &t.residual_2d},
          {"infidelity", &t.infidelity},
          {"phase", &t.phase},
          {"monodromy_phase", &t.monodromy_phase},
          {"unitarity", &t.unitarity},
          {"berry_rel", &t.berry_rel},
          {"berry_rel_coupled", &t.berry_rel_coupled},
          {"berry_n", &t.berry_n},
          {"berry_zero", &t.berry_zero},
          {"reduction", &t.reduction},
          {"factorization", &t.factorization},
          {"shift", &t.shift}};
}

void VerificationReport::gate(const std::string& name, double value, double tol) {
  metrics[name] = value;
  tolerances[name] = tol;
}

void VerificationReport::finalize() {
  if (error || !gated) {
    passed = false;
    return;
  }
  passed = true;
  for (const auto& [name, value] : metrics) {
    auto it = tolerances.find(name);
    if (it == tolerances.end() || !(value <= it->second)) passed = false;
  }
}

std::string VerificationReport::verdict() const {
  if (!gated && !error) return "no verdict";
  return passed ? "pass" : "fail";
}

std::vector<ModeIndex> lowest_modes(const ModelSpec& spec, int k) {
  std::vector<ModeIndex> out;
  if (spec.dimension() == 1) {
    for (int i = 0; i < k; ++i) out.push_back(analytic::nth_mode(spec, i));
    return out;
  }
  std::vector<std::pair<double, ModeIndex>> cand;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b) cand.push_back({analytic::undriven_energy(spec, {a, b}), {a, b}});
  std::stable_sort(cand.begin(), cand.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  for (int i = 0; i < k; ++i) out.push_back(cand[i].second);
  return out;
}

Grid default_grid(const ModelSpec& spec) {
  return std::visit(
      [&](const auto& p) -> Grid {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, HarmonicDriven>) {
          const double L = 8.0 * std::sqrt(spec.hbar / (p.m * p.omega_m));
          return Grid::line(-L, L, 512);
        } else if constexpr (std::is_same_v<P, CoupledDriven>) {
          const auto nm = normal_modes(p);
          const double L = 7.0 * std::sqrt(spec.hbar / (nm.M * std::min(nm.Omega1, nm.Omega2)));
          return Grid::plane({-L, L, 128}, {-L, L, 128});
        } else {
          const double ell = std::cbrt(spec.hbar * spec.hbar / (p.m * p.m * p.g));
          return Grid::line(0.0, 12.0 * ell, 512);
        }
      },
      spec.params);
}

Grid default_monodromy_grid(const ModelSpec& spec) {
  const Grid g = default_grid(spec);
  if (g.dim() != 1) throw UnsupportedVariant("monodromy: 1D models only");
  return Grid::line(g.axis(0).lo, g.axis(0).hi, 256);
}

VerificationReport floquet_residual(const ModelSpec& spec, ModeIndex idx, const Grid& grid,
                                    int t_samples, const ResidualOptions& opt,
                                    const Tolerances& tol) {
  Timer timer;
  auto r = make_report("floquet_residual_" + index_label(spec, idx), spec);
  if (t_samples < 1) throw ConfigError("residual: t_samples must be >= 1");
  const analytic::FloquetMode u(spec, idx, opt.gauge);
  const double T = u.period();
  const double dt = T / opt.dt_divisions;
  const double hb = spec.hbar;
  const int ghost = opt.fd_order / 2;
  double worst = 0.0;
  for (int k = 0; k < t_samples; ++k) {
    const double t = T * k / t_samples;
    const Vector padded = sample_padded(u, grid, ghost, t);
    GridState s = numerics::sample(u, grid, t);
    require_contained(spec, s);
    const Vector Hu = numerics::hamiltonian_apply_padded(spec, grid, padded, t, opt.fd_order);
    const Vector up2 = numerics::sample(u, grid, t + 2 * dt).values;
    const Vector up1 = numerics::sample(u, grid, t + dt).values;
    const Vector um1 = numerics::sample(u, grid, t - dt).values;
    const Vector um2 = numerics::sample(u, grid, t - 2 * dt).values;
    const Vector dudt = (-up2 + 8.0 * up1 - 8.0 * um1 + um2) / (12.0 * dt);
    const Vector res = Hu - cplx(0.0, hb) * dudt - u.quasienergy() * s.values;
    worst = std::max(worst, res.norm() / s.values.norm());
  }
  r.gate("residual", worst,
         opt.tolerance.value_or(spec.dimension() == 2 ? tol.residual_2d : tol.residual_1d));
  r.data["quasienergy"] = u.quasienergy();
  r.data["fd_order"] = opt.fd_order;
  r.data["gauge"] = opt.gauge;
  r.data["t_samples"] = t_samples;
  r.runtime = timer.seconds();
  r.finalize();
  return r;
}

VerificationReport period_fidelity(const ModelSpec& spec, ModeIndex idx, const Grid& grid, int steps,
                                   const PeriodOptions& opt, const Tolerances& tol) {
  Timer timer;
  const bool wall = spec.is_linear_potential() && opt.boundary == LinearBoundary::Wall;
  auto r = make_report(std::string(wall ? "period_fidelity_wall_" : "period_fidelity_") +
                           index_label(spec, idx),
                       spec);
  const analytic::FloquetMode u(spec, idx, 0);
  const double T = u.period();
  const double E = u.quasienergy(), hb = spec.hbar;
  GridState s0 = numerics::sample(u, grid, 0.0);
  if (!wall) require_contained(spec, s0);

  numerics::PropagateOptions po;
  po.scheme = opt.scheme;
  if (spec.is_linear_potential()) {
    if (wall) {
      s0.values(0) = 0.0;
    } else {
      const double lo = grid.axis(0).lo, hi = grid.axis(0).hi;
      po.left_boundary = [&u, lo, E, hb](double t) { return std::polar(1.0, -E * t / hb) * u(lo, t); };
      po.right_boundary = [&u, hi, E, hb](double t) { return std::polar(1.0, -E * t / hb) * u(hi, t); };
    }
  }
  const GridState sT = numerics::propagate(spec, s0, 0.0, T, steps, po);
  const GridState ref = numerics::sample(u, grid, T);
  const cplx ov = numerics::inner(ref, sT) / (ref.norm() * sT.norm());
  const double infidelity = 1.0 - std::abs(ov);
  const double phase_error = std::abs(numerics::wrap_phase(std::arg(ov) + E * T / hb));
  if (wall) {
    r.gated = false;
    r.data["infidelity"] = infidelity;
    r.data["phase_error"] = phase_error;
    r.data["wall_amplitude_ratio"] = std::abs(u(grid.axis(0).lo, 0.0)) / s0.values.cwiseAbs().maxCoeff();
  } else {
    r.gate("infidelity", infidelity, tol.infidelity);
    r.gate("phase_error", phase_error, tol.phase);
  }
  r.data["steps"] = steps;
  r.data["norm_initial"] = s0.norm();
  r.data["norm_final"] = sT.norm();
  r.runtime = timer.seconds();
  r.finalize();
  return r;
}

VerificationReport monodromy_check(const ModelSpec& spec, const Grid& grid, int steps, int n_modes,
                                   const numerics::MonodromyOptions& opt, const Tolerances& tol) {
  Timer timer;
  auto r = make_report("monodromy", spec);
  auto mo = opt;
  mo.label_modes = std::max(mo.label_modes, n_modes);
  const auto res = numerics::monodromy_eigenphases(spec, grid, steps, mo);
  const double T = drive_period(spec);
  for (int k = 0; k < n_modes; ++k) {
    const auto& m = res.modes[k];
    const double E = analytic::quasienergy(spec, analytic::nth_mode(spec, k));
    const double err = std::abs(numerics::wrap_phase(m.eigenphase + E * T / spec.hbar));
    r.gate("phase_error_" + std::to_string(k), err, tol.monodromy_phase);
    r.data["eigenphase_" + std::to_string(k)] = m.eigenphase;
    r.data["participation_" + std::to_string(k)] = m.participation;
  }
  r.gate("unitarity_deviation", res.unitarity_deviation, tol.unitarity);
  r.data["steps"] = steps;
  r.data["points"] = grid.axis(0).points;
  r.runtime = timer.seconds();
  r.finalize();
  return r;
}

analytic::PhaseDecomposition berry_phases(const ModelSpec& spec, ModeIndex idx, const Grid& grid,
                                          int t_steps, int fd_order) {
  if (t_steps < 256 || t_steps % 2 != 0)
    throw ConfigError("berry phase: t_steps must be even and >= 256");
  const analytic::FloquetMode u(spec, idx, 0);
  const double T = u.period();
  const int ghost = fd_order / 2;
  std::vector<double> energy(t_steps + 1);
  for (int k = 0; k <= t_steps; ++k) {
    const double t = T * k / t_steps;
    const Vector padded = sample_padded(u, grid, ghost, t);
    const GridState s = numerics::sample(u, grid, t);
    require_contained(spec, s);
    const Vector Hu = numerics::hamiltonian_apply_padded(spec, grid, padded, t, fd_order);
    energy[k] = (s.values.dot(Hu) / s.values.squaredNorm()).real();
  }
  const double delta = -simpson(energy, T / t_steps) / spec.hbar;
  const double chi = analytic::overall_phase(spec, idx);
  return analytic::PhaseDecomposition::from(chi, delta);
}

VerificationReport berry_phase_numeric(const ModelSpec& spec, ModeIndex idx, const Grid& grid,
                                       int t_steps, const BerryOptions& opt, const Tolerances& tol) {
  Timer timer;
  auto r = make_report("berry_phase_" + index_label(spec, idx), spec);
  const double exact = analytic::berry_phase_analytic(spec);
  const auto ph = berry_phases(spec, idx, grid, t_steps, opt.fd_order);
  r.data["gamma_numeric"] = ph.gamma;
  r.data["gamma_analytic"] = exact;
  r.data["chi"] = ph.chi;
  r.data["delta"] = ph.delta;
  if (exact == 0.0) {
    r.gate("berry_abs_error", std::abs(ph.gamma), tol.berry_zero);
  } else {
    const double rel = std::abs(ph.gamma - exact) / std::abs(exact);
    r.gate("berry_rel_error", rel,
           spec.variant() == Variant::CoupledDriven ? tol.berry_rel_coupled : tol.berry_rel);
  }
  if (opt.strict) {
    const analytic::FloquetMode u(spec, idx, 0);
    const GridState s0 = numerics::sample(u, grid, 0.0);
    numerics::PropagateOptions po;
    po.scheme = opt.scheme;
    const GridState sT = numerics::propagate(spec, s0, 0.0, u.period(), opt.strict_steps, po);
    const double chi_num = std::arg(numerics::inner(s0, sT));
    r.data["chi_numeric"] = chi_num;
    r.gate("chi_strict_error", std::abs(numerics::wrap_phase(chi_num - ph.chi)), tol.phase);
  }
  r.runtime = timer.seconds();
  r.finalize();
  return r;
}

VerificationReport berry_n_independence(const ModelSpec& spec, ModeIndex a, ModeIndex b,
                                        const Grid& grid, int t_steps, int fd_order,
                                        const Tolerances& tol) {
  Timer timer;
  auto r = make_report("berry_n_independence", spec);
  const auto pa = berry_phases(spec, a, grid, t_steps, fd_order);
  const auto pb = berry_phases(spec, b, grid, t_steps, fd_order);
  r.gate("gamma_difference", std::abs(pa.gamma - pb.gamma), tol.berry_n);
  r.data["gamma_" + index_label(spec, a)] = pa.gamma;
  r.data["gamma_" + index_label(spec, b)] = pb.gamma;
  r.runtime = timer.seconds();
  r.finalize();
  return r;
}

std::vector<VerificationReport> limit_suite(const ModelSpec& spec, const Tolerances& tol) {
  std::vector<VerificationReport> out;
  const double hb = spec.hbar;
  const std::vector<double> times{0.0, 0.13, 0.71, 1.9, 4.4};

  auto lambda_zero = [&](const ModelSpec& z, auto undriven) {
    Timer timer;
    auto r = make_report("limit_lambda_zero", z);
    double de = 0.0, dphi = 0.0;
    for (int k = 0; k < 6; ++k) {
      const auto idx = analytic::nth_mode(z, k);
      de = std::max(de, std::abs(analytic::quasienergy(z, idx) - undriven(idx.n1)));
    }
    for (double t : times) dphi = std::max(dphi, std::abs(analytic::time_phase(z, t) - 1.0));
    r.gate("quasienergy_difference", de, tol.reduction);
    r.gate("time_phase_difference", dphi, tol.reduction);
    if (z.variant() == Variant::HarmonicDriven)
      r.gate("berry_phase", std::abs(analytic::berry_phase_analytic(z)), tol.reduction);
    r.runtime = timer.seconds();
    r.finalize();
    return r;
  };

  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, HarmonicDriven>) {
          out.push_back(lambda_zero(with(spec, "lambda", 0.0),
                                    [&](int n) { return hb * p.omega_m * (n + 0.5); }));
        } else if constexpr (std::is_same_v<P, LinearSingleDrive>) {
          out.push_back(lambda_zero(with(spec, "lambda", 0.0), [&](int n) {
            return -std::cbrt(p.m * p.g * p.g * hb * hb / 2) * specfun::airy_zero(n);
          }));
        } else if constexpr (std::is_same_v<P, LinearDualDrive>) {
          Timer timer;
          const ModelSpec d = with(spec, "lambda2", 0.0);
          const ModelSpec s{LinearSingleDrive{p.m, p.g, p.lambda1, p.omega1}, hb};
          auto r = make_report("limit_dual_lambda2_zero", d);
          double de = 0.0, du = 0.0;
          std::mt19937_64 rng(20240611);
          const double ell = std::cbrt(hb * hb / (p.m * p.m * p.g));
          std::uniform_real_distribution<double> ux(-1.0 * ell, 8.0 * ell), ut(0.0, 4 * drive_period(s));
          for (int n = 1; n <= 3; ++n) {
            de = std::max(de, std::abs(analytic::quasienergy(d, {n}) - analytic::quasienergy(s, {n})));
            const analytic::FloquetMode ud(d, {n}), us(s, {n});
            for (int i = 0; i < 100; ++i) {
              const double x = ux(rng), t = ut(rng);
              du = std::max(du, std::abs(ud(x, t) - us(x, t)));
            }
          }
          r.gate("quasienergy_difference", de, tol.reduction);
          r.gate("mode_difference", du, tol.reduction);
          r.runtime = timer.seconds();
          r.finalize();
          out.push_back(r);
        } else if constexpr (std::is_same_v<P, CoupledDriven>) {
          const ModelSpec c = with(spec, "g", 0.0);
          const ModelSpec h{HarmonicDriven{p.m1, p.omega1, p.lambda, p.omega}, hb};
          {
            Timer timer;
            auto r = make_report("limit_coupled_g_zero_quasienergy", c);
            double de = 0.0, dphi = 0.0;
            for (int a = 0; a <= 3; ++a)
              for (int b = 0; b <= 3; ++b) {
                const double sum = analytic::quasienergy(h, {a}) + hb * p.omega2 * (b + 0.5);
                de = std::max(de, std::abs(analytic::quasienergy(c, {a, b}) - sum));
              }
            for (double t : times)
              dphi = std::max(dphi, std::abs(analytic::time_phase(c, t) - analytic::time_phase(h, t)));
            r.gate("quasienergy_difference", de, tol.reduction);
            r.gate("time_phase_difference", dphi, tol.reduction);
            r.runtime = timer.seconds();
            r.finalize();
            out.push_back(r);
          }
          {
            Timer timer;
            auto r = make_report("limit_coupled_g_zero_berry", c);
            const double gc = analytic::berry_phase_analytic(c), gh = analytic::berry_phase_analytic(h);
            r.gate("berry_difference", std::abs(gc - gh), tol.reduction);
            r.data["gamma"] = gc;
            r.runtime = timer.seconds();
            r.finalize();
            out.push_back(r);
          }
          {
            Timer timer;
            auto r = make_report("coupled_factorization", spec);
            const auto nm = normal_modes(p);
            const double cs = std::cos(nm.theta), sn = std::sin(nm.theta);
            const ModelSpec h1{HarmonicDriven{nm.M, nm.Omega1, p.lambda * cs / nm.eta, p.omega}, hb};
            const ModelSpec h2{HarmonicDriven{nm.M, nm.Omega2, p.lambda * sn / nm.eta, p.omega}, hb};
            const Grid g = [&] {
              const Grid d = default_grid(spec);
              return Grid::plane({d.axis(0).lo, d.axis(0).hi, 64}, {d.axis(1).lo, d.axis(1).hi, 64});
            }();
            double de = 0.0, du = 0.0, direct = 0.0;
            std::mt19937_64 rng(7);
            const double L = g.axis(0).hi / 2;
            std::uniform_real_distribution<double> ux(-L, L), ut(0.0, drive_period(spec));
            for (const ModeIndex idx : {ModeIndex{0, 0}, ModeIndex{1, 0}, ModeIndex{0, 1}}) {
              const double sum = analytic::quasienergy(h1, {idx.n1}) + analytic::quasienergy(h2, {idx.n2});
              de = std::max(de, std::abs(analytic::quasienergy(spec, idx) - sum));
              const analytic::FloquetMode u(spec, idx), f1(h1, {idx.n1}), f2(h2, {idx.n2});
              for (int i = 0; i < 100; ++i) {
                const double x1 = ux(rng), x2 = ux(rng), t = ut(rng);
                const auto q = to_normal_coordinates(nm, x1, x2);
                du = std::max(du, std::abs(u(x1, x2, t) - f1(q.X1, t) * f2(q.X2, t)));
              }
              // Rayleigh quotient of the Floquet operator on the 2D grid
              const double t = 0.3 * drive_period(spec), dt = drive_period(spec) / 4096;
              const GridState s = numerics::sample(u, g, t);
              const Vector Hu = numerics::hamiltonian_apply(spec, s, t, {8, true});
              const Vector dudt = (-numerics::sample(u, g, t + 2 * dt).values +
                                   8.0 * numerics::sample(u, g, t + dt).values -
                                   8.0 * numerics::sample(u, g, t - dt).values +
                                   numerics::sample(u, g, t - 2 * dt).values) /
                                  (12.0 * dt);
              const cplx rq = s.values.dot(Hu - cplx(0.0, hb) * dudt) / s.values.squaredNorm();
              direct = std::max(direct, std::abs(rq.real() - sum));
            }
            r.gate("quasienergy_difference", de, tol.factorization);
            r.gate("mode_difference", du, tol.factorization);
            r.gate("direct_quasienergy_difference", direct, tol.factorization);
            r.data["theta"] = nm.theta;
            r.data["Omega1"] = nm.Omega1;
            r.data["Omega2"] = nm.Omega2;
            r.runtime = timer.seconds();
            r.finalize();
            out.push_back(r);
          }
        }
      },
      spec.params);
  return out;
}

VerificationReport momentum_shift_crosscheck(const analytic::FloquetMode& mode, double t,
                                             const Grid& grid, const Tolerances& tol) {
  Timer timer;
  const ModelSpec& spec = mode.spec();
  if (grid.dim() != 1) throw UnsupportedVariant("momentum shift cross-check: 1D modes only");
  auto r = make_report("momentum_shift", spec);
  const double c = mode.plan().translation(0, t, spec.hbar);
  const auto& ax = grid.axis(0);
  // Airy modes are not localized on the left, so they get a Gaussian stand-in.
  const double mid = 0.5 * (ax.lo + ax.hi), width = (ax.hi - ax.lo) / 16;
  auto f = [&](double x) -> double {
    if (spec.is_linear_potential()) return std::exp(-(x - mid) * (x - mid) / (2 * width * width));
    return mode.stationary(x);
  };
  Vector v(ax.points), exact(ax.points);
  for (int i = 0; i < ax.points; ++i) {
    v(i) = f(ax.x(i));
    exact(i) = f(ax.x(i) + c);
  }
  const Vector shifted = numerics::fourier_translate(v, ax.h(), c);
  r.gate("max_deviation", (shifted - exact).cwiseAbs().maxCoeff(), tol.shift);
  r.data["shift"] = c;
  r.data["t"] = t;
  r.runtime = timer.seconds();
  r.finalize();
  return r;
}

std::string_view suite_name(Suite s) {
  switch (s) {
    case Suite::Residual: return "residual";
    case Suite::Period: return "period";
    case Suite::Monodromy: return "monodromy";
    case Suite::Berry: return "berry";
    case Suite::Limits: return "limits";
    case Suite::Shift: return "shift";
  }
  return "unknown";
}

std::optional<Suite> parse_suite(std::string_view name) {
  for (auto s : all_suites())
    if (suite_name(s) == name) return s;
  return std::nullopt;
}

std::vector<Suite> all_suites() {
  return {Suite::Residual, Suite::Period, Suite::Monodromy, Suite::Berry, Suite::Limits, Suite::Shift};
}

std::vector<VerificationReport> run_suite(const ModelSpec& spec, Suite suite, const Settings& s) {
  std::vector<VerificationReport> out;
  auto guarded = [&](std::string name, auto&& fn) {
    Timer timer;
    try {
      fn();
    } catch (const std::exception& e) {
      auto r = make_report(std::move(name), spec);
      r.error = e.what();
      r.runtime = timer.seconds();
      r.finalize();
      out.push_back(r);
    }
  };
  const bool is2d = spec.dimension() == 2;
  const bool has_berry = spec.variant() == Variant::HarmonicDriven || spec.variant() == Variant::CoupledDriven;
  switch (suite) {
    case Suite::Residual:
      guarded("floquet_residual", [&] {
        const Grid g = s.grid.value_or(default_grid(spec));
        for (const auto& idx : lowest_modes(spec, s.modes)) {
          ResidualOptions o;
          o.fd_order = s.fd_order;
          guarded("floquet_residual_" + index_label(spec, idx),
                  [&] { out.push_back(floquet_residual(spec, idx, g, s.t_samples, o, s.tol)); });
        }
      });
      break;
    case Suite::Period:
      guarded("period_fidelity", [&] {
        const Grid g = s.grid.value_or(default_grid(spec));
        const auto idx = lowest_modes(spec, 1).front();
        out.push_back(period_fidelity(spec, idx, g, s.steps, {s.scheme, LinearBoundary::Window}, s.tol));
        if (spec.is_linear_potential())
          guarded("period_fidelity_wall", [&] {
            out.push_back(period_fidelity(spec, idx, g, s.steps, {s.scheme, LinearBoundary::Wall}, s.tol));
          });
      });
      break;
    case Suite::Monodromy:
      if (is2d) break;
      guarded("monodromy", [&] {
        const Grid g = s.monodromy_grid.value_or(default_monodromy_grid(spec));
        numerics::MonodromyOptions mo;
        mo.scheme = s.scheme;
        mo.jobs = s.jobs;
        out.push_back(monodromy_check(spec, g, s.monodromy_steps, s.monodromy_modes, mo, s.tol));
      });
      break;
    case Suite::Berry:
      if (!has_berry) break;
      guarded("berry_phase", [&] {
        const Grid g = s.grid.value_or(default_grid(spec));
        const auto idx = lowest_modes(spec, 1).front();
        BerryOptions bo;
        bo.fd_order = s.fd_order;
        bo.strict = s.berry_strict;
        bo.strict_steps = s.steps;
        bo.scheme = s.scheme;
        out.push_back(berry_phase_numeric(spec, idx, g, s.berry_t_steps, bo, s.tol));
        guarded("berry_n_independence", [&] {
          out.push_back(berry_n_independence(spec, idx, {3, 0}, g, s.berry_t_steps, s.fd_order, s.tol));
        });
      });
      break;
    case Suite::Limits:
      guarded("limits", [&] {
        for (auto& r : limit_suite(spec, s.tol)) out.push_back(std::move(r));
      });
      break;
    case Suite::Shift:
      if (is2d) break;
      guarded("momentum_shift", [&] {
        const Grid g = s.grid.value_or(default_grid(spec));
        const analytic::FloquetMode u(spec, lowest_modes(spec, 1).front());
        const double T = u.period();
        for (double t : {0.0, 0.25 * T, 0.37 * T}) out.push_back(momentum_shift_crosscheck(u, t, g, s.tol));
      });
      break;
  }
  return out;
}

std::string model_json(const ModelSpec& spec) {
  std::ostringstream os;
  os << "{\"variant\": " << nlohmann::json(std::string(variant_name(spec.variant()))).dump();
  for (const auto& [name, value] : parameters(spec))
    os << ", " << nlohmann::json(name).dump() << ": " << format_number(value);
  os << "}";
  return os.str();
}

namespace {

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

void write_map(std::ostream& os, const std::map<std::string, double>& m, const std::string& pad) {
  if (m.empty()) {
    os << "{}";
    return;
  }
  os << "{\n";
  size_t i = 0;
  for (const auto& [k, v] : m) {
    os << pad << "  " << nlohmann::json(k).dump() << ": " << json_number(v);
    os << (++i < m.size() ? ",\n" : "\n");
  }
  os << pad << "}";
}

}  // namespace

void write_json(std::ostream& os, const VerificationReport& r, bool with_runtime, int indent) {
  const std::string pad(indent, ' ');
  const std::string in = pad + "  ";
  os << "{\n";
  os << in << "\"check_name\": " << nlohmann::json(r.check_name).dump() << ",\n";
  os << in << "\"model\": " << model_json(r.model) << ",\n";
  os << in << "\"metrics\": ";
  write_map(os, r.metrics, in);
  os << ",\n" << in << "\"tolerances\": ";
  write_map(os, r.tolerances, in);
  os << ",\n" << in << "\"data\": ";
  write_map(os, r.data, in);
  os << ",\n" << in << "\"passed\": " << (r.passed ? "true" : "false") << ",\n";
  os << in << "\"verdict\": \"" << r.verdict() << "\",\n";
  os << in << "\"error\": " << (r.error ? nlohmann::json(*r.error).dump() : "null") << ",\n";
  os << in << "\"runtime\": " << (with_runtime ? json_number(r.runtime) : "null") << "\n";
  os << pad << "}";
}

}  // namespace floquet::verify
