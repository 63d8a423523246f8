#include "floquet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <fftw3.h>

#include "floquet/errors.hpp"
#include "floquet/parallel.hpp"

namespace floquet::numerics {
namespace {

using namespace std::complex_literals;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_axis(const Axis& a) {
  if (!(a.lo < a.hi) || !std::isfinite(a.lo) || !std::isfinite(a.hi))
    throw ConfigError("grid: require finite x_min < x_max");
  if (a.points < kMinPoints || (a.points & (a.points - 1)) != 0)
    throw ConfigError("grid: points must be a power of two >= 64, got " + std::to_string(a.points));
}

void check_dimension(const ModelSpec& spec, const Grid& g) {
  if (spec.dimension() != g.dim())
    throw DimensionError("grid dimension " + std::to_string(g.dim()) + " does not match model dimension " +
                         std::to_string(spec.dimension()));
}

// Plan creation in FFTW is not thread safe; execution with new arrays is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

void fft_inplace(Vector& v, int sign) {
  const int n = static_cast<int>(v.size());
  auto* p = reinterpret_cast<fftw_complex*>(v.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_mutex());
    plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE);
  }
  fftw_execute_dft(plan, p, p);
  {
    std::lock_guard lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

double wavenumber(int j, int n, double h) {
  const int s = j <= n / 2 ? j : j - n;
  return 2 * std::numbers::pi * s / (n * h);
}

// Crank-Nicolson step for one axis with Dirichlet end nodes, factored once.
class CnFactor {
 public:
  CnFactor(const std::vector<double>& V, double h, double m, double hbar, double dt,
           KineticScheme scheme)
      : n_(static_cast<int>(V.size())) {
    const double b_off = scheme == KineticScheme::Numerov ? 1.0 / 12 : 0.0;
    const double b_d = 1.0 - 2 * b_off;
    const double k_off = -hbar * hbar / (2 * m * h * h);
    const double k_d = hbar * hbar / (m * h * h);
    const double tau = dt / (2 * hbar);
    ra_.resize(n_);
    rb_.resize(n_);
    rc_.resize(n_);
    std::vector<cplx> a(n_), b(n_), c(n_);
    for (int i = 1; i < n_ - 1; ++i) {
      const cplx lo = k_off + b_off * V[i - 1], di = k_d + b_d * V[i], up = k_off + b_off * V[i + 1];
      a[i] = b_off + 1i * tau * lo;
      b[i] = b_d + 1i * tau * di;
      c[i] = b_off + 1i * tau * up;
      ra_[i] = b_off - 1i * tau * lo;
      rb_[i] = b_d - 1i * tau * di;
      rc_[i] = b_off - 1i * tau * up;
    }
    a_ = a;
    c_ = c;
    cp_.assign(n_, 0.0);
    inv_.assign(n_, 0.0);
    for (int i = 1; i < n_ - 1; ++i) {
      const cplx den = b[i] - (i > 1 ? a[i] * cp_[i - 1] : cplx(0.0));
      if (std::abs(den) < 1e-300) throw NumericalError("Crank-Nicolson: zero pivot in tridiagonal solve");
      inv_[i] = 1.0 / den;
      cp_[i] = c[i] * inv_[i];
    }
  }

  void apply(cplx* psi, std::ptrdiff_t stride, cplx left, cplx right, std::vector<cplx>& work) const {
    work.resize(n_);
    auto at = [&](int i) -> cplx& { return psi[i * stride]; };
    for (int i = 1; i < n_ - 1; ++i)
      work[i] = ra_[i] * at(i - 1) + rb_[i] * at(i) + rc_[i] * at(i + 1);
    work[1] -= a_[1] * left;
    work[n_ - 2] -= c_[n_ - 2] * right;
    // forward elimination
    work[1] *= inv_[1];
    for (int i = 2; i < n_ - 1; ++i) work[i] = (work[i] - a_[i] * work[i - 1]) * inv_[i];
    // back substitution
    at(n_ - 2) = work[n_ - 2];
    for (int i = n_ - 3; i >= 1; --i) at(i) = work[i] - cp_[i] * at(i + 1);
    at(0) = left;
    at(n_ - 1) = right;
  }

 private:
  int n_;
  std::vector<cplx> a_, c_, cp_, inv_, ra_, rb_, rc_;
};

std::vector<double> potential_line(const ModelSpec& spec, const Axis& ax, double t) {
  std::vector<double> V(ax.points);
  for (int i = 0; i < ax.points; ++i) V[i] = potential(spec, ax.x(i), t);
  return V;
}

void require_finite(const Vector& v, double t, int step) {
  if (!v.allFinite())
    throw NumericalError("propagate: non-finite amplitude at step " + std::to_string(step) +
                         ", t = " + std::to_string(t));
}

GridState propagate_1d(const ModelSpec& spec, const GridState& state, double t0, double t1,
                       int steps, const PropagateOptions& opt) {
  const Axis& ax = state.grid.axis(0);
  const double dt = (t1 - t0) / steps;
  const double m = masses(spec)[0];
  GridState out = state;
  std::vector<cplx> work;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * dt;
    const CnFactor f(potential_line(spec, ax, t + dt / 2), ax.h(), m, spec.hbar, dt, opt.scheme);
    const double tn = t0 + (k + 1) * dt;
    const cplx left = opt.left_boundary ? opt.left_boundary(tn) : cplx(0.0);
    const cplx right = opt.right_boundary ? opt.right_boundary(tn) : cplx(0.0);
    f.apply(out.values.data(), 1, left, right, work);
    if (opt.finite_check_every > 0 && (k + 1) % opt.finite_check_every == 0)
      require_finite(out.values, tn, k + 1);
  }
  require_finite(out.values, t1, steps);
  out.time = t1;
  return out;
}

GridState propagate_2d(const ModelSpec& spec, const GridState& state, double t0, double t1,
                       int steps, const PropagateOptions& opt) {
  const auto& p = std::get<CoupledDriven>(spec.params);
  const Axis& a0 = state.grid.axis(0);
  const Axis& a1 = state.grid.axis(1);
  const int n0 = a0.points, n1 = a1.points;
  const double dt = (t1 - t0) / steps;
  const double hb = spec.hbar;
  std::vector<double> V0(n0), V1(n1);
  for (int i = 0; i < n0; ++i) V0[i] = 0.5 * p.m1 * p.omega1 * p.omega1 * a0.x(i) * a0.x(i);
  for (int j = 0; j < n1; ++j) V1[j] = 0.5 * p.m2 * p.omega2 * p.omega2 * a1.x(j) * a1.x(j);
  const CnFactor f0(V0, a0.h(), p.m1, hb, dt, opt.scheme);
  const CnFactor f1(V1, a1.h(), p.m2, hb, dt, opt.scheme);

  GridState out = state;
  cplx* psi = out.values.data();
  std::vector<cplx> work;
  std::vector<double> xx(static_cast<size_t>(n0) * n1);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) xx[flat(state.grid, i, j)] = a0.x(i) * a1.x(j);

  auto half_phase = [&](double tm) {
    const double drive = p.lambda * std::cos(p.omega * tm);
    for (int i = 0; i < n0; ++i) {
      const double dx = drive * a0.x(i);
      for (int j = 0; j < n1; ++j) {
        const auto q = flat(state.grid, i, j);
        psi[q] *= std::polar(1.0, -(p.g * xx[q] + dx) * dt / (2 * hb));
      }
    }
  };

  for (int k = 0; k < steps; ++k) {
    const double tm = t0 + (k + 0.5) * dt;
    half_phase(tm);
    for (int i = 0; i < n0; ++i) f1.apply(psi + flat(state.grid, i, 0), 1, 0.0, 0.0, work);
    for (int j = 0; j < n1; ++j) f0.apply(psi + j, n1, 0.0, 0.0, work);
    half_phase(tm);
    if (opt.finite_check_every > 0 && (k + 1) % opt.finite_check_every == 0)
      require_finite(out.values, t0 + (k + 1) * dt, k + 1);
  }
  require_finite(out.values, t1, steps);
  out.time = t1;
  return out;
}

}  // namespace

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  for (const auto& a : axes_) check_axis(a);
}

Grid Grid::line(double lo, double hi, int points) { return Grid({Axis{lo, hi, points}}); }
Grid Grid::plane(Axis a0, Axis a1) { return Grid({a0, a1}); }

Eigen::Index Grid::size() const noexcept {
  Eigen::Index n = 1;
  for (const auto& a : axes_) n *= a.points;
  return n;
}

double Grid::cell_volume() const noexcept {
  double v = 1.0;
  for (const auto& a : axes_) v *= a.h();
  return v;
}

double GridState::norm() const { return std::sqrt(values.squaredNorm() * grid.cell_volume()); }

void GridState::normalize() {
  const double n = norm();
  if (n == 0.0) throw NumericalError("normalize: zero state");
  values /= n;
}

double GridState::boundary_ratio() const {
  const double peak = values.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0.0;
  double edge = 0.0;
  if (grid.dim() == 1) {
    edge = std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
  } else {
    const int n0 = grid.axis(0).points, n1 = grid.axis(1).points;
    for (int i = 0; i < n0; ++i)
      edge = std::max({edge, std::abs(values(flat(grid, i, 0))), std::abs(values(flat(grid, i, n1 - 1)))});
    for (int j = 0; j < n1; ++j)
      edge = std::max({edge, std::abs(values(flat(grid, 0, j))), std::abs(values(flat(grid, n0 - 1, j)))});
  }
  return edge / peak;
}

bool GridState::finite() const { return values.allFinite(); }

cplx inner(const GridState& a, const GridState& b) {
  if (a.values.size() != b.values.size()) throw DimensionError("inner: grid size mismatch");
  return a.values.dot(b.values) * a.grid.cell_volume();
}

GridState sample(const Grid& grid, const std::function<cplx(double)>& f, double t) {
  if (grid.dim() != 1) throw DimensionError("sample: 1D function on a 2D grid");
  const Axis& ax = grid.axis(0);
  Vector v(ax.points);
  for (int i = 0; i < ax.points; ++i) v(i) = f(ax.x(i));
  return {grid, std::move(v), t};
}

GridState sample(const Grid& grid, const std::function<cplx(double, double)>& f, double t) {
  if (grid.dim() != 2) throw DimensionError("sample: 2D function on a 1D grid");
  const Axis& a0 = grid.axis(0);
  const Axis& a1 = grid.axis(1);
  Vector v(grid.size());
  for (int i = 0; i < a0.points; ++i)
    for (int j = 0; j < a1.points; ++j) v(flat(grid, i, j)) = f(a0.x(i), a1.x(j));
  return {grid, std::move(v), t};
}

GridState sample(const analytic::FloquetMode& u, const Grid& grid, double t) {
  check_dimension(u.spec(), grid);
  if (grid.dim() == 1) return sample(grid, std::function<cplx(double)>([&](double x) { return u(x, t); }), t);
  return sample(grid, std::function<cplx(double, double)>([&](double x1, double x2) { return u(x1, x2, t); }), t);
}

double potential(const ModelSpec& spec, double x, double t) {
  return std::visit(
      overloaded{
          [&](const LinearSingleDrive& p) { return p.m * p.g * x + p.lambda * x * std::cos(p.omega * t); },
          [&](const LinearDualDrive& p) {
            return p.m * p.g * x +
                   x * (p.lambda1 * std::cos(p.omega1 * t) + p.lambda2 * std::cos(p.omega2 * t));
          },
          [&](const HarmonicDriven& p) {
            return 0.5 * p.m * p.omega_m * p.omega_m * x * x + p.lambda * x * std::cos(p.omega * t);
          },
          [&](const CoupledDriven&) -> double {
            throw DimensionError("potential(x, t): coupled model is 2D");
          },
      },
      spec.params);
}

double potential(const ModelSpec& spec, double x1, double x2, double t) {
  const auto* p = std::get_if<CoupledDriven>(&spec.params);
  if (!p) throw DimensionError("potential(x1, x2, t): 1D model");
  return 0.5 * p->m1 * p->omega1 * p->omega1 * x1 * x1 + 0.5 * p->m2 * p->omega2 * p->omega2 * x2 * x2 +
         p->g * x1 * x2 + p->lambda * x1 * std::cos(p->omega * t);
}

std::vector<double> masses(const ModelSpec& spec) {
  return std::visit(overloaded{
                        [](const CoupledDriven& p) { return std::vector<double>{p.m1, p.m2}; },
                        [](const auto& p) { return std::vector<double>{p.m}; },
                    },
                    spec.params);
}

const std::vector<double>& fd_weights(int order) {
  static const std::vector<double> w2{-2.0, 1.0};
  static const std::vector<double> w4{-5.0 / 2, 4.0 / 3, -1.0 / 12};
  static const std::vector<double> w6{-49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
  static const std::vector<double> w8{-205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
  switch (order) {
    case 2: return w2;
    case 4: return w4;
    case 6: return w6;
    case 8: return w8;
    default: throw ConfigError("finite-difference order must be 2, 4, 6 or 8");
  }
}

Vector second_derivative(const Vector& f, double h, int order) {
  const auto& w = fd_weights(order);
  const int r = static_cast<int>(w.size()) - 1;
  const Eigen::Index n = f.size();
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cplx s = w[0] * f(i);
    for (int k = 1; k <= r; ++k) {
      if (i - k >= 0) s += w[k] * f(i - k);
      if (i + k < n) s += w[k] * f(i + k);
    }
    out(i) = s / (h * h);
  }
  return out;
}

Vector second_derivative_interior(const Vector& padded, double h, int order) {
  const auto& w = fd_weights(order);
  const int r = static_cast<int>(w.size()) - 1;
  const Eigen::Index n = padded.size() - 2 * r;
  if (n <= 0) throw RangeError("second_derivative_interior: array shorter than the stencil");
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index c = i + r;
    cplx s = w[0] * padded(c);
    for (int k = 1; k <= r; ++k) s += w[k] * (padded(c - k) + padded(c + k));
    out(i) = s / (h * h);
  }
  return out;
}

Vector second_derivative_spectral(const Vector& f, double h) {
  const int n = static_cast<int>(f.size());
  Vector v = f;
  fft_inplace(v, FFTW_FORWARD);
  for (int j = 0; j < n; ++j) {
    const double k = wavenumber(j, n, h);
    v(j) *= -k * k / n;
  }
  fft_inplace(v, FFTW_BACKWARD);
  return v;
}

Vector fourier_translate(const Vector& f, double h, double shift) {
  const int n = static_cast<int>(f.size());
  Vector v = f;
  fft_inplace(v, FFTW_FORWARD);
  for (int j = 0; j < n; ++j) {
    const double k = wavenumber(j, n, h);
    // Nyquist term: real part of the multiplier keeps the result symmetric
    const cplx mult = (n % 2 == 0 && j == n / 2) ? cplx(std::cos(k * shift)) : std::polar(1.0, k * shift);
    v(j) *= mult / static_cast<double>(n);
  }
  fft_inplace(v, FFTW_BACKWARD);
  return v;
}

Vector hamiltonian_apply(const ModelSpec& spec, const GridState& state, double t,
                         const HamiltonianOptions& opt) {
  check_dimension(spec, state.grid);
  const auto ms = masses(spec);
  const double hb = spec.hbar;
  auto d2 = [&](const Vector& f, double h) {
    return opt.spectral ? second_derivative_spectral(f, h) : second_derivative(f, h, opt.fd_order);
  };
  const Grid& g = state.grid;
  if (g.dim() == 1) {
    const Axis& ax = g.axis(0);
    Vector out = -(hb * hb / (2 * ms[0])) * d2(state.values, ax.h());
    for (int i = 0; i < ax.points; ++i) out(i) += potential(spec, ax.x(i), t) * state.values(i);
    return out;
  }
  const Axis& a0 = g.axis(0);
  const Axis& a1 = g.axis(1);
  const int n0 = a0.points, n1 = a1.points;
  Vector out = Vector::Zero(g.size());
  Vector line;
  for (int i = 0; i < n0; ++i) {
    line = state.values.segment(flat(g, i, 0), n1);
    out.segment(flat(g, i, 0), n1) += -(hb * hb / (2 * ms[1])) * d2(line, a1.h());
  }
  line.resize(n0);
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n0; ++i) line(i) = state.values(flat(g, i, j));
    const Vector d = d2(line, a0.h());
    for (int i = 0; i < n0; ++i) out(flat(g, i, j)) += -(hb * hb / (2 * ms[0])) * d(i);
  }
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j)
      out(flat(g, i, j)) += potential(spec, a0.x(i), a1.x(j), t) * state.values(flat(g, i, j));
  return out;
}

std::vector<Axis> padded_axes(const Grid& grid, int ghost) {
  std::vector<Axis> out;
  for (int k = 0; k < grid.dim(); ++k) {
    const Axis& a = grid.axis(k);
    const double h = a.h();
    out.push_back(Axis{a.lo - ghost * h, a.hi + ghost * h, a.points + 2 * ghost});
  }
  return out;
}

Vector hamiltonian_apply_padded(const ModelSpec& spec, const Grid& grid, const Vector& padded,
                                double t, int fd_order) {
  check_dimension(spec, grid);
  const auto& w = fd_weights(fd_order);
  const int r = static_cast<int>(w.size()) - 1;
  const auto ms = masses(spec);
  const double hb = spec.hbar;
  if (grid.dim() == 1) {
    const Axis& ax = grid.axis(0);
    if (padded.size() != ax.points + 2 * r) throw DimensionError("padded array has the wrong size");
    Vector out = -(hb * hb / (2 * ms[0])) * second_derivative_interior(padded, ax.h(), fd_order);
    for (int i = 0; i < ax.points; ++i) out(i) += potential(spec, ax.x(i), t) * padded(i + r);
    return out;
  }
  const Axis& a0 = grid.axis(0);
  const Axis& a1 = grid.axis(1);
  const int n0 = a0.points, n1 = a1.points;
  const int p1 = n1 + 2 * r;
  if (padded.size() != static_cast<Eigen::Index>(n0 + 2 * r) * p1)
    throw DimensionError("padded array has the wrong size");
  auto P = [&](int i, int j) { return padded(static_cast<Eigen::Index>(i) * p1 + j); };
  const double c0 = -hb * hb / (2 * ms[0] * a0.h() * a0.h());
  const double c1 = -hb * hb / (2 * ms[1] * a1.h() * a1.h());
  Vector out(grid.size());
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      const int ci = i + r, cj = j + r;
      cplx s0 = w[0] * P(ci, cj), s1 = w[0] * P(ci, cj);
      for (int k = 1; k <= r; ++k) {
        s0 += w[k] * (P(ci - k, cj) + P(ci + k, cj));
        s1 += w[k] * (P(ci, cj - k) + P(ci, cj + k));
      }
      out(flat(grid, i, j)) = c0 * s0 + c1 * s1 + potential(spec, a0.x(i), a1.x(j), t) * P(ci, cj);
    }
  }
  return out;
}

GridState propagate(const ModelSpec& spec, const GridState& state, double t0, double t1, int steps,
                    const PropagateOptions& opt) {
  check_dimension(spec, state.grid);
  if (steps < 1) throw ConfigError("propagate: steps must be >= 1");
  if (!state.finite()) throw NumericalError("propagate: non-finite initial state");
  if (state.grid.dim() == 1) return propagate_1d(spec, state, t0, t1, steps, opt);
  if (opt.left_boundary || opt.right_boundary)
    throw ConfigError("propagate: boundary data is only supported in 1D");
  return propagate_2d(spec, state, t0, t1, steps, opt);
}

Eigen::MatrixXcd monodromy_matrix(const ModelSpec& spec, const Grid& grid, int steps,
                                  const MonodromyOptions& opt) {
  check_dimension(spec, grid);
  if (grid.dim() != 1) throw UnsupportedVariant("monodromy: 1D models only");
  if (steps < 1) throw ConfigError("monodromy: steps must be >= 1");
  const Axis& ax = grid.axis(0);
  if (ax.points > opt.max_points)
    throw NumericalError("monodromy: " + std::to_string(ax.points) + " points exceeds the limit of " +
                         std::to_string(opt.max_points));
  const int n = ax.points, m = n - 2;
  const double T = drive_period(spec);
  const double dt = T / steps;
  const double mass = masses(spec)[0];
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(n, m);
  for (int c = 0; c < m; ++c) full(c + 1, c) = 1.0;

  parallel_chunks(static_cast<size_t>(m), opt.jobs, [&](size_t b, size_t e) {
    std::vector<cplx> work;
    for (int k = 0; k < steps; ++k) {
      const CnFactor f(potential_line(spec, ax, (k + 0.5) * dt), ax.h(), mass, spec.hbar, dt, opt.scheme);
      for (size_t c = b; c < e; ++c) f.apply(full.col(static_cast<Eigen::Index>(c)).data(), 1, 0.0, 0.0, work);
    }
  });
  if (!full.allFinite()) throw NumericalError("monodromy: non-finite propagator entries");
  return full.middleRows(1, m);
}

double wrap_phase(double a) {
  const double pi = std::numbers::pi;
  double r = std::remainder(a, 2 * pi);
  if (r <= -pi) r += 2 * pi;
  return r;
}

MonodromyResult monodromy_eigenphases(const ModelSpec& spec, const Grid& grid, int steps,
                                      const MonodromyOptions& opt) {
  const Eigen::MatrixXcd U = monodromy_matrix(spec, grid, steps, opt);
  const Eigen::Index m = U.rows();
  MonodromyResult res;
  res.unitarity_deviation =
      (U.adjoint() * U - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(U);
  if (es.info() != Eigen::Success) throw NumericalError("monodromy: eigen-decomposition failed");
  const auto& lam = es.eigenvalues();
  Eigen::MatrixXcd V = es.eigenvectors();
  for (Eigen::Index c = 0; c < m; ++c) V.col(c).normalize();
  for (Eigen::Index c = 0; c < m; ++c) res.eigenphases.push_back(std::arg(lam(c)));
  std::sort(res.eigenphases.begin(), res.eigenphases.end());

  const Axis& ax = grid.axis(0);
  for (int k = 0; k < opt.label_modes; ++k) {
    const analytic::FloquetMode u(spec, analytic::nth_mode(spec, k), 0);
    Vector s(m);
    for (Eigen::Index i = 0; i < m; ++i) s(i) = u(ax.x(static_cast<int>(i) + 1), 0.0);
    s.normalize();
    const Eigen::VectorXd ov = (V.adjoint() * s).cwiseAbs2();
    Eigen::Index best = 0;
    const double p = ov.maxCoeff(&best);
    res.modes.push_back({k, std::arg(lam(best)), p});
  }
  return res;
}

}  // namespace floquet::numerics
