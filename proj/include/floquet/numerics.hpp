#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "floquet/analytic.hpp"
#include "floquet/model.hpp"

namespace floquet::numerics {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;

struct Axis {
  double lo = -8.0;
  double hi = 8.0;
  int points = 512;

  double h() const noexcept { return (hi - lo) / (points - 1); }
  double x(int i) const noexcept { return lo + i * h(); }
};

inline constexpr int kMinPoints = 64;

/// Uniform tensor grid, endpoints included. Axis sizes are powers of two >= 64.
class Grid {
 public:
  static Grid line(double lo, double hi, int points);
  static Grid plane(Axis a0, Axis a1);

  int dim() const noexcept { return static_cast<int>(axes_.size()); }
  const Axis& axis(int k) const { return axes_.at(k); }
  Eigen::Index size() const noexcept;
  double cell_volume() const noexcept;

 private:
  explicit Grid(std::vector<Axis> axes);
  std::vector<Axis> axes_;
};

/// Flat index for 2D grids: x1 varies slowest.
inline Eigen::Index flat(const Grid& g, int i, int j) {
  return static_cast<Eigen::Index>(i) * g.axis(1).points + j;
}

struct GridState {
  Grid grid;
  Vector values;
  double time = 0.0;

  double norm() const;
  void normalize();
  /// Largest boundary amplitude over the largest amplitude.
  double boundary_ratio() const;
  bool finite() const;
};

/// <a|b> with the grid cell volume as quadrature weight.
cplx inner(const GridState& a, const GridState& b);

GridState sample(const Grid& grid, const std::function<cplx(double)>& f, double t = 0.0);
GridState sample(const Grid& grid, const std::function<cplx(double, double)>& f, double t = 0.0);
GridState sample(const analytic::FloquetMode& u, const Grid& grid, double t);

double potential(const ModelSpec& spec, double x, double t);
double potential(const ModelSpec& spec, double x1, double x2, double t);
/// Particle masses per coordinate.
std::vector<double> masses(const ModelSpec& spec);

/// Central second-derivative weights of the given even order (2..8), centre first.
const std::vector<double>& fd_weights(int order);

/// d^2/dx^2 with zero values assumed outside the array.
Vector second_derivative(const Vector& f, double h, int order);
/// d^2/dx^2 on a padded array; returns the points that have a full stencil.
Vector second_derivative_interior(const Vector& padded, double h, int order);
/// Spectral d^2/dx^2 on the periodic extension with period points * h.
Vector second_derivative_spectral(const Vector& f, double h);
/// f(x + shift) through a Fourier multiplier on the periodic extension.
Vector fourier_translate(const Vector& f, double h, double shift);

struct HamiltonianOptions {
  int fd_order = 4;
  bool spectral = false;
};

/// H(t) psi on the grid (Dirichlet zero outside).
Vector hamiltonian_apply(const ModelSpec& spec, const GridState& state, double t,
                         const HamiltonianOptions& opt = {});

/// H(t) psi for values sampled on `grid` widened by fd_order/2 ghost points per side.
Vector hamiltonian_apply_padded(const ModelSpec& spec, const Grid& grid, const Vector& padded,
                                double t, int fd_order);
/// Grid widened by `ghost` points per side (not subject to the power-of-two rule).
std::vector<Axis> padded_axes(const Grid& grid, int ghost);

enum class KineticScheme { Numerov, SecondOrder };

struct PropagateOptions {
  KineticScheme scheme = KineticScheme::Numerov;
  // Dirichlet data at the two end nodes of a 1D grid; empty means zero.
  std::function<cplx(double)> left_boundary;
  std::function<cplx(double)> right_boundary;
  int finite_check_every = 64;
};

/// Crank-Nicolson from t0 to t1 in `steps` equal steps, potential sampled at midpoints.
/// 2D grids use a Strang split: coupling and drive as half-step phases around
/// one-axis Crank-Nicolson sweeps.
GridState propagate(const ModelSpec& spec, const GridState& state, double t0, double t1, int steps,
                    const PropagateOptions& opt = {});

struct MonodromyOptions {
  KineticScheme scheme = KineticScheme::Numerov;
  int label_modes = 8;
  int max_points = 512;
  int jobs = 0;
};

struct MonodromyMode {
  int label = 0;  // k-th analytic mode counted from the ground state
  double eigenphase = 0.0;
  double participation = 0.0;
};

struct MonodromyResult {
  std::vector<MonodromyMode> modes;
  std::vector<double> eigenphases;  // all of them, ascending
  double unitarity_deviation = 0.0;
};

/// One-period propagator on the interior nodes (homogeneous Dirichlet ends).
Eigen::MatrixXcd monodromy_matrix(const ModelSpec& spec, const Grid& grid, int steps_per_period,
                                  const MonodromyOptions& opt = {});
MonodromyResult monodromy_eigenphases(const ModelSpec& spec, const Grid& grid,
                                      int steps_per_period, const MonodromyOptions& opt = {});

/// Wraps to (-pi, pi].
double wrap_phase(double a);

}  // namespace floquet::numerics
