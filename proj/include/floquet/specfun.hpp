#pragma once

// Special-function kernel: Airy Ai and its zeros, Hermite polynomials and
// Hermite functions, and adaptive 1D quadrature.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include "floquet/errors.hpp"

namespace floquet::specfun {

/// Ai(x) to better than 1e-12 absolute on [-20, 10].
double airy_ai(double x);

/// Ai'(x), same branches and accuracy as airy_ai.
double airy_ai_prime(double x);

inline constexpr int kMaxAiryZero = 64;

/// n-th (negative) zero of Ai, a_1 > a_2 > ... ; 1 <= n <= 64.
double airy_zero(int n);

struct AiryZeroTable {
  std::vector<double> zeros;  // zeros[k] holds a_{k+1}
  std::size_t count() const noexcept { return zeros.size(); }
};

/// All supported zeros, computed once.
const AiryZeroTable& airy_zero_table();

/// Physicists' Hermite polynomial H_n(y) via three-term recurrence.
double hermite(int n, double y);

/// Normalized Hermite function (2^n n! sqrt(pi))^{-1/2} H_n(y) exp(-y^2/2),
/// evaluated with the normalized recurrence so large n never overflows.
double hermite_function(int n, double y);

namespace detail {
// Individual Ai branches, exposed so the switchover bands can be tested.
double airy_ai_series(double x);
double airy_ai_prime_series(double x);
double airy_ai_asymptotic_pos(double x);
double airy_ai_prime_asymptotic_pos(double x);
double airy_ai_asymptotic_neg(double x);
double airy_ai_prime_asymptotic_neg(double x);
double airy_ai_taylor(double x);
double airy_ai_prime_taylor(double x);

inline constexpr double kSeriesUpper = 5.5;
inline constexpr double kSeriesLower = -5.0;
inline constexpr double kTaylorLower = -8.0;
}  // namespace detail

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_depth = 40;
  int initial_panels = 16;
};

namespace detail {

template <typename T>
struct SimpsonState {
  bool converged = true;
  double error = 0.0;
};

template <typename F, typename T>
T adaptive_simpson(const F& f, double a, double b, T fa, T fm, T fb, T whole, double eps,
                   int depth, SimpsonState<T>& state) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const T flm = f(lm);
  const T frm = f(rm);
  const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const T delta = left + right - whole;
  const double err = std::abs(delta) / 15.0;
  if (err <= eps || depth <= 0) {
    if (depth <= 0 && err > eps) state.converged = false;
    state.error += err;
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1, state) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1, state);
}

}  // namespace detail

/// Adaptive Simpson quadrature of a real- or complex-valued integrand on [a, b].
/// Throws QuadratureError when some panel fails to converge within max_depth.
template <typename F>
auto integrate(const F& f, double a, double b, const QuadratureOptions& opt = {})
    -> std::decay_t<decltype(f(a))> {
  using T = std::decay_t<decltype(f(a))>;
  if (!(a < b)) throw RangeError("integrate: require a < b");
  if (!std::isfinite(a) || !std::isfinite(b)) throw RangeError("integrate: infinite limits");

  const int panels = opt.initial_panels > 0 ? opt.initial_panels : 1;
  const double width = (b - a) / panels;
  std::vector<double> nodes(2 * panels + 1);
  std::vector<T> values(2 * panels + 1);
  for (int i = 0; i <= 2 * panels; ++i) {
    nodes[i] = (i == 2 * panels) ? b : a + 0.5 * width * i;
    values[i] = f(nodes[i]);
  }
  T coarse{};
  for (int p = 0; p < panels; ++p) {
    coarse += width / 6.0 * (values[2 * p] + 4.0 * values[2 * p + 1] + values[2 * p + 2]);
  }
  const double eps = std::max(opt.abs_tol, opt.rel_tol * std::abs(coarse));

  detail::SimpsonState<T> state;
  T total{};
  for (int p = 0; p < panels; ++p) {
    const T whole = width / 6.0 * (values[2 * p] + 4.0 * values[2 * p + 1] + values[2 * p + 2]);
    total += detail::adaptive_simpson(f, nodes[2 * p], nodes[2 * p + 2], values[2 * p],
                                      values[2 * p + 1], values[2 * p + 2], whole,
                                      eps / panels, opt.max_depth, state);
  }
  if (!state.converged) {
    throw QuadratureError("integrate: no convergence within max_depth", std::abs(total),
                          state.error);
  }
  return total;
}

}  // namespace floquet::specfun
