#include "floquet/specfun.hpp"

#include <array>
#include <limits>
#include <numbers>

namespace floquet::specfun {

namespace {

constexpr double kAi0 = 0.355028053887817239260;   // Ai(0)
constexpr double kAip0 = -0.258819403792806798405;  // Ai'(0)
constexpr double kSqrtPi = 1.772453850905516027298;

// Coefficients u_k, v_k of the Airy asymptotic expansions.
struct AsymptoticCoefficients {
  static constexpr int kTerms = 40;
  std::array<double, kTerms> u{};
  std::array<double, kTerms> v{};
  AsymptoticCoefficients() {
    u[0] = 1.0;
    v[0] = 1.0;
    for (int k = 1; k < kTerms; ++k) {
      u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
             ((2.0 * k - 1.0) * 216.0 * k);
      v[k] = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u[k];
    }
  }
};

const AsymptoticCoefficients& coeffs() {
  static const AsymptoticCoefficients c;
  return c;
}

// Sum of (-1)^k c_k zeta^{-k} over k = first, first+step, ..., truncated at
// the smallest term (optimal truncation of the divergent series).
double alternating_tail(const std::array<double, AsymptoticCoefficients::kTerms>& c,
                        double zeta, int first, int step) {
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = first; k < AsymptoticCoefficients::kTerms; k += step) {
    const double term = c[k] / std::pow(zeta, k);
    if (std::abs(term) >= prev) break;
    const int sign = ((k - first) / step) % 2 == 0 ? 1 : -1;
    sum += sign * term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    prev = std::abs(term);
  }
  return sum;
}

// Taylor expansion of an Airy-equation solution about x0 with y(x0)=y0, y'(x0)=yp0,
// evaluated at x0 + d. Returns {y, y'}.
std::array<double, 2> taylor_step(double x0, double y0, double yp0, double d) {
  double a_km1 = 0.0;  // a_{k-1}
  double a_k = y0;     // a_k
  double a_kp1 = yp0;  // a_{k+1}
  double y = y0 + yp0 * d;
  double yp = yp0;
  double dk = d;  // d^{k+1} with k = 0
  int negligible = 0;  // the recurrence has period-3 zero patterns at x0 = 0
  for (int k = 0; k < 200; ++k) {
    const double a_kp2 = (x0 * a_k + a_km1) / ((k + 1.0) * (k + 2.0));
    const double term = a_kp2 * dk * d;      // a_{k+2} d^{k+2}
    const double dterm = (k + 2.0) * a_kp2 * dk;  // (k+2) a_{k+2} d^{k+1}
    y += term;
    yp += dterm;
    if (std::abs(term) < 1e-18 * std::abs(y) && std::abs(dterm) < 1e-18 * std::abs(yp)) {
      if (++negligible >= 3) break;
    } else {
      negligible = 0;
    }
    a_km1 = a_k;
    a_k = a_kp1;
    a_kp1 = a_kp2;
    dk *= d;
  }
  return {y, yp};
}

// (Ai, Ai') at x = -j * kAnchorStep, integrated outward from the origin.
struct TaylorAnchors {
  static constexpr double kAnchorStep = 0.125;
  static constexpr int kCount = 80;  // reaches x = -10
  std::array<double, kCount + 1> ai{};
  std::array<double, kCount + 1> aip{};
  TaylorAnchors() {
    ai[0] = kAi0;
    aip[0] = kAip0;
    for (int j = 1; j <= kCount; ++j) {
      const auto next = taylor_step(-(j - 1) * kAnchorStep, ai[j - 1], aip[j - 1], -kAnchorStep);
      ai[j] = next[0];
      aip[j] = next[1];
    }
  }
};

const TaylorAnchors& anchors() {
  static const TaylorAnchors a;
  return a;
}

std::array<double, 2> taylor_eval(double x) {
  const auto& a = anchors();
  int j = static_cast<int>(std::lround(-x / TaylorAnchors::kAnchorStep));
  if (j < 0) j = 0;
  if (j > TaylorAnchors::kCount) j = TaylorAnchors::kCount;
  const double x0 = -j * TaylorAnchors::kAnchorStep;
  return taylor_step(x0, a.ai[j], a.aip[j], x - x0);
}

}  // namespace

namespace detail {

double airy_ai_series(double x) {
  const double x3 = x * x * x;
  double f = 1.0, g = x, tf = 1.0, tg = x;
  for (int k = 1; k < 400; ++k) {
    tf *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
    tg *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
    f += tf;
    g += tg;
    if (std::abs(tf) <= 1e-18 * std::abs(f) && std::abs(tg) <= 1e-18 * (std::abs(g) + 1e-300)) {
      break;
    }
  }
  return kAi0 * f + kAip0 * g;
}

double airy_ai_prime_series(double x) {
  const double x3 = x * x * x;
  double fp = 0.5 * x * x, tf = fp;  // f'(x) = x^2/2 + ...
  double gp = 1.0, tg = 1.0;         // g'(x) = 1 + x^3/3 + ...
  for (int k = 1; k < 400; ++k) {
    if (k >= 2) {
      tf *= x3 / ((3.0 * k - 3.0) * (3.0 * k - 1.0));
      fp += tf;
    }
    tg *= x3 / ((3.0 * k) * (3.0 * k - 2.0));
    gp += tg;
    if (k > 2 && std::abs(tf) <= 1e-18 * (std::abs(fp) + 1e-300) &&
        std::abs(tg) <= 1e-18 * std::abs(gp)) {
      break;
    }
  }
  return kAi0 * fp + kAip0 * gp;
}

double airy_ai_asymptotic_pos(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  const double s = alternating_tail(coeffs().u, zeta, 0, 1);
  return std::exp(-zeta) / (2.0 * kSqrtPi * std::pow(x, 0.25)) * s;
}

double airy_ai_prime_asymptotic_pos(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  const double s = alternating_tail(coeffs().v, zeta, 0, 1);
  return -std::pow(x, 0.25) * std::exp(-zeta) / (2.0 * kSqrtPi) * s;
}

double airy_ai_asymptotic_neg(double x) {
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  const double even = alternating_tail(coeffs().u, zeta, 0, 2);
  const double odd = alternating_tail(coeffs().u, zeta, 1, 2);
  const double phase = zeta - 0.25 * std::numbers::pi;
  return (std::cos(phase) * even + std::sin(phase) * odd) / (kSqrtPi * std::pow(z, 0.25));
}

double airy_ai_prime_asymptotic_neg(double x) {
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  const double even = alternating_tail(coeffs().v, zeta, 0, 2);
  const double odd = alternating_tail(coeffs().v, zeta, 1, 2);
  const double phase = zeta - 0.25 * std::numbers::pi;
  return std::pow(z, 0.25) / kSqrtPi * (std::sin(phase) * even - std::cos(phase) * odd);
}

double airy_ai_taylor(double x) { return taylor_eval(x)[0]; }
double airy_ai_prime_taylor(double x) { return taylor_eval(x)[1]; }

}  // namespace detail

double airy_ai(double x) {
  if (x > detail::kSeriesUpper) return detail::airy_ai_asymptotic_pos(x);
  if (x >= detail::kSeriesLower) return detail::airy_ai_series(x);
  if (x >= detail::kTaylorLower) return detail::airy_ai_taylor(x);
  return detail::airy_ai_asymptotic_neg(x);
}

double airy_ai_prime(double x) {
  if (x > detail::kSeriesUpper) return detail::airy_ai_prime_asymptotic_pos(x);
  if (x >= detail::kSeriesLower) return detail::airy_ai_prime_series(x);
  if (x >= detail::kTaylorLower) return detail::airy_ai_prime_taylor(x);
  return detail::airy_ai_prime_asymptotic_neg(x);
}

namespace {

double bisect_airy_zero(int n) {
  const double t = 3.0 * std::numbers::pi * (4.0 * n - 1.0) / 8.0;
  const double estimate = -std::pow(t, 2.0 / 3.0);
  const double spacing = std::numbers::pi / std::sqrt(-estimate);
  double lo = estimate - 0.3 * spacing;
  double hi = estimate + 0.3 * spacing;
  double flo = airy_ai(lo);
  double fhi = airy_ai(hi);
  if (flo * fhi > 0.0) {
    throw NumericalError("airy_zero: asymptotic bracket failed for n=" + std::to_string(n));
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::abs(lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = airy_ai(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

const AiryZeroTable& airy_zero_table() {
  static const AiryZeroTable table = [] {
    AiryZeroTable t;
    t.zeros.reserve(kMaxAiryZero);
    for (int n = 1; n <= kMaxAiryZero; ++n) t.zeros.push_back(bisect_airy_zero(n));
    return t;
  }();
  return table;
}

double airy_zero(int n) {
  if (n < 1 || n > kMaxAiryZero) {
    throw RangeError("airy_zero: n=" + std::to_string(n) + " outside [1, " +
                     std::to_string(kMaxAiryZero) + "]");
  }
  return airy_zero_table().zeros[static_cast<std::size_t>(n - 1)];
}

double hermite(int n, double y) {
  if (n < 0) throw RangeError("hermite: negative degree");
  if (n == 0) return 1.0;
  double hm1 = 1.0, h = 2.0 * y;
  for (int k = 1; k < n; ++k) {
    const double hp1 = 2.0 * y * h - 2.0 * k * hm1;
    hm1 = h;
    h = hp1;
  }
  return h;
}

double hermite_function(int n, double y) {
  if (n < 0) throw RangeError("hermite_function: negative degree");
  // psi_0 = pi^{-1/4} e^{-y^2/2};
  // psi_{k+1} = sqrt(2/(k+1)) y psi_k - sqrt(k/(k+1)) psi_{k-1}
  double pm1 = 0.0;
  double p = std::exp(-0.5 * y * y) / std::sqrt(kSqrtPi);
  for (int k = 0; k < n; ++k) {
    const double pp1 = std::sqrt(2.0 / (k + 1.0)) * y * p - std::sqrt(k / (k + 1.0)) * pm1;
    pm1 = p;
    p = pp1;
  }
  return p;
}

}  // namespace floquet::specfun
