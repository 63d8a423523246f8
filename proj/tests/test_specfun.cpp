#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "floquet/specfun.hpp"

using namespace floquet;
using namespace floquet::specfun;

namespace {

// Reference values (Ai, Ai') from 30-digit arithmetic.
struct AiryRef {
  double x, ai, aip;
};
constexpr AiryRef kAiryRef[] = {
    {-20, -0.17640612707798468959, 0.8928628567364712384},
    {-15, 0.27821749087082892953, 0.27237420430864202083},
    {-10, 0.040241238486443190689, 0.9962650441327900559},
    {-8.5, -0.33029023763020887902, -0.032313348284639135873},
    {-7, 0.18428083525050563728, -0.77100816841012654773},
    {-6, -0.32914517362982310523, 0.34593548728134289493},
    {-5.2, 0.25258033810474462103, 0.63990516690128407665},
    {-4, -0.070265532949289515099, -0.7906285753685813803},
    {-2, 0.22740742820168557599, 0.61825902074169104141},
    {-1, 0.5355608832923521188, -0.010160567116645209395},
    {0, 0.35502805388781723926, -0.25881940379280679841},
    {1, 0.13529241631288141552, -0.15914744129679321279},
    {2.5, 0.015725923380470489995, -0.026250881035903230365},
    {4, 0.00095156385120480187362, -0.0019586409502041789001},
    {5, 0.00010834442813607441735, -0.000247413890868462476},
    {5.7, 0.000020805817713260677136, -0.000050547811684537189884},
    {6, 9.9476943602528895702e-6, -0.000024765200397034954754},
    {8, 4.6922076160992316256e-8, -1.3414392979067865743e-7},
    {10, 1.1047532552898685934e-10, -3.5206336767389236366e-10},
};

// Independent route: Ai through Bessel functions of order 1/3.
double airy_via_bessel(double x) {
  constexpr double nu = 1.0 / 3.0;
  if (x > 0) {
    const double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
    return std::sqrt(x / 3.0) / std::numbers::pi * std::cyl_bessel_k(nu, zeta);
  }
  if (x == 0) return 0.355028053887817239260;
  const double z = -x;
  const double zeta = 2.0 / 3.0 * std::pow(z, 1.5);
  const double jp = std::cyl_bessel_j(nu, zeta);
  const double jm = std::cos(nu * std::numbers::pi) * jp - std::sin(nu * std::numbers::pi) *
                                                              std::cyl_neumann(nu, zeta);
  return std::sqrt(z) / 3.0 * (jp + jm);
}

// Plain bisection on the reference Bessel route.
double bisection_zero(double lo, double hi) {
  double flo = airy_via_bessel(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = airy_via_bessel(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("Ai(0) equals 3^(-2/3)/Gamma(2/3)") {
  const double exact = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
  CHECK(airy_ai(0.0) == doctest::Approx(exact).epsilon(1e-15));
  CHECK(std::abs(airy_ai(0.0) - 0.355028053887817) < 1e-14);
}

TEST_CASE("Ai and Ai' match high-precision references on [-20, 10]") {
  for (const auto& r : kAiryRef) {
    CAPTURE(r.x);
    CHECK(std::abs(airy_ai(r.x) - r.ai) < 1e-12);
    CHECK(std::abs(airy_ai_prime(r.x) - r.aip) < 1e-11);
  }
}

TEST_CASE("Ai agrees with the Bessel-function representation on a lattice") {
  for (double x = -20.0; x <= 10.0; x += 0.173) {
    CAPTURE(x);
    CHECK(std::abs(airy_ai(x) - airy_via_bessel(x)) < 1e-11);
  }
}

TEST_CASE("Ai decays monotonically for x > 0") {
  double prev = airy_ai(0.0);
  for (double x = 0.25; x <= 10.0; x += 0.25) {
    const double v = airy_ai(x);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(airy_ai(10.0) < 2e-10);
}

TEST_CASE("branch switchovers agree in their overlap bands") {
  for (double x = 5.5; x <= 6.0; x += 0.025) {
    CAPTURE(x);
    CHECK(std::abs(detail::airy_ai_series(x) - detail::airy_ai_asymptotic_pos(x)) < 1e-12);
    // Ai' inherits the series cancellation of Bi'(x) ~ 1e4 here.
    CHECK(std::abs(detail::airy_ai_prime_series(x) - detail::airy_ai_prime_asymptotic_pos(x)) <
          1e-11);
  }
  for (double x = -5.5; x <= -4.5; x += 0.05) {
    CAPTURE(x);
    CHECK(std::abs(detail::airy_ai_series(x) - detail::airy_ai_taylor(x)) < 1e-12);
    CHECK(std::abs(detail::airy_ai_prime_series(x) - detail::airy_ai_prime_taylor(x)) < 1e-12);
  }
  for (double x = -9.0; x <= -8.0; x += 0.05) {
    CAPTURE(x);
    CHECK(std::abs(detail::airy_ai_taylor(x) - detail::airy_ai_asymptotic_neg(x)) < 1e-12);
    CHECK(std::abs(detail::airy_ai_prime_taylor(x) - detail::airy_ai_prime_asymptotic_neg(x)) <
          1e-12);
  }
}

TEST_CASE("Ai satisfies Ai'' = x Ai under 4th-order finite differences") {
  for (double x = -12.0; x <= 8.0; x += 0.37) {
    // Small steps where Ai oscillates fast, larger ones where the series
    // roundoff (~1e-13) would dominate the second difference.
    const double h = x < 0 ? 5e-3 : 2e-2;
    const double d2 = (-airy_ai(x + 2 * h) + 16 * airy_ai(x + h) - 30 * airy_ai(x) +
                       16 * airy_ai(x - h) - airy_ai(x - 2 * h)) /
                      (12 * h * h);
    CAPTURE(x);
    CHECK(std::abs(d2 - x * airy_ai(x)) < 1e-8);
  }
}

TEST_CASE("airy_zero matches the bisection oracle") {
  CHECK(airy_zero(1) == doctest::Approx(-2.338107410).epsilon(1e-9));
  CHECK(airy_zero(2) == doctest::Approx(-4.087949444).epsilon(1e-9));
  CHECK(std::abs(airy_zero(1) - bisection_zero(-2.5, -2.2)) < 1e-11);
  CHECK(std::abs(airy_zero(2) - bisection_zero(-4.2, -3.9)) < 1e-11);
  CHECK(std::abs(airy_zero(1) - -2.3381074104597670385) < 1e-12);
  CHECK(std::abs(airy_zero(3) - -5.5205598280955510591) < 1e-12);
  CHECK(std::abs(airy_zero(10) - -12.8287767528657572) < 1e-11);
  CHECK(std::abs(airy_zero(64) - -44.855398068145832426) < 1e-10);
}

TEST_CASE("zero table is strictly decreasing, negative and interleaves sign changes") {
  const auto& table = airy_zero_table();
  REQUIRE(table.count() == static_cast<std::size_t>(kMaxAiryZero));
  for (std::size_t k = 0; k < table.count(); ++k) {
    const double a = table.zeros[k];
    CAPTURE(k);
    CHECK(a < 0.0);
    CHECK(std::abs(airy_ai(a)) < 1e-12);
    if (k + 1 < table.count()) CHECK(table.zeros[k + 1] < a);
    CHECK(airy_ai(a - 1e-6) * airy_ai(a + 1e-6) < 0.0);
  }
}

TEST_CASE("airy_zero rejects out-of-range n") {
  CHECK_THROWS_AS(airy_zero(0), RangeError);
  CHECK_THROWS_AS(airy_zero(65), RangeError);
}

TEST_CASE("Hermite polynomials") {
  CHECK(hermite(0, -3.7) == 1.0);
  CHECK(hermite(1, 3.5) == 7.0);
  CHECK(hermite(3, 2.0) == doctest::Approx(8 * 8 - 12 * 2));  // explicit 8y^3 - 12y
  CHECK(hermite(4, 1.5) == doctest::Approx(16 * std::pow(1.5, 4) - 48 * 1.5 * 1.5 + 12));
  CHECK_THROWS_AS(hermite(-1, 0.0), RangeError);
}

TEST_CASE("H_n'(y) = 2n H_{n-1}(y) under finite differences") {
  const double h = 1e-3;
  for (int n = 1; n <= 10; ++n) {
    double scale = 0.0;  // max |H_n'| on the lattice, for a relative bound
    for (double y = -2.0; y <= 2.0; y += 0.01) scale = std::max(scale, std::abs(2.0 * n * hermite(n - 1, y)));
    for (double y = -2.0; y <= 2.0; y += 0.31) {
      const double d = (-hermite(n, y + 2 * h) + 8 * hermite(n, y + h) - 8 * hermite(n, y - h) +
                        hermite(n, y - 2 * h)) /
                       (12 * h);
      const double expected = 2.0 * n * hermite(n - 1, y);
      CAPTURE(n);
      CAPTURE(y);
      CHECK(std::abs(d - expected) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("Hermite functions are orthonormal and match the polynomial route") {
  for (int n = 0; n <= 12; ++n) {
    const double norm_poly = 1.0 / std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0) *
                                             std::sqrt(std::numbers::pi));
    for (double y = -3.0; y <= 3.0; y += 0.7) {
      CHECK(hermite_function(n, y) ==
            doctest::Approx(norm_poly * hermite(n, y) * std::exp(-0.5 * y * y)).epsilon(1e-12));
    }
  }
  for (int m = 0; m <= 6; ++m) {
    for (int n = 0; n <= 6; ++n) {
      const double ip = integrate(
          [&](double y) { return hermite_function(m, y) * hermite_function(n, y); }, -12.0, 12.0);
      CHECK(std::abs(ip - (m == n ? 1.0 : 0.0)) < 1e-9);
    }
  }
  CHECK(std::isfinite(hermite_function(64, 9.0)));
}

TEST_CASE("integrate: elementary integrals") {
  CHECK(std::abs(integrate([](double t) { return std::sin(t); }, 0.0, std::numbers::pi) - 2.0) <
        1e-10);
  CHECK(std::abs(integrate([](double) { return 1.0; }, 0.0, 1.0) - 1.0) < 1e-14);
  const auto c = integrate([](double t) { return std::exp(std::complex<double>(0, t)); }, 0.0,
                           std::numbers::pi / 2);
  CHECK(std::abs(c - std::complex<double>(1.0, 1.0)) < 1e-10);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0), RangeError);
}

TEST_CASE("integrate: Airy norm identity int_{a1}^inf Ai^2 = Ai'(a1)^2") {
  const double a1 = airy_zero(1);
  const double val = integrate([](double u) { return airy_ai(u) * airy_ai(u); }, a1, 12.0);
  const double aip = airy_ai_prime(a1);
  CHECK(std::abs(aip - 0.70121082272069136249) < 1e-12);
  CHECK(val == doctest::Approx(aip * aip).epsilon(1e-10));
  CHECK(val == doctest::Approx(0.491698).epsilon(1e-6));
}

TEST_CASE("integrate: non-convergence raises QuadratureError with an estimate") {
  QuadratureOptions opt;
  opt.max_depth = 2;
  opt.initial_panels = 1;
  try {
    integrate([](double t) { return std::sin(200.0 * t); }, 0.0, 1.0, opt);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.estimate()));
    CHECK(e.error_estimate() > 0.0);
  }
}
