#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "floquet/analytic.hpp"
#include "floquet/errors.hpp"
#include "floquet/numerics.hpp"

using namespace floquet;
using namespace floquet::numerics;
using std::numbers::pi;

namespace {

ModelSpec harmonic(double lambda, double omega_m = 1.0) {
  return {HarmonicDriven{1.0, omega_m, lambda, 2.0}, 1.0};
}
ModelSpec coupled_default() { return {CoupledDriven{1.0, 1.0, 1.0, 1.5, 0.3, 0.4, 2.5}, 1.0}; }

GridState gaussian(const Grid& g, double x0, double sigma) {
  auto s = sample(g, std::function<cplx(double)>([&](double x) {
                    return cplx(std::exp(-(x - x0) * (x - x0) / (4 * sigma * sigma)));
                  }));
  s.normalize();
  return s;
}

double fidelity(const GridState& a, const GridState& b) {
  return std::abs(inner(a, b)) / (a.norm() * b.norm());
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_NOTHROW(Grid::line(-1.0, 1.0, 64));
  CHECK_THROWS_AS(Grid::line(-1.0, 1.0, 32), ConfigError);
  CHECK_THROWS_AS(Grid::line(-1.0, 1.0, 100), ConfigError);
  CHECK_THROWS_AS(Grid::line(1.0, -1.0, 128), ConfigError);
  const auto g = Grid::line(-8.0, 8.0, 512);
  CHECK(g.axis(0).h() == doctest::Approx(16.0 / 511));
  CHECK(g.axis(0).x(511) == doctest::Approx(8.0));
  const auto p = Grid::plane({-6, 6, 128}, {-6, 6, 64});
  CHECK(p.size() == 128 * 64);
}

TEST_CASE("hamiltonian_apply") {
  SUBCASE("constant state sees only the potential") {
    const auto g = Grid::line(-4.0, 4.0, 128);
    const GridState s{g, Vector::Constant(128, cplx(1.0)), 0.0};
    for (int order : {2, 4, 6, 8}) {
      const Vector h = hamiltonian_apply(harmonic(0.0), s, 0.0, {order, false});
      const int r = order / 2;
      for (int i = r; i < 128 - r; ++i) {
        const double x = g.axis(0).x(i);
        CHECK(std::abs(h(i) - 0.5 * x * x) < 1e-10);
      }
    }
  }
  SUBCASE("oscillator ground state is an eigenvector to O(h^4)") {
    const auto g = Grid::line(-8.0, 8.0, 512);
    const auto s = sample(g, std::function<cplx(double)>([](double x) {
                            return cplx(std::pow(pi, -0.25) * std::exp(-x * x / 2));
                          }));
    const Vector h = hamiltonian_apply(harmonic(0.0), s, 0.0);
    CHECK((h - 0.5 * s.values).cwiseAbs().maxCoeff() < 1e-6);
    const Vector hs = hamiltonian_apply(harmonic(0.0), s, 0.0, {4, true});
    CHECK((hs - 0.5 * s.values).cwiseAbs().maxCoeff() < 1e-11);
  }
  SUBCASE("coupled drive term vanishes at a cosine zero") {
    const auto g = Grid::plane({-5, 5, 64}, {-5, 5, 64});
    const ModelSpec undriven{CoupledDriven{1.0, 1.0, 1.0, 1.5, 0.3, 0.0, 2.5}, 1.0};
    const auto s = sample(analytic::FloquetMode(coupled_default(), {0, 0}), g, 0.3);
    const double t = pi / (2 * 2.5);
    const Vector a = hamiltonian_apply(coupled_default(), s, t);
    const Vector b = hamiltonian_apply(undriven, s, t);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("padded application matches the analytic second derivative") {
    const auto g = Grid::line(-3.0, 3.0, 128);
    for (int order : {4, 8}) {
      const auto ax = padded_axes(g, order / 2)[0];
      Vector p(ax.points);
      for (int i = 0; i < ax.points; ++i) p(i) = std::sin(ax.x(i));
      const Vector h = hamiltonian_apply_padded(harmonic(0.0), g, p, 0.0, order);
      double err = 0.0;
      for (int i = 0; i < 128; ++i) {
        const double x = g.axis(0).x(i);
        err = std::max(err, std::abs(h(i) - (0.5 * std::sin(x) + 0.5 * x * x * std::sin(x))));
      }
      CHECK(err < (order == 4 ? 1e-6 : 1e-10));
    }
  }
  SUBCASE("dimension mismatch") {
    const auto g = Grid::line(-4.0, 4.0, 64);
    const GridState s{g, Vector::Zero(64), 0.0};
    CHECK_THROWS_AS(hamiltonian_apply(coupled_default(), s, 0.0), DimensionError);
  }
}

TEST_CASE("Fourier operations") {
  const auto g = Grid::line(-10.0, 10.0, 512);
  const double h = g.axis(0).h();
  auto f = [](double x) { return std::exp(-x * x); };
  const auto s = sample(g, std::function<cplx(double)>([&](double x) { return cplx(f(x)); }));
  for (double c : {0.25, h, 0.0}) {
    const Vector t = fourier_translate(s.values, h, c);
    double err = 0.0;
    for (int i = 0; i < 512; ++i) err = std::max(err, std::abs(t(i) - f(g.axis(0).x(i) + c)));
    CHECK(err < (c == 0.25 ? 1e-8 : 1e-10));
  }
  const Vector d2 = second_derivative_spectral(s.values, h);
  double err = 0.0;
  for (int i = 0; i < 512; ++i) {
    const double x = g.axis(0).x(i);
    err = std::max(err, std::abs(d2(i) - (4 * x * x - 2) * f(x)));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("Crank-Nicolson propagation") {
  SUBCASE("one step preserves the norm") {
    const auto g = Grid::line(-8.0, 8.0, 256);
    auto s = gaussian(g, 1.0, 0.7);
    s.values *= std::polar(1.0, 0.3);
    for (auto scheme : {KineticScheme::Numerov, KineticScheme::SecondOrder}) {
      const auto out = propagate(harmonic(0.5), s, 0.0, 0.01, 1, {scheme});
      CHECK(std::abs(out.norm() - 1.0) < 1e-12);
    }
  }
  SUBCASE("undriven ground state acquires exp(-i omega t / 2)") {
    const auto g = Grid::line(-8.0, 8.0, 512);
    const auto spec = harmonic(0.0);
    const auto s = sample(analytic::FloquetMode(spec, {0}), g, 0.0);
    const double t1 = 2 * pi;
    const auto out = propagate(spec, s, 0.0, t1, 4096);
    GridState exact = s;
    exact.values *= std::polar(1.0, -0.5 * t1);
    const cplx ov = inner(exact, out);
    CHECK(std::abs(ov) > 1 - 1e-6);
    CHECK(std::abs(std::arg(ov)) < 1e-3);
  }
  SUBCASE("free Gaussian spreads as sigma0^2 + (t / 2 sigma0)^2") {
    const auto g = Grid::line(-40.0, 40.0, 2048);
    const ModelSpec free{HarmonicDriven{1.0, 0.0, 0.0, 1.0}, 1.0};
    const double s0 = 1.0, t = 3.0;
    const auto out = propagate(free, gaussian(g, 0.0, s0), 0.0, t, 3000);
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < 2048; ++i) {
      const double x = g.axis(0).x(i), w = std::norm(out.values(i)) * g.axis(0).h();
      m1 += w * x;
      m2 += w * x * x;
    }
    const double var = m2 - m1 * m1;
    const double expect = s0 * s0 + std::pow(t / (2 * s0), 2);
    CHECK(std::abs(var - expect) / expect < 1e-4);
  }
  SUBCASE("forward then backward returns the initial state") {
    const auto g = Grid::line(-8.0, 8.0, 256);
    const auto spec = harmonic(0.5);
    const auto s = gaussian(g, 0.5, 0.8);
    const double T = pi;
    const auto mid = propagate(spec, s, 0.0, T / 2, 1024);
    const auto back = propagate(spec, mid, T / 2, 0.0, 1024);
    CHECK(fidelity(s, back) > 1 - 1e-9);
  }
  SUBCASE("halving dt cuts the error by four") {
    const auto g = Grid::line(-8.0, 8.0, 128);
    const auto spec = harmonic(0.5);
    const auto s = gaussian(g, 0.5, 0.8);
    auto run = [&](int n) { return propagate(spec, s, 0.0, pi, n).values; };
    const Vector ref = (4.0 * run(1024) - run(512)) / 3.0;
    const double e1 = (run(64) - ref).norm(), e2 = (run(128) - ref).norm();
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
  }
  SUBCASE("non-finite input is rejected") {
    const auto g = Grid::line(-8.0, 8.0, 64);
    GridState s{g, Vector::Zero(64), 0.0};
    s.values(10) = cplx(NAN, 0.0);
    CHECK_THROWS_AS(propagate(harmonic(0.5), s, 0.0, 1.0, 4), NumericalError);
  }
  SUBCASE("coupled modes return after one period") {
    const auto g = Grid::plane({-6, 6, 64}, {-6, 6, 64});
    const auto spec = coupled_default();
    const analytic::FloquetMode u(spec, {0, 0});
    const double T = u.period();
    const auto s = sample(u, g, 0.0);
    const auto out = propagate(spec, s, 0.0, T, 1024);
    CHECK(std::abs(out.norm() - s.norm()) < 1e-10);
    const cplx ov = inner(s, out) / (s.norm() * s.norm());
    CHECK(std::abs(ov) > 1 - 1e-4);
    CHECK(std::abs(wrap_phase(std::arg(ov) + u.quasienergy() * T)) < 1e-2);
  }
}

TEST_CASE("monodromy") {
  SUBCASE("undriven oscillator eigenphases") {
    const auto spec = harmonic(0.0);
    const auto g = Grid::line(-8.0, 8.0, 256);
    const double T = drive_period(spec);
    const auto r = monodromy_eigenphases(spec, g, 1024, {KineticScheme::Numerov, 6});
    REQUIRE(r.modes.size() == 6);
    for (const auto& m : r.modes) {
      CHECK(std::abs(wrap_phase(m.eigenphase + (m.label + 0.5) * T)) < 2e-3);
      CHECK(m.participation > 0.99);
    }
    CHECK(r.unitarity_deviation < 1e-10);
  }
  SUBCASE("U(T) maps the analytic mode onto itself up to the quasienergy phase") {
    const auto spec = harmonic(0.5);
    const auto g = Grid::line(-8.0, 8.0, 128);
    const Eigen::MatrixXcd U = monodromy_matrix(spec, g, 1024);
    const analytic::FloquetMode u(spec, {0});
    Vector s(126);
    for (int i = 0; i < 126; ++i) s(i) = u(g.axis(0).x(i + 1), 0.0);
    const double w = std::sqrt(g.axis(0).h());
    const Vector diff = U * s - std::polar(1.0, -u.quasienergy() * u.period()) * s;
    CHECK(diff.norm() * w < 1e-3);
    CHECK((U.adjoint() * U - Eigen::MatrixXcd::Identity(126, 126)).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("zone folding") {
    const double E = 0.52, hw = 2.0, T = pi;
    CHECK(std::abs(wrap_phase(-E * T) - wrap_phase(-(E + hw) * T)) < 1e-12);
  }
  SUBCASE("worker count does not change the result") {
    const auto spec = harmonic(0.5);
    const auto g = Grid::line(-6.0, 6.0, 64);
    MonodromyOptions one, three;
    one.jobs = 1;
    three.jobs = 3;
    CHECK(monodromy_matrix(spec, g, 128, one) == monodromy_matrix(spec, g, 128, three));
  }
  SUBCASE("guards") {
    CHECK_THROWS_AS(monodromy_matrix(harmonic(0.5), Grid::line(-8, 8, 1024), 16), NumericalError);
    CHECK_THROWS_AS(monodromy_matrix(coupled_default(), Grid::plane({-5, 5, 64}, {-5, 5, 64}), 16),
                    UnsupportedVariant);
  }
}

TEST_CASE("wrap_phase") {
  CHECK(wrap_phase(pi) == doctest::Approx(pi));
  CHECK(wrap_phase(-pi) == doctest::Approx(pi));
  CHECK(wrap_phase(3 * pi / 2) == doctest::Approx(-pi / 2));
}
