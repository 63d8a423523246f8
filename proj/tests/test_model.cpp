#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "floquet/errors.hpp"
#include "floquet/model.hpp"

using namespace floquet;

namespace {

ModelSpec harmonic_default() { return {HarmonicDriven{1.0, 1.0, 0.5, 2.0}, 1.0}; }
ModelSpec linear_default() { return {LinearSingleDrive{1.0, 1.0, 0.4, 3.0}, 1.0}; }
ModelSpec dual_default() { return {LinearDualDrive{1.0, 1.0, 0.3, 0.3, 2.0, 3.0}, 1.0}; }
ModelSpec coupled_default() { return {CoupledDriven{1.0, 1.0, 1.0, 1.5, 0.3, 0.4, 2.5}, 1.0}; }

// Eigenvalues of the mass-weighted stiffness matrix, ascending.
std::pair<double, double> stiffness_eigenvalues(const CoupledDriven& p) {
  Eigen::Matrix2d k;
  const double M = std::sqrt(p.m1 * p.m2);
  k << p.omega1 * p.omega1, p.g / M, p.g / M, p.omega2 * p.omega2;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(k);
  return {es.eigenvalues()(0), es.eigenvalues()(1)};
}

std::pair<double, double> sorted(double a, double b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

TEST_CASE("resonance detection") {
  CHECK(check_resonance({HarmonicDriven{1.0, 1.0, 0.5, 1.0}, 1.0}).has_value());
  CHECK_FALSE(check_resonance(harmonic_default()).has_value());
  for (double w : {0.1, 1.0, 3.0, 17.0}) {
    CHECK_FALSE(check_resonance({LinearSingleDrive{1.0, 1.0, 0.4, w}, 1.0}).has_value());
  }
  // g^2 = (9 - 1)(9 - 4) = 40 zeroes the coupled denominator.
  const ModelSpec res{CoupledDriven{1.0, 1.0, 1.0, 2.0, std::sqrt(40.0), 0.4, 3.0}, 1.0};
  const auto diag = check_resonance(res);
  REQUIRE(diag.has_value());
  CHECK(diag->denominator.find("g^2") != std::string::npos);
  CHECK(std::abs(diag->value) < 1e-12);
  CHECK(check_resonance({LinearDualDrive{1.0, 1.0, 0.3, 0.3, 2.0, 2.0}, 1.0}).has_value());
  CHECK_THROWS_AS(separate({HarmonicDriven{1.0, 1.0, 0.5, 1.0}, 1.0}), ResonanceError);
}

TEST_CASE("near-resonance uses a relative threshold") {
  const double w = 1.0 + 1e-11;
  CHECK(check_resonance({HarmonicDriven{1.0, 1.0, 0.5, w}, 1.0}).has_value());
  CHECK_FALSE(check_resonance({HarmonicDriven{1.0, 1.0, 0.5, 1.0 + 1e-6}, 1.0}).has_value());
}

TEST_CASE("separation coefficients") {
  SUBCASE("linear single drive") {
    const auto plan = separate(linear_default());
    REQUIRE(plan.shifts.size() == 1);
    CHECK(plan.shifts[0].alpha == doctest::Approx(-0.4 / 3.0).epsilon(1e-15));
    CHECK(plan.shifts[0].beta == doctest::Approx(-0.4 / 9.0).epsilon(1e-15));
    CHECK(plan.period == doctest::Approx(2 * std::numbers::pi / 3.0));
  }
  SUBCASE("harmonic") {
    const auto plan = separate(harmonic_default());
    CHECK(plan.shifts[0].alpha == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(plan.shifts[0].beta == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
  }
  SUBCASE("coupled with g = 0 reduces to oscillator 1") {
    const ModelSpec c{CoupledDriven{1.3, 0.7, 1.1, 1.7, 0.0, 0.45, 2.3}, 1.2};
    const ModelSpec h{HarmonicDriven{1.3, 1.1, 0.45, 2.3}, 1.2};
    const auto pc = separate(c), ph = separate(h);
    CHECK(pc.shifts[0].alpha == doctest::Approx(ph.shifts[0].alpha).epsilon(1e-14));
    CHECK(pc.shifts[0].beta == doctest::Approx(ph.shifts[0].beta).epsilon(1e-14));
    CHECK(pc.shifts[1].beta == 0.0);
    CHECK(pc.shifts[1].alpha == 0.0);
  }
  SUBCASE("dual drive: independent pairs and common period") {
    const auto plan = separate(dual_default());
    REQUIRE(plan.shifts.size() == 2);
    CHECK(plan.shifts[0].alpha == doctest::Approx(-0.3 / 2.0));
    CHECK(plan.shifts[1].beta == doctest::Approx(-0.3 / 9.0));
    CHECK(plan.period == doctest::Approx(2 * std::numbers::pi));
  }
}

TEST_CASE("profiles start at A(0) = 0, B(0) = 1 and have period T") {
  for (const auto& spec : {linear_default(), dual_default(), harmonic_default(), coupled_default()}) {
    const auto plan = separate(spec);
    for (const auto& s : plan.shifts) {
      CHECK(std::sin(s.omega * 0.0) == 0.0);
      CHECK(std::cos(s.omega * 0.0) == 1.0);
      CHECK(std::abs(std::sin(s.omega * plan.period)) < 1e-12);
      CHECK(std::abs(std::cos(s.omega * plan.period) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("dual drive commensurability") {
  auto c = commensurability(2.0, 3.0);
  REQUIRE(c);
  CHECK(c->p == 2);
  CHECK(c->q == 3);
  CHECK_FALSE(commensurability(std::sqrt(2.0), 1.0));
  CHECK_THROWS_AS(separate({LinearDualDrive{1.0, 1.0, 0.3, 0.3, std::sqrt(2.0), 1.0}, 1.0}),
                  ConfigError);
  CHECK_THROWS_AS(separate({LinearDualDrive{1.0, 1.0, 0.3, 0.3, 2.0, 2.0}, 1.0}), ResonanceError);
}

// Coefficient matching: every x- and p-linear term of the transformed Floquet
// Hamiltonian cancels at arbitrary times.
TEST_CASE("separation conditions hold at random times") {
  std::mt19937_64 rng(7);
  const double hb = 1.0;
  SUBCASE("linear") {
    const auto spec = linear_default();
    const auto& p = std::get<LinearSingleDrive>(spec.params);
    const auto plan = separate(spec);
    std::uniform_real_distribution<double> ut(0.0, plan.period);
    const auto& s = plan.shifts[0];
    for (int i = 0; i < 100; ++i) {
      const double t = ut(rng);
      const double A = std::sin(s.omega * t), Ad = s.omega * std::cos(s.omega * t);
      const double Bd = -s.omega * std::sin(s.omega * t);
      CHECK(std::abs(p.lambda * std::cos(p.omega * t) + s.alpha * hb * Ad) < 1e-12);
      CHECK(std::abs(s.alpha * hb * A / p.m + s.beta * hb * Bd) < 1e-12);
    }
  }
  SUBCASE("harmonic") {
    const auto spec = harmonic_default();
    const auto& p = std::get<HarmonicDriven>(spec.params);
    const auto plan = separate(spec);
    std::uniform_real_distribution<double> ut(0.0, plan.period);
    const auto& s = plan.shifts[0];
    for (int i = 0; i < 100; ++i) {
      const double t = ut(rng);
      const double A = std::sin(s.omega * t), Ad = s.omega * std::cos(s.omega * t);
      const double B = std::cos(s.omega * t), Bd = -s.omega * std::sin(s.omega * t);
      const double x_coeff = p.lambda * std::cos(p.omega * t) -
                             p.m * p.omega_m * p.omega_m * s.beta * hb * B + s.alpha * hb * Ad;
      CHECK(std::abs(x_coeff) < 1e-12);
      CHECK(std::abs(s.alpha * hb * A / p.m + s.beta * hb * Bd) < 1e-12);
    }
  }
  SUBCASE("coupled") {
    const auto spec = coupled_default();
    const auto& p = std::get<CoupledDriven>(spec.params);
    const auto plan = separate(spec);
    std::uniform_real_distribution<double> ut(0.0, plan.period);
    const auto& s1 = plan.shifts[0];
    const auto& s2 = plan.shifts[1];
    for (int i = 0; i < 100; ++i) {
      const double t = ut(rng), w = p.omega;
      const double A = std::sin(w * t), Ad = w * std::cos(w * t);
      const double B = std::cos(w * t), Bd = -w * std::sin(w * t);
      const double x1 = -p.m1 * p.omega1 * p.omega1 * hb * s1.beta * B - p.g * hb * s2.beta * B +
                        p.lambda * std::cos(w * t) + hb * s1.alpha * Ad;
      const double x2 = -p.g * hb * s1.beta * B - p.m2 * p.omega2 * p.omega2 * hb * s2.beta * B +
                        hb * s2.alpha * Ad;
      CHECK(std::abs(x1) < 1e-12);
      CHECK(std::abs(x2) < 1e-12);
      CHECK(std::abs(hb * s1.alpha * A / p.m1 + hb * s1.beta * Bd) < 1e-12);
      CHECK(std::abs(hb * s2.alpha * A / p.m2 + hb * s2.beta * Bd) < 1e-12);
    }
  }
}

TEST_CASE("separate is odd in the drive strength") {
  for (double lam : {0.1, 0.5, -0.7}) {
    const auto a = separate({HarmonicDriven{1.0, 1.0, lam, 2.0}, 1.0});
    const auto b = separate({HarmonicDriven{1.0, 1.0, -lam, 2.0}, 1.0});
    CHECK(a.shifts[0].alpha == -b.shifts[0].alpha);
    CHECK(a.shifts[0].beta == -b.shifts[0].beta);
    const auto c = separate({CoupledDriven{1.0, 2.0, 1.0, 1.5, 0.3, lam, 2.5}, 1.0});
    const auto d = separate({CoupledDriven{1.0, 2.0, 1.0, 1.5, 0.3, -lam, 2.5}, 1.0});
    for (int k = 0; k < 2; ++k) {
      CHECK(c.shifts[k].alpha == -d.shifts[k].alpha);
      CHECK(c.shifts[k].beta == -d.shifts[k].beta);
    }
  }
}

TEST_CASE("normal modes") {
  SUBCASE("decoupled") {
    const auto nm = normal_modes(CoupledDriven{1.0, 2.0, 1.0, 1.5, 0.0, 0.4, 2.5});
    CHECK(nm.theta == 0.0);
    CHECK(nm.Omega1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(nm.Omega2 == doctest::Approx(1.5).epsilon(1e-15));
  }
  SUBCASE("degenerate frequencies") {
    const auto nm = normal_modes(CoupledDriven{1.0, 1.0, 1.0, 1.0, 0.2, 0.0, 2.5});
    CHECK(nm.theta == doctest::Approx(std::numbers::pi / 4));
    CHECK(nm.Omega1 == doctest::Approx(std::sqrt(0.8)).epsilon(1e-14));
    CHECK(nm.Omega2 == doctest::Approx(std::sqrt(1.2)).epsilon(1e-14));
    CHECK(normal_modes(CoupledDriven{1.0, 1.0, 1.0, 1.0, -0.2, 0.0, 2.5}).theta ==
          doctest::Approx(-std::numbers::pi / 4));
    CHECK(normal_modes(CoupledDriven{1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 2.5}).theta == 0.0);
  }
  SUBCASE("unequal masses against the 2x2 eigenvalue oracle") {
    const CoupledDriven p{1.0, 4.0, 1.0, 2.0, 0.5, 0.0, 2.5};
    const auto nm = normal_modes(p);
    const auto [lo, hi] = sorted(nm.Omega1 * nm.Omega1, nm.Omega2 * nm.Omega2);
    // closed form (5 -+ sqrt(9.25)) / 2 of [[1, 0.25], [0.25, 4]]
    CHECK(std::abs(lo - (5.0 - std::sqrt(9.25)) / 2) < 1e-10);
    CHECK(std::abs(hi - (5.0 + std::sqrt(9.25)) / 2) < 1e-10);
    CHECK(lo == doctest::Approx(0.9793093675).epsilon(1e-9));
  }
  SUBCASE("random parameters: eigenvalue, trace and determinant identities") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> um(0.3, 3.0), uw(0.4, 2.5), ug(-0.5, 0.5);
    for (int i = 0; i < 200; ++i) {
      CoupledDriven p{um(rng), um(rng), uw(rng), uw(rng), 0.0, 0.3, 3.7};
      p.g = ug(rng) * p.omega1 * p.omega2 * std::sqrt(p.m1 * p.m2);
      const auto nm = normal_modes(p);
      const double s1 = nm.Omega1 * nm.Omega1, s2 = nm.Omega2 * nm.Omega2;
      const auto [lo, hi] = sorted(s1, s2);
      const auto [elo, ehi] = stiffness_eigenvalues(p);
      CHECK(std::abs(lo - elo) < 1e-10 * ehi);
      CHECK(std::abs(hi - ehi) < 1e-10 * ehi);
      const double tr = p.omega1 * p.omega1 + p.omega2 * p.omega2;
      const double det = p.omega1 * p.omega1 * p.omega2 * p.omega2 - p.g * p.g / (p.m1 * p.m2);
      CHECK(std::abs(s1 + s2 - tr) < 1e-12 * tr);
      CHECK(std::abs(s1 * s2 - det) < 1e-12 * tr * tr);
      CHECK(nm.eta == doctest::Approx(std::pow(p.m1 / p.m2, 0.25)));
      CHECK(nm.M == doctest::Approx(std::sqrt(p.m1 * p.m2)));
    }
  }
  SUBCASE("instability") {
    CHECK_THROWS_AS(normal_modes(CoupledDriven{1.0, 1.0, 1.0, 2.0, 2.5, 0.4, 3.0}), StabilityError);
    CHECK_THROWS_AS(validate({CoupledDriven{1.0, 1.0, 1.0, 2.0, 2.5, 0.4, 3.0}, 1.0}),
                    StabilityError);
  }
}

TEST_CASE("canonical rotation is symplectic") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> um(0.3, 3.0), uw(0.4, 2.5), ug(-0.3, 0.3);
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J.block<2, 2>(0, 2) = Eigen::Matrix2d::Identity();
  J.block<2, 2>(2, 0) = -Eigen::Matrix2d::Identity();
  for (int i = 0; i < 50; ++i) {
    CoupledDriven p{um(rng), um(rng), uw(rng), uw(rng), ug(rng), 0.0, 3.7};
    const auto nm = normal_modes(p);
    const Eigen::Matrix4d S = canonical_transform(nm);
    CHECK((S.transpose() * J * S - J).cwiseAbs().maxCoeff() < 1e-12);
    // inverse map agrees with to_normal_coordinates
    const Eigen::Vector4d lab = S * Eigen::Vector4d(0.3, -1.2, 0.0, 0.0);
    const auto r = to_normal_coordinates(nm, lab(0), lab(1));
    CHECK(r.X1 == doctest::Approx(0.3));
    CHECK(r.X2 == doctest::Approx(-1.2));
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate({HarmonicDriven{-1.0, 1.0, 0.5, 2.0}, 1.0}), ConfigError);
  CHECK_THROWS_AS(validate({HarmonicDriven{1.0, 1.0, 0.5, 2.0}, 0.0}), ConfigError);
  CHECK_THROWS_AS(validate({LinearSingleDrive{1.0, 1.0, NAN, 2.0}, 1.0}), ConfigError);
  CHECK_NOTHROW(validate({HarmonicDriven{1.0, 1.0, -0.5, 2.0}, 1.0}));
  CHECK(parse_variant("coupled") == Variant::CoupledDriven);
  CHECK_FALSE(parse_variant("quartic"));
}

TEST_CASE("parameter access by name") {
  ModelSpec s = coupled_default();
  const auto ps = parameters(s);
  REQUIRE(ps.size() == 8);
  CHECK(ps.front().first == "m1");
  CHECK(ps.back().first == "hbar");
  set_parameter(s, "g", 0.1);
  CHECK(std::get<CoupledDriven>(s.params).g == 0.1);
  set_parameter(s, "hbar", 2.0);
  CHECK(s.hbar == 2.0);
  CHECK_THROWS_AS(set_parameter(s, "omega_m", 1.0), ConfigError);
  for (auto v : {Variant::LinearSingleDrive, Variant::LinearDualDrive, Variant::HarmonicDriven,
                 Variant::CoupledDriven}) {
    const auto d = default_spec(v);
    CHECK(d.variant() == v);
    for (const auto& [name, value] : parameters(d)) {
      ModelSpec e = d;
      CHECK_NOTHROW(set_parameter(e, name, value + 1.0));
    }
  }
}
