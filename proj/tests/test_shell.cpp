#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "kdb/geometry.hpp"
#include "kdb/rng.hpp"
#include "kdb/shell.hpp"

using namespace kdb;
using Catch::Approx;

TEST_CASE("shell pair validation") {
  ShellPair ok{0.02, 0.01, 0.1, 0.05, 4.0};
  validate_shell_pair(ok);

  ShellPair bad = ok;
  bad.eps2 = 0.0;
  CHECK_THROWS_AS(validate_shell_pair(bad), Error);
  bad = ok;
  bad.eps2 = 0.03;  // eps1 < eps2
  CHECK_THROWS_AS(validate_shell_pair(bad), Error);
  bad = ok;
  bad.R = 1.0;
  CHECK_THROWS_AS(validate_shell_pair(bad), Error);
  bad = ok;
  bad.eps1 = 1.6;  // deeper than the midline of R=4
  CHECK_THROWS_AS(validate_shell_pair(bad), Error);
  bad = ok;
  bad.eta = 4.0;
  CHECK_THROWS_AS(validate_shell_pair(bad), Error);
  bad = ok;
  bad.beta = -0.1;
  CHECK_THROWS_AS(validate_shell_pair(bad), Error);
  bad = ok;
  bad.eta = 0.4;
  bad.beta = 0.2;  // sum above the smallness gate 0.5
  CHECK_THROWS_AS(validate_shell_pair(bad, 0.5), Error);
}

TEST_CASE("closed-form normal component of a rotated pair") {
  ShellPair sp{0.0, 0.0, 0.1, 0.0, 4.0};
  cplx xz = shell_normal_component(sp);
  CHECK(xz.real() == Approx(2.0 * std::pow(std::sin(0.05), 2)).epsilon(1e-12));
  CHECK(std::abs(xz.imag()) == Approx(std::sin(0.1)).epsilon(1e-12));

  sp.eta = 0.2;
  CHECK(shell_normal_component(sp).real() ==
        Approx(2.0 * std::pow(std::sin(0.1), 2)).epsilon(1e-12));
}

TEST_CASE("closed form agrees with the domain-level normal component") {
  DomainModel S = DomainModel::shell(4.0, 2);
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    ShellPair sp;
    sp.eps2 = std::pow(10.0, rng.uniform(-4.0, -1.2));
    sp.eps1 = sp.eps2 * rng.uniform(1.0, 2.0);
    sp.eta = rng.uniform(-0.2, 0.2);
    sp.beta = rng.uniform(0.0, 0.1);
    sp.R = 4.0;
    validate_shell_pair(sp);
    CxVec z = shell_z(sp), w = shell_w(sp);
    cplx via_geometry = normal_component(S, z, sub(z, w));
    cplx closed = shell_normal_component(sp);
    CHECK(std::abs(via_geometry - closed) < 1e-12);
  }
}

TEST_CASE("rotation-dominated regime gate and size tags") {
  ShellPair sp{1e-3, 1e-3, 0.05, 1e-3, 4.0};
  ShellRegime r = shell_H_asymptotics(sp);
  CHECK(r.gate);  // 0 + 1e-6 <= 1e-2 * 0.05
  CHECK(r.applicable);
  CHECK(r.H > 0.0);
  CHECK(r.surrogate == Approx(1e-3 + std::min(std::sqrt(0.05), 0.05 / std::sqrt(1e-3))));
  CHECK(r.ratio == Approx(r.H / r.surrogate));
  // tags stay within a small constant of 1
  CHECK(r.re_tag > 0.2);
  CHECK(r.re_tag < 5.0);
  CHECK(r.abs_tag > 0.2);
  CHECK(r.abs_tag < 5.0);

  ShellPair off{1e-2, 1e-3, 1e-4, 0.0, 4.0};  // gap dominates the rotation
  CHECK_FALSE(shell_H_asymptotics(off).gate);

  CHECK_THROWS_AS(shell_H_asymptotics(sp, 0.02), Error);  // c0 above its ceiling
  CHECK_THROWS_AS(shell_H_asymptotics(sp, 0.0), Error);
}

TEST_CASE("three-phase curve endpoint conditions") {
  ShellPair sp{0.04, 0.01, 0.15, 0.08, 4.0};
  ShellCurve c = three_phase_curve(sp, 0.2, 0.5, -0.15, 1024);
  REQUIRE(c.rho.size() == 1024);
  CHECK(c.rho.front() == Approx(0.04));
  CHECK(c.rho.back() == Approx(0.01));
  CHECK(c.theta1.front() == 0.0);
  CHECK(c.theta1.back() == Approx(0.15));
  CHECK(c.alpha.front() == 0.0);
  CHECK(c.alpha.back() == Approx(0.08));
  for (std::size_t i = 0; i < c.zeta.size(); i += 100)
    CHECK(std::abs(norm(c.zeta[i]) - 1.0) < 1e-12);
}

TEST_CASE("curve functional input validation") {
  ShellPair sp{0.04, 0.01, 0.1, 0.0, 4.0};
  ShellCurve c = three_phase_curve(sp, 0.1, 0.0, 0.0, 256);
  c.rho[40] = 0.0;
  CHECK_THROWS_AS(shell_curve_functional(c), Error);
  c = three_phase_curve(sp, 0.1, 0.0, 0.0, 256);
  c.zeta[40] = scaled(c.zeta[40], 2.0);
  CHECK_THROWS_AS(shell_curve_functional(c), Error);
}

TEST_CASE("constant curve has zero cost") {
  ShellPair sp{0.04, 0.04, 0.0, 0.0, 4.0};
  ShellCurve c = three_phase_curve(sp, 0.04, 0.0, 0.0, 512);
  CHECK(shell_curve_functional(c) == Approx(0.0).margin(1e-12));
}

TEST_CASE("family minimum matches the pure-radial closed form") {
  ShellPair sp{0.04, 0.01, 0.0, 0.0, 4.0};
  FamilyMin fm = shell_family_min(sp);
  // optimal curve descends monotonically: integral of |rho'|/sqrt(rho)
  CHECK(fm.value == Approx(2.0 * (0.2 - 0.1)).epsilon(0.01));
}

TEST_CASE("family minimum matches the pure-rotation closed form") {
  ShellPair sp{0.01, 0.01, 0.02, 0.0, 4.0};
  FamilyMin fm = shell_family_min(sp);
  // small rotation: staying at depth eps is optimal
  CHECK(fm.value == Approx(0.02 / 0.1 + 0.02).epsilon(0.01));
  CHECK(fm.rho_mid == Approx(0.01));
}

TEST_CASE("scan grid assembles cells with regimes and curve minima") {
  std::vector<ShellScanCell> cells =
      shell_scan(4.0, {1e-3, 1e-2}, {0.05, 0.1}, {0.0}, 1e-2, true, 256);
  REQUIRE(cells.size() == 4);
  for (const ShellScanCell& c : cells) {
    CHECK(c.regime.H > 0.0);
    CHECK(c.regime.surrogate > 0.0);
    CHECK(c.functional_min > 0.0);
    double q = c.regime.ratio;
    CHECK(q > 1e-3);
    CHECK(q < 1e3);
  }
  std::vector<ShellScanCell> dry = shell_scan(4.0, {1e-3}, {0.05}, {0.0}, 1e-2, false);
  CHECK(dry[0].functional_min == 0.0);
  CHECK_THROWS_AS(shell_scan(4.0, {}, {}, {}), Error);
}
