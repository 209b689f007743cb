#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "kdb/quantities.hpp"
#include "kdb/rng.hpp"

using namespace kdb;
using Catch::Approx;

namespace {
CxVec pt(double a, double b, double c, double d) {
  return CxVec{cplx(a, b), cplx(c, d)};
}

// random ball collar point with delta in [dlo, dhi]
CxVec collar_point(Rng& rng, double dlo, double dhi) {
  double delta = rng.uniform(dlo, dhi);
  std::vector<double> v(4);
  double n = 0.0;
  for (double& x : v) { x = rng.normal(); n += x * x; }
  n = std::sqrt(n);
  CxVec z = from_real(v);
  return scaled(z, (1.0 - delta) / n);
}
}  // namespace

TEST_CASE("pair record hand-evaluated examples on the ball") {
  DomainModel D = DomainModel::ball(1.0, 2);

  // tangential pair: the normal component vanishes
  PairRecord t = pair_record(D, 1.0, pt(0.9, 0, 0, 0), pt(0.9, 0, 0.1, 0));
  CHECK(std::abs(t.X_z) < 1e-14);
  CHECK(t.delta_z == Approx(0.1));
  CHECK(t.B == Approx(0.01 + 0.1 * std::sqrt(0.1)).epsilon(1e-12));

  // radial pair
  PairRecord r = pair_record(D, 1.0, pt(0.99, 0, 0, 0), pt(0.98, 0, 0, 0));
  CHECK(std::abs(r.X_z) == Approx(0.01).epsilon(1e-12));
  CHECK(r.delta_z == Approx(0.01));
  CHECK(r.delta_w == Approx(0.02));
  CHECK(r.B == Approx(0.01 + 0.0001 + 0.01 * std::sqrt(0.01)).epsilon(1e-12));
  CHECK(r.A == Approx(0.0111 / std::sqrt(0.0002)).epsilon(1e-12));
  CHECK(r.A == Approx(0.78489).epsilon(1e-4));
  CHECK(r.H == Approx(0.01 / (0.1 + 0.01 + 0.1) + 0.01).epsilon(1e-12));
  CHECK(r.H_r == Approx(r.H).epsilon(1e-12));  // X_z is real here
  CHECK(r.F == Approx(0.01 + std::abs(std::sqrt(0.01) - std::sqrt(0.02))).epsilon(1e-12));
}

TEST_CASE("degenerate pair vanishes") {
  DomainModel D = DomainModel::ball(1.0, 2);
  PairRecord r = pair_record(D, 1.0, pt(0.95, 0, 0, 0), pt(0.95, 0, 0, 0));
  CHECK(r.degenerate);
  CHECK(r.A == 0.0);
  CHECK(r.B == 0.0);
  CHECK(r.H == 0.0);
  CHECK(r.F == 0.0);
  CHECK(r.claim_a);
}

TEST_CASE("regime flags from the defining inequalities") {
  DomainModel D = DomainModel::ball(1.0, 2);
  PairRecord close = pair_record(D, 1.0, pt(0.9, 0, 0, 0), pt(0.9005, 0, 0, 0));
  CHECK(close.claim_a);
  CHECK(close.concave_a);
  CHECK(2.0 * close.B <= std::sqrt(close.delta_z * close.delta_w));

  PairRecord far = pair_record(D, 1.0, pt(0.99, 0, 0, 0), pt(-0.99, 0, 0, 0));
  CHECK_FALSE(far.claim_a);
  CHECK_FALSE(far.concave_a);
}

TEST_CASE("pointwise order relations over random collar pairs") {
  DomainModel D = DomainModel::ball(1.0, 2);
  Rng rng(42);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    CxVec z = collar_point(rng, 1e-4, 0.1);
    CxVec w = collar_point(rng, 1e-4, 0.1);
    PairRecord r = pair_record(D, 1.0, z, w);
    CHECK(r.H_r <= r.H + 1e-15);
    // A_hat plus the squared-length term reassembles B/delta_z exactly
    CHECK(r.B / r.delta_z ==
          Approx(r.A_hat + r.abs_X * r.abs_X / r.delta_z).epsilon(1e-12));
    if (r.delta_w >= r.delta_z) {
      CHECK(r.B / r.delta_z >= r.A * (1.0 - 1e-12));
      ++checked;
    }
    // A_p with chi=1 dominates A because chi delta_z <= delta_z keeps the
    // sqrt term while the |X|^2 term gains the chi weight
    CHECK(r.A_p >= 0.0);
  }
  CHECK(checked > 50);
}

TEST_CASE("quasi symmetry check on a mild pair") {
  DomainModel D = DomainModel::ball(1.0, 2);
  PairRecord zw = pair_record(D, 1.0, pt(0.95, 0, 0, 0), pt(0.95, 0, 0.01, 0));
  PairRecord wz = pair_record(D, 1.0, pt(0.95, 0, 0.01, 0), pt(0.95, 0, 0, 0));
  QuasiSymmetry qs = quasi_symmetry_check(zw, wz);
  CHECK(qs.a_ratio == Approx(wz.A / zw.A));
  CHECK(qs.a_ok);
  CHECK(qs.h_ok);
  CHECK(qs.a_ratio <= 2.2);
}

TEST_CASE("bound formula shapes") {
  DomainModel D = DomainModel::ball(1.0, 2);
  PairRecord r = pair_record(D, 1.0, pt(0.99, 0, 0, 0), pt(0.98, 0, 0, 0));
  BoundFormulas bf = bound_formulas(r, 0.5, 3.0, 2.0);
  CHECK(bf.lower == Approx(std::log1p(0.5 * r.A)));
  CHECK(bf.upper == Approx(std::log1p(3.0 * r.A)));
  CHECK(bf.smooth_upper == Approx(std::log1p(2.0 * r.A_p)));
  CHECK(bf.bb_lo == Approx(std::log1p(r.A) - 3.0));
  CHECK(bf.bb_hi == Approx(std::log1p(r.A) + 3.0));
  CHECK(bf.lower < bf.upper);
}

TEST_CASE("F and H^r relation caps") {
  DomainModel D = DomainModel::ball(1.0, 2);
  PairRecord r = pair_record(D, 1.0, pt(0.95, 0, 0, 0), pt(0.95, 0, 0.02, 0));
  FdHrReport rep = fd_hr_hd_relation(r, 2.0);
  CHECK(rep.f_cap == Approx(5.0));   // C^2 + 1
  CHECK(rep.hr_cap == Approx(6.0));  // C (C + 1)
  CHECK(rep.hr_le_h);
  CHECK(rep.f_ok);
  CHECK(rep.hr_ok);
  CHECK(rep.f_over_hr == Approx(r.F / r.H_r));

  // constants below 2 are floored
  FdHrReport low = fd_hr_hd_relation(r, 0.5);
  CHECK(low.f_cap == Approx(5.0));
  CHECK(low.hr_cap == Approx(6.0));
}

TEST_CASE("measured taylor-defect constant of the ball") {
  DomainModel D = DomainModel::ball(1.0, 2);
  C1Measurement m = measure_c1_constant(D, 0.1, 300, 99);
  CHECK(m.used > 200);
  // exact ratio is 1/(2|x|) with |x| in [0.9, 1)
  CHECK(m.max_ratio > 0.5);
  CHECK(m.max_ratio <= 1.0 / 1.8 + 1e-12);
  CHECK(m.C == 2.0);
}

TEST_CASE("tilted defining function keeps A comparable") {
  DomainModel D = DomainModel::ball(1.0, 2);
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    CxVec z = collar_point(rng, 1e-3, 0.1);
    CxVec w = collar_point(rng, 1e-3, 0.1);
    PairRecord r = pair_record(D, 1.0, z, w);
    TiltedA t = tilted_A(D, r);
    CHECK(t.A_s > 0.0);
    CHECK(t.ratio > 0.2);
    CHECK(t.ratio < 5.0);
  }
}
