#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "kdb/ball_math.hpp"
#include "kdb/geometry.hpp"

using namespace kdb;
using Catch::Approx;

namespace {
CxVec pt(double a, double b, double c, double d) {
  return CxVec{cplx(a, b), cplx(c, d)};
}
}  // namespace

TEST_CASE("ball boundary frame") {
  DomainModel D = DomainModel::ball(1.0, 2);
  BoundaryFrame f = boundary_frame(D, pt(0.95, 0, 0, 0));
  CHECK(f.delta == Approx(0.05).epsilon(1e-14));
  CHECK(f.foot[0].real() == Approx(1.0));
  CHECK(f.normal[0].real() == Approx(-1.0));
  CHECK(f.unique);

  CHECK_THROWS_AS(boundary_frame(D, pt(0.5, 0, 0, 0)), Error);    // outside collar
  CHECK_THROWS_AS(boundary_frame(D, pt(0, 0, 0, 0)), Error);      // center ambiguous
  CHECK_THROWS_AS(boundary_frame(D, pt(1.5, 0, 0, 0)), Error);    // not interior
}

TEST_CASE("shell boundary frame picks the nearer sphere") {
  DomainModel D = DomainModel::shell(4.0, 2);
  BoundaryFrame in = boundary_frame(D, pt(1.3, 0, 0, 0));
  CHECK(in.delta == Approx(0.3));
  CHECK(in.foot[0].real() == Approx(1.0));
  CHECK(in.normal[0].real() == Approx(1.0));  // inward = away from the hole

  BoundaryFrame out = boundary_frame(D, pt(3.8, 0, 0, 0));
  CHECK(out.delta == Approx(0.2));
  CHECK(out.foot[0].real() == Approx(4.0));
  CHECK(out.normal[0].real() == Approx(-1.0));

  CHECK_THROWS_AS(boundary_frame(D, pt(2.5, 0, 0, 0)), Error);  // equidistant
}

TEST_CASE("ellipsoid projection matches the secular closed form") {
  DomainModel D = DomainModel::ellipsoid({1.0, 4.0});
  // boundary point stays fixed
  CxVec q = project_any(D, pt(1.0, 0, 0, 0));
  CHECK(dist(q, pt(1.0, 0, 0, 0)) < 1e-10);

  // on-axis interior point near the flat side
  BoundaryFrame f = boundary_frame(D, pt(0.97, 0, 0, 0));
  CHECK(f.delta == Approx(0.03).margin(1e-6));
  CHECK(f.normal[0].real() == Approx(-1.0).margin(1e-9));
}

TEST_CASE("signed distance has both signs and the shell closed form") {
  DomainModel B = DomainModel::ball(1.0, 2);
  CHECK(signed_distance(B, pt(0.25, 0, 0, 0)) == Approx(-0.75));
  CHECK(signed_distance(B, pt(1.25, 0, 0, 0)) == Approx(0.25));

  DomainModel S = DomainModel::shell(4.0, 2);
  CHECK(signed_distance(S, pt(1.2, 0, 0, 0)) == Approx(-0.2));
  CHECK(signed_distance(S, pt(0.5, 0, 0, 0)) == Approx(0.5));   // inside the hole
  CHECK(signed_distance(S, pt(4.5, 0, 0, 0)) == Approx(0.5));
  CHECK_THROWS_AS(boundary_distance(S, pt(0.5, 0, 0, 0)), Error);
}

TEST_CASE("directional distance closed forms on the ball") {
  DomainModel D = DomainModel::ball(1.0, 2);
  DirDist c = directional_distance(D, pt(0, 0, 0, 0), pt(1, 0, 0, 0));
  CHECK(c.value == Approx(1.0));
  CHECK(c.angles == 0);

  // radial direction from (0.5, 0): exits at the boundary gap
  CHECK(directional_distance(D, pt(0.5, 0, 0, 0), pt(1, 0, 0, 0)).value == Approx(0.5));
  // tangential direction: chord half-length sqrt(1 - 0.25)
  CHECK(directional_distance(D, pt(0.5, 0, 0, 0), pt(0, 0, 1, 0)).value ==
        Approx(std::sqrt(0.75)));
  // lambda-parameter scaling: doubling X halves the radius
  CHECK(directional_distance(D, pt(0.5, 0, 0, 0), pt(2, 0, 0, 0)).value == Approx(0.25));
}

TEST_CASE("directional distance on the shell sees the inner obstacle") {
  DomainModel D = DomainModel::shell(4.0, 2);
  CHECK(directional_distance(D, pt(1.01, 0, 0, 0), pt(1, 0, 0, 0)).value == Approx(0.01));
  CHECK(directional_distance(D, pt(3.9, 0, 0, 0), pt(1, 0, 0, 0)).value == Approx(0.1));
  // a disc through (0, 1.02) in the second coordinate hits the hole broadside
  double t = directional_distance(D, pt(0, 0, 1.02, 0), pt(0, 0, 1, 0)).value;
  CHECK(t == Approx(0.02));
}

TEST_CASE("ellipsoid directional distance closed form") {
  // equal axes reduce to the ball
  DomainModel E = DomainModel::ellipsoid({1.0, 1.0});
  DomainModel B = DomainModel::ball(1.0, 2);
  CxVec z = pt(0.6, 0.1, -0.2, 0.3);
  for (const CxVec& X : {pt(1, 0, 0, 0), pt(0.3, -1, 0.5, 2), pt(0, 0, 1, 1)}) {
    DirDist s = directional_distance(E, z, X);
    CHECK(s.value == Approx(directional_distance(B, z, X).value).epsilon(1e-12));
    CHECK(s.angles == 0);
  }
  // stretched axis: on-axis gap from (0.5, 0) along z2 is sqrt(3) of the
  // normalized chord
  DomainModel S = DomainModel::ellipsoid({1.0, 2.0});
  CHECK(directional_distance(S, pt(0.5, 0, 0, 0), pt(0, 0, 1, 0)).value ==
        Approx(2.0 * std::sqrt(0.75)).epsilon(1e-12));
}

TEST_CASE("sampled directional distance is conservative and near-exact") {
  // vanishing perturbation amplitude keeps ball geometry but runs the sampler
  DomainModel P = DomainModel::perturbed_ball(1e-12, 3);
  DomainModel B = DomainModel::ball(1.0, 2);
  CxVec z = pt(0.6, 0.1, -0.2, 0.3);
  for (const CxVec& X : {pt(1, 0, 0, 0), pt(0.3, -1, 0.5, 2), pt(0, 0, 1, 1)}) {
    double exact = directional_distance(B, z, X).value;
    DirDist s = directional_distance(P, z, X);
    CHECK(s.value >= exact - 1e-6);
    CHECK(s.value == Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("levi classification of the built-ins") {
  DomainModel B = DomainModel::ball(1.0, 2);
  LeviReport rb = levi_classify(B, pt(1, 0, 0, 0));
  CHECK(rb.cls == "strongly-pseudoconvex");
  REQUIRE(rb.eigenvalues.size() == 1);
  CHECK(rb.eigenvalues[0] == Approx(1.0));

  DomainModel S = DomainModel::shell(4.0, 2);
  LeviReport rs = levi_classify(S, pt(1.05, 0, 0, 0));  // inner wall
  CHECK(rs.cls == "not-pseudoconvex");
  CHECK(rs.eigenvalues[0] == Approx(-1.0));
  LeviReport ro = levi_classify(S, pt(3.9, 0, 0, 0));   // outer wall
  CHECK(ro.cls == "strongly-pseudoconvex");

  DomainModel E = DomainModel::ellipsoid({1.0, 4.0});
  LeviReport re = levi_classify(E, pt(1, 0, 0, 0));
  CHECK(re.cls == "strongly-pseudoconvex");
  CHECK(re.eigenvalues[0] == Approx(0.0625).epsilon(1e-6));
}

TEST_CASE("levi finite-difference fallback agrees with the analytic form") {
  DomainModel B = DomainModel::ball(1.0, 2);
  DomainModel Bfd = B.without_hessian();
  LeviReport rb = levi_classify(Bfd, pt(1, 0, 0, 0));
  CHECK(rb.fd_fallback);
  CHECK(rb.cls == "strongly-pseudoconvex");
  CHECK(rb.eigenvalues[0] == Approx(1.0).margin(1e-4));
}

TEST_CASE("normal component on the shell inner wall") {
  DomainModel S = DomainModel::shell(4.0, 2);
  CxVec z = pt(1.01, 0, 0, 0);
  cplx xz = normal_component(S, z, pt(0.5, 0.25, 0, 0));
  CHECK(xz.real() == Approx(0.5));
  CHECK(xz.imag() == Approx(0.25));
}

TEST_CASE("chi constant of the unit sphere is near one") {
  DomainModel B = DomainModel::ball(1.0, 2);
  ChiReport rep = chi_constant(B, pt(1, 0, 0, 0));
  // normal field of the unit sphere is 1-Lipschitz
  CHECK(rep.value == Approx(1.0).epsilon(0.1));
}

TEST_CASE("inscribed tangent balls verify by sampling") {
  DomainModel B = DomainModel::ball(1.0, 2);
  InscribedBall ib = inscribed_ball(B, pt(0.99, 0, 0, 0), 0.3);
  CHECK(ib.verified);
  CHECK(dist(ib.center, pt(0.7, 0, 0, 0)) < 1e-9);

  double r = largest_inscribed_radius(B, pt(0.99, 0, 0, 0), 0.05);
  CHECK(r == Approx(1.0).epsilon(0.05));

  DomainModel S = DomainModel::shell(4.0, 2);
  double rs = largest_inscribed_radius(S, pt(1.05, 0, 0, 0), 0.05);
  CHECK(rs == Approx(1.5).epsilon(0.05));  // tangent at (1,0), squeezed by both walls
}

TEST_CASE("taylor defect of the ball distance is exactly 1/(2|x|)") {
  DomainModel B = DomainModel::ball(1.0, 2);
  CxVec x = pt(0.93, 0, 0, 0);
  for (const CxVec& y : {pt(0.91, 0.03, 0, 0), pt(0.95, 0, 0.02, 0), pt(0.9, 0.01, 0.01, 0.01)}) {
    C1Defect d = c1_defect(B, x, y);
    REQUIRE(d.usable);
    CHECK(d.ratio == Approx(1.0 / (2.0 * 0.93)).epsilon(1e-9));
  }
  // purely radial displacement degenerates the denominator
  CHECK_FALSE(c1_defect(B, x, pt(0.91, 0, 0, 0)).usable);
}

TEST_CASE("mobius distance oracle values") {
  CxVec zero = pt(0, 0, 0, 0);
  CHECK(ball_distance(zero, zero) == 0.0);
  CHECK(ball_distance(zero, pt(0.5, 0, 0, 0)) == Approx(0.5493061443340549).epsilon(1e-12));
  CHECK(ball_distance(pt(0.9, 0, 0, 0), pt(-0.9, 0, 0, 0)) ==
        Approx(2.9444389791664403).epsilon(1e-12));
  // symmetry and scaling
  CHECK(ball_distance(pt(0.3, 0.1, 0, 0.2), pt(-0.2, 0, 0.4, 0)) ==
        Approx(ball_distance(pt(-0.2, 0, 0.4, 0), pt(0.3, 0.1, 0, 0.2))));
  CHECK(ball_distance(pt(1.8, 0, 0, 0), pt(-1.8, 0, 0, 0), 2.0) ==
        Approx(2.9444389791664403).epsilon(1e-12));
  CHECK_THROWS_AS(ball_distance(pt(1.1, 0, 0, 0), zero), Error);
}

TEST_CASE("ball geodesic nodes are metrically additive") {
  CxVec z = pt(0.8, 0.1, 0, 0), w = pt(-0.3, 0, 0.5, 0);
  double k = ball_distance(z, w);
  std::vector<double> fr{0.25, 0.5, 0.75};
  std::vector<CxVec> mid = ball_geodesic(z, w, fr);
  REQUIRE(mid.size() == 3);
  double sum = ball_distance(z, mid[0]) + ball_distance(mid[0], mid[1]) +
               ball_distance(mid[1], mid[2]) + ball_distance(mid[2], w);
  CHECK(sum == Approx(k).epsilon(1e-10));
  CHECK(ball_distance(z, mid[1]) == Approx(0.5 * k).epsilon(1e-10));
}

TEST_CASE("ball metric infinitesimal form matches the distance quotient") {
  CxVec z = pt(0.7, 0, 0.1, 0);
  CxVec X = pt(0.2, 1, -0.4, 0.3);
  double m = ball_metric(z, X);
  double t = 1e-5;  // small enough for O(t) truncation, large enough to dodge cancellation
  CxVec zt = z;
  axpy(z, t, X, zt);
  CHECK(ball_distance(z, zt) / t == Approx(m).epsilon(1e-4));
}
