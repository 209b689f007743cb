#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "kdb/domain.hpp"
#include "kdb/rng.hpp"

namespace kdb {

// Foot point of the boundary projection together with the inward unit normal.
struct BoundaryFrame {
  CxVec foot;
  CxVec normal;  // unit, points into the domain
  double delta = 0.0;
  bool unique = true;
};

namespace detail {

struct EllipsoidFoot {
  std::vector<double> foot;
  double dist = 0.0;
  bool unique = true;
};

// Nearest point on the axis-aligned ellipsoid sum (x_i/e_i)^2 = 1.
// Secular equation in t with the zero-component branch handled explicitly;
// valid for interior and exterior query points.
inline EllipsoidFoot ellipsoid_nearest(const std::vector<double>& e,
                                       const std::vector<double>& x) {
  const std::size_t m = e.size();
  EllipsoidFoot out;
  out.foot.assign(m, 0.0);

  std::vector<std::size_t> W, Z;
  for (std::size_t i = 0; i < m; ++i) (x[i] != 0.0 ? W : Z).push_back(i);

  if (W.empty()) {
    std::size_t im = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (e[i] < e[im]) im = i;
    out.foot[im] = e[im];
    out.dist = e[im];
    out.unique = false;
    return out;
  }

  double pole = e[W[0]] * e[W[0]];
  for (std::size_t i : W) pole = std::min(pole, e[i] * e[i]);
  const double t_pole = -pole;

  auto F = [&](double t) {
    double v = -1.0;
    for (std::size_t i : W) {
      double q = e[i] * x[i] / (t + e[i] * e[i]);
      v += q * q;
    }
    return v;
  };

  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, e[i] * e[i]);
  double h = scale;
  double lo = t_pole + h;
  for (int it = 0; it < 400 && F(lo) <= 0.0; ++it) {
    h *= 0.5;
    lo = t_pole + h;
  }
  if (F(lo) <= 0.0) fail(errc::projection_no_converge, "secular bracket failed");
  double hi = t_pole + scale;
  while (F(hi) >= 0.0) hi = t_pole + 2.0 * (hi - t_pole);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (F(mid) > 0.0 ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    double f = F(t), df = 0.0;
    for (std::size_t i : W) {
      double d = t + e[i] * e[i];
      df += -2.0 * e[i] * e[i] * x[i] * x[i] / (d * d * d);
    }
    if (df == 0.0) break;
    double nt = t - f / df;
    if (nt <= t_pole) break;
    t = nt;
  }

  for (std::size_t i : W) out.foot[i] = e[i] * e[i] * x[i] / (t + e[i] * e[i]);
  double d2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double d = out.foot[i] - x[i];
    d2 += d * d;
  }
  out.dist = std::sqrt(d2);

  // Off-axis candidate: for zero components the foot may leave the span of x.
  if (!Z.empty()) {
    std::size_t zm = Z[0];
    std::size_t nmin = 1;
    for (std::size_t i : Z) {
      if (e[i] < e[zm]) { zm = i; nmin = 1; }
      else if (i != zm && e[i] == e[zm]) ++nmin;
    }
    if (e[zm] * e[zm] < pole) {
      double tb = -e[zm] * e[zm];
      double feas = 1.0;
      std::vector<double> yb(m, 0.0);
      for (std::size_t i : W) {
        yb[i] = e[i] * e[i] * x[i] / (e[i] * e[i] + tb);
        double q = yb[i] / e[i];
        feas -= q * q;
      }
      if (feas >= 0.0) {
        yb[zm] = e[zm] * std::sqrt(feas);
        double b2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          double d = yb[i] - x[i];
          b2 += d * d;
        }
        double db = std::sqrt(b2);
        if (db < out.dist - 1e-14) {
          out.foot = yb;
          out.dist = db;
          out.unique = false;  // sign of the new component is free
        } else if (std::abs(db - out.dist) <= 1e-12) {
          out.unique = false;
        }
        if (nmin > 1) out.unique = false;
      }
    }
  }
  return out;
}

// Constrained Newton for the nearest boundary point of a general domain.
// Solves y - x = lambda * grad s(y), s(y) = 0 with a gradient-flow fallback.
inline std::vector<double> newton_foot(const DomainModel& D, const std::vector<double>& x) {
  const std::size_t m = x.size();
  auto to_cx = [&](const std::vector<double>& v) { return from_real(v); };

  std::vector<double> y = x;
  double lambda = 0.0;
  {
    CxVec zy = to_cx(y);
    std::vector<double> g = D.real_grad(zy);
    double g2 = 0.0;
    for (double v : g) g2 += v * v;
    if (g2 < 1e-24) fail(errc::projection_no_converge, "vanishing gradient at start");
    double sv = D.s(zy);
    for (std::size_t i = 0; i < m; ++i) y[i] -= sv * g[i] / g2;
    lambda = -sv / g2;
  }

  const double scale = std::max(1.0, std::sqrt(std::inner_product(
      x.begin(), x.end(), x.begin(), 0.0)));
  auto residual = [&](const std::vector<double>& yy, double lam, std::vector<double>& Fv) {
    CxVec zy = to_cx(yy);
    std::vector<double> g = D.real_grad(zy);
    Fv.assign(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) Fv[i] = yy[i] - x[i] - lam * g[i];
    Fv[m] = D.s(zy);
    double r = 0.0;
    for (double v : Fv) r = std::max(r, std::abs(v));
    return r;
  };

  for (int round = 0; round < 2; ++round) {
    std::vector<double> Fv;
    double res = residual(y, lambda, Fv);
    for (int it = 0; it < 80 && res > 1e-12 * scale; ++it) {
      CxVec zy = to_cx(y);
      std::vector<double> g = D.real_grad(zy);
      RealMat H = D.real_hess(zy);
      Eigen::MatrixXd J(m + 1, m + 1);
      J.setZero();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) J(i, j) = -lambda * H.at(i, j);
        J(i, i) += 1.0;
        J(i, m) = -g[i];
        J(m, i) = g[i];
      }
      Eigen::VectorXd Fe(m + 1);
      for (std::size_t i = 0; i <= m; ++i) Fe(i) = Fv[i];
      Eigen::VectorXd d = J.partialPivLu().solve(-Fe);
      if (!d.allFinite()) break;
      double t = 1.0;
      std::vector<double> yn(m);
      double ln = lambda, rn = res;
      for (int bt = 0; bt < 30; ++bt) {
        for (std::size_t i = 0; i < m; ++i) yn[i] = y[i] + t * d(i);
        ln = lambda + t * d(m);
        std::vector<double> Fn;
        rn = residual(yn, ln, Fn);
        if (rn < (1.0 - 1e-4 * t) * res) { Fv = Fn; break; }
        t *= 0.5;
      }
      if (rn >= res) break;
      y = yn;
      lambda = ln;
      res = rn;
    }
    if (res <= 1e-12 * scale) return y;
    // Gradient flow toward the zero set, then retry Newton.
    for (int it = 0; it < 400; ++it) {
      CxVec zy = to_cx(y);
      double sv = D.s(zy);
      std::vector<double> g = D.real_grad(zy);
      double g2 = 0.0;
      for (double v : g) g2 += v * v;
      if (g2 < 1e-24) break;
      for (std::size_t i = 0; i < m; ++i) y[i] -= sv * g[i] / g2;
      if (std::abs(sv) < 1e-13 * scale) break;
    }
    // re-estimate the multiplier from stationarity: y - x = lambda grad s(y)
    std::vector<double> g = D.real_grad(to_cx(y));
    double g2 = 0.0, gd = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      g2 += g[i] * g[i];
      gd += (y[i] - x[i]) * g[i];
    }
    lambda = g2 > 0.0 ? gd / g2 : 0.0;
  }
  std::vector<double> Fv;
  if (residual(y, lambda, Fv) > 1e-10 * scale)
    fail(errc::projection_no_converge, "boundary projection did not converge");
  return y;
}

}  // namespace detail

// Nearest boundary point; works from either side, no collar restriction.
inline CxVec project_any(const DomainModel& D, const CxVec& x) {
  switch (D.kind()) {
    case DomainKind::Ball: {
      double q = norm(x);
      if (q < 1e-300) {
        CxVec foot(D.dim(), cplx(0.0));
        foot[0] = D.ball_r();
        return foot;
      }
      CxVec foot = x;
      for (cplx& c : foot) c *= D.ball_r() / q;
      return foot;
    }
    case DomainKind::Shell: {
      double q = norm(x);
      if (q < 1e-300) {
        CxVec foot(D.dim(), cplx(0.0));
        foot[0] = 1.0;
        return foot;
      }
      double target = (q < 0.5 * (1.0 + D.shell_R())) ? 1.0 : D.shell_R();
      CxVec foot = x;
      for (cplx& c : foot) c *= target / q;
      return foot;
    }
    case DomainKind::Ellipsoid: {
      std::vector<double> e(2 * D.dim());
      const std::vector<double>& a = D.ellipsoid_axes();
      for (std::size_t j = 0; j < D.dim(); ++j) e[2 * j] = e[2 * j + 1] = a[j];
      detail::EllipsoidFoot f = detail::ellipsoid_nearest(e, to_real(x));
      return from_real(f.foot);
    }
    default:
      return from_real(detail::newton_foot(D, to_real(x)));
  }
}

// Inward unit normal at a point on (or numerically near) the boundary.
inline CxVec inward_normal_at(const DomainModel& D, const CxVec& q) {
  std::vector<double> g = D.real_grad(q);
  double gn = 0.0;
  for (double v : g) gn += v * v;
  gn = std::sqrt(gn);
  if (gn < 1e-14) fail(errc::ambiguous_projection, "gradient vanishes on boundary");
  CxVec n(D.dim());
  for (std::size_t j = 0; j < D.dim(); ++j)
    n[j] = cplx(-g[2 * j] / gn, -g[2 * j + 1] / gn);
  return n;
}

// Signed Euclidean boundary distance: negative inside, positive outside.
inline double signed_distance(const DomainModel& D, const CxVec& x) {
  double q = norm(x);
  if (q > 2.0 * D.bounding_radius() + 1.0)
    fail(errc::outside_collar, "query point far outside the bounding radius");
  switch (D.kind()) {
    case DomainKind::Ball:
      return q - D.ball_r();
    case DomainKind::Shell:
      return std::max(1.0 - q, q - D.shell_R());
    default: {
      CxVec foot = project_any(D, x);
      double d = dist(x, foot);
      return D.s(x) < 0.0 ? -d : d;
    }
  }
}

// Unsigned distance to the boundary for interior points.
inline double boundary_distance(const DomainModel& D, const CxVec& z) {
  double r = signed_distance(D, z);
  if (r >= 0.0) fail(errc::not_interior, "point is not inside the domain");
  return -r;
}

// Projection frame for interior points inside the collar.
inline BoundaryFrame boundary_frame(const DomainModel& D, const CxVec& z) {
  if (!(D.s(z) < 0.0)) fail(errc::not_interior, "frame requested at a non-interior point");
  BoundaryFrame f;
  switch (D.kind()) {
    case DomainKind::Ball: {
      double q = norm(z);
      if (q < 1e-300) fail(errc::ambiguous_projection, "ball center has no unique foot");
      f.foot = z;
      for (cplx& c : f.foot) c *= D.ball_r() / q;
      f.delta = D.ball_r() - q;
      f.normal = z;
      for (cplx& c : f.normal) c *= -1.0 / q;
      f.unique = true;
      break;
    }
    case DomainKind::Shell: {
      double q = norm(z);
      double din = q - 1.0, dout = D.shell_R() - q;
      if (std::abs(din - dout) < 1e-12)
        fail(errc::ambiguous_projection, "point equidistant from both spheres");
      bool inner = din < dout;
      f.foot = z;
      for (cplx& c : f.foot) c *= (inner ? 1.0 : D.shell_R()) / q;
      f.delta = inner ? din : dout;
      f.normal = z;
      for (cplx& c : f.normal) c *= (inner ? 1.0 : -1.0) / q;
      f.unique = true;
      break;
    }
    case DomainKind::Ellipsoid: {
      std::vector<double> e(2 * D.dim());
      const std::vector<double>& a = D.ellipsoid_axes();
      for (std::size_t j = 0; j < D.dim(); ++j) e[2 * j] = e[2 * j + 1] = a[j];
      detail::EllipsoidFoot ef = detail::ellipsoid_nearest(e, to_real(z));
      f.foot = from_real(ef.foot);
      f.delta = ef.dist;
      f.unique = ef.unique;
      f.normal = inward_normal_at(D, f.foot);
      break;
    }
    default: {
      f.foot = from_real(detail::newton_foot(D, to_real(z)));
      f.delta = dist(z, f.foot);
      f.unique = true;
      f.normal = inward_normal_at(D, f.foot);
      break;
    }
  }
  if (f.delta > D.collar_width() + 1e-12)
    fail(errc::outside_collar, "point lies outside the boundary collar");
  return f;
}

// Complex normal component <X, n> at the foot of z.
inline cplx normal_component(const DomainModel& D, const CxVec& z, const CxVec& X) {
  BoundaryFrame f = boundary_frame(D, z);
  return hdot(X, f.normal);
}

struct DirDistOptions {
  int initial_angles = 64;
  int max_angles = 8192;
  double abs_tol = 1e-8;
};

struct DirDist {
  double value = 0.0;
  int angles = 0;
  bool converged = false;
};

namespace detail {

// First exit time of the ray z + t e^{i theta} X. March to bracket the first
// sign change of s, then bisect; marching resolution only affects angles that
// are never the minimizer.
inline double ray_exit(const DomainModel& D, const CxVec& z, const CxVec& X,
                       double theta) {
  const std::size_t n = z.size();
  CxVec u(n);
  cplx rot = std::polar(1.0, theta);
  for (std::size_t j = 0; j < n; ++j) u[j] = rot * X[j];
  double un = norm(u);
  double reach = (2.2 * D.bounding_radius() + norm(z)) / un;
  const int steps = 160;
  double dt = reach / steps;
  CxVec p(n);
  double lo = 0.0, hi = -1.0;
  for (int k = 1; k <= steps + 2; ++k) {
    double t = k * dt;
    axpy(z, t, u, p);
    if (D.s(p) >= 0.0) {
      hi = t;
      lo = (k - 1) * dt;
      break;
    }
  }
  if (hi < 0.0) fail(errc::projection_no_converge, "ray never exits the domain");
  for (int it = 0; it < 64; ++it) {
    double mid = 0.5 * (lo + hi);
    axpy(z, mid, u, p);
    (D.s(p) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

namespace detail {

// Sphere crossings have closed form; the minimizing phase aligns the drift
// term, so ball and shell need no angle sampling at all.
inline double ball_dir_exit(double a, double n2, double gap) {
  // first root of t^2 n2 + 2 a t - gap = 0 with a >= 0, gap > 0
  return (-a + std::sqrt(a * a + n2 * gap)) / n2;
}

}  // namespace detail

// Largest rho such that the whole disc z + lambda X, |lambda| < rho, stays in
// the domain; measured in the lambda parameter (scales like 1/|X|). Sampled
// as min over phases of the first ray exit, which upper-bounds the true sup
// and decreases as the grid refines. Ball and shell domains use the exact
// closed form instead (angles = 0 in the report).
inline DirDist directional_distance(const DomainModel& D, const CxVec& z, const CxVec& X,
                                    const DirDistOptions& opt = {}) {
  if (!(D.s(z) < 0.0)) fail(errc::not_interior, "directional distance needs an interior point");
  if (norm(X) == 0.0) fail(errc::degenerate_sampling, "zero direction");

  if (D.kind() == DomainKind::Ball) {
    double a = std::abs(hdot(X, z)), n2 = norm2(X);
    double gap = D.ball_r() * D.ball_r() - norm2(z);
    return {detail::ball_dir_exit(a, n2, gap), 0, true};
  }
  if (D.kind() == DomainKind::Shell) {
    double a = std::abs(hdot(X, z)), n2 = norm2(X);
    double R = D.shell_R(), q2 = norm2(z);
    double t = detail::ball_dir_exit(a, n2, R * R - q2);  // outer sphere, aligned phase
    double disc = a * a - n2 * (q2 - 1.0);                // inner sphere, anti-aligned
    if (disc >= 0.0) t = std::min(t, (a - std::sqrt(disc)) / n2);
    return {t, 0, true};
  }
  if (D.kind() == DomainKind::Ellipsoid) {
    // s(z + t X) is Hermitian-quadratic in t, so the admissible disc is exact
    const std::vector<double>& ax = D.ellipsoid_axes();
    double a = 0.0, c = -1.0;
    cplx b = 0.0;
    for (std::size_t j = 0; j < D.dim(); ++j) {
      double wgt = 1.0 / (ax[j] * ax[j]);
      a += wgt * std::norm(X[j]);
      b += wgt * X[j] * std::conj(z[j]);
      c += wgt * std::norm(z[j]);
    }
    return {detail::ball_dir_exit(std::abs(b), a, -c), 0, true};
  }

  const double un = norm(X);
  const double two_pi = 2.0 * std::numbers::pi;
  int M = opt.initial_angles;
  double v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < M; ++i)
    v = std::min(v, detail::ray_exit(D, z, X, two_pi * i / M));

  DirDist out;
  while (M < opt.max_angles) {
    // refine: new angles are the midpoints of the current grid
    double vn = v;
    for (int i = 0; i < M; ++i)
      vn = std::min(vn, detail::ray_exit(D, z, X, two_pi * (i + 0.5) / M));
    M *= 2;
    // convergence judged on the Euclidean exit length vn*|X|
    if (std::abs(vn - v) * un < opt.abs_tol) {
      out.value = vn;
      out.angles = M;
      out.converged = true;
      return out;
    }
    v = vn;
  }
  out.value = v;
  out.angles = M;
  out.converged = false;
  return out;
}

struct ChiReport {
  double h = 0.0;
  double chi[3] = {0.0, 0.0, 0.0};  // at h, h/2, h/4
  double value = 0.0;
  int pairs = 0;
};

/// Local Lipschitz constant of the inward normal field near the anchor point:
// max |n(q_i) - n(q_j)| / |q_i - q_j| over boundary samples at three scales.
inline ChiReport chi_constant(const DomainModel& D, const CxVec& anchor, double h = 0.0) {
  if (h <= 0.0) h = 0.05 * D.bounding_radius();
  CxVec p = project_any(D, anchor);
  CxVec np = inward_normal_at(D, p);
  std::vector<double> np_r = to_real(np);

  const std::size_t m = 2 * D.dim();
  ChiReport rep;
  rep.h = h;
  for (int lvl = 0; lvl < 3; ++lvl) {
    double scale = h / double(1 << lvl);
    Rng rng(0x5bd1e995u + std::uint64_t(lvl));
    std::vector<CxVec> feet;
    std::vector<std::vector<double>> normals;
    const int dirs = 24;
    for (int i = 0; i < dirs; ++i) {
      std::vector<double> tau(m);
      for (std::size_t j = 0; j < m; ++j) tau[j] = rng.normal();
      double proj = 0.0;
      for (std::size_t j = 0; j < m; ++j) proj += tau[j] * np_r[j];
      for (std::size_t j = 0; j < m; ++j) tau[j] -= proj * np_r[j];
      double tn = 0.0;
      for (std::size_t j = 0; j < m; ++j) tn += tau[j] * tau[j];
      tn = std::sqrt(tn);
      if (tn < 1e-12) continue;
      std::vector<double> q = to_real(p);
      for (std::size_t j = 0; j < m; ++j) q[j] += scale * tau[j] / tn;
      CxVec foot = project_any(D, from_real(q));
      feet.push_back(foot);
      normals.push_back(to_real(inward_normal_at(D, foot)));
    }
    if (feet.size() < 2) fail(errc::degenerate_sampling, "too few boundary samples");
    double best = 0.0;
    for (std::size_t i = 0; i < feet.size(); ++i)
      for (std::size_t j = i + 1; j < feet.size(); ++j) {
        double d = dist(feet[i], feet[j]);
        if (d < 1e-9 * scale || d > 2.5 * scale) continue;
        double dn = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          double t = normals[i][k] - normals[j][k];
          dn += t * t;
        }
        best = std::max(best, std::sqrt(dn) / d);
        ++rep.pairs;
      }
    rep.chi[lvl] = best;
  }
  if (rep.pairs == 0) fail(errc::degenerate_sampling, "no usable sample pairs");
  rep.value = std::max({rep.chi[0], rep.chi[1], rep.chi[2]});
  return rep;
}

struct LeviReport {
  std::vector<double> eigenvalues;  // ascending, n-1 of them
  std::string cls;                  // strongly-pseudoconvex | degenerate | not-pseudoconvex
  bool fd_fallback = false;
  double tol = 0.0;
};

// Levi form of the defining function restricted to the complex tangent space
// at the boundary point nearest to `anchor`.
inline LeviReport levi_classify(const DomainModel& D, const CxVec& anchor,
                                double tol = 1e-8) {
  const std::size_t n = D.dim();
  CxVec p = project_any(D, anchor);
  CxVec g = D.grad(p);
  double gn = norm(g);
  if (gn < 1e-12) fail(errc::degenerate_sampling, "gradient vanishes at boundary point");

  LeviReport rep;
  rep.tol = tol;

  CxMat H(n);
  if (D.has_hessian()) {
    H = D.hess(p);
  } else {
    // assemble from central differences of the real gradient
    rep.fd_fallback = true;
    rep.tol = std::max(tol, 1e-6);
    const std::size_t m = 2 * n;
    double step = 1e-5 * std::max(1.0, norm(p));
    RealMat hr(m);
    std::vector<double> pr = to_real(p);
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> plus = pr, minus = pr;
      plus[j] += step;
      minus[j] -= step;
      std::vector<double> gp = D.real_grad(from_real(plus));
      std::vector<double> gm = D.real_grad(from_real(minus));
      for (std::size_t i = 0; i < m; ++i) hr.at(i, j) = (gp[i] - gm[i]) / (2.0 * step);
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        double sym = 0.5 * (hr.at(i, j) + hr.at(j, i));
        hr.at(i, j) = hr.at(j, i) = sym;
      }
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double xx = hr.at(2 * j, 2 * k), yy = hr.at(2 * j + 1, 2 * k + 1);
        double xy = hr.at(2 * j, 2 * k + 1), yx = hr.at(2 * j + 1, 2 * k);
        H.at(j, k) = 0.25 * cplx(xx + yy, xy - yx);
      }
  }

  // L(X) = sum_{j,k} H_jk X_j conj(X_k) = X^H A X with A = conj(H)
  Eigen::MatrixXcd A(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) A(j, k) = std::conj(H.at(j, k));

  // complex tangent space = orthogonal complement of conj(g)
  Eigen::VectorXcd u(n);
  for (std::size_t j = 0; j < n; ++j) u(j) = std::conj(g[j]) / gn;
  Eigen::MatrixXcd Q = Eigen::HouseholderQR<Eigen::MatrixXcd>(u).householderQ();
  Eigen::MatrixXcd B = Q.rightCols(n - 1);

  Eigen::MatrixXcd M = B.adjoint() * A * B;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
  rep.eigenvalues.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) rep.eigenvalues[i] = es.eigenvalues()(i);

  double lmin = rep.eigenvalues.front();
  if (lmin > rep.tol) rep.cls = "strongly-pseudoconvex";
  else if (lmin >= -rep.tol) rep.cls = "degenerate";
  else rep.cls = "not-pseudoconvex";
  return rep;
}

struct InscribedBall {
  CxVec center;
  double radius = 0.0;
  bool verified = false;
};

// Ball of radius r tangent at the boundary point nearest to q, centered along
// the inward normal. Verified by sampling the closed ball against s <= 0.
inline InscribedBall inscribed_ball(const DomainModel& D, const CxVec& q, double r,
                                    int samples = 4096) {
  CxVec p = project_any(D, q);
  CxVec nrm = inward_normal_at(D, p);
  InscribedBall ball;
  axpy(p, r, nrm, ball.center);
  ball.radius = r;
  if (!(D.s(ball.center) < 0.0))
    fail(errc::not_interior, "tangent ball center lands outside the domain");
  Rng rng(0x2545F4914F6CDD1DULL);
  const std::size_t m = 2 * D.dim();
  ball.verified = true;
  for (int i = 0; i < samples; ++i) {
    std::vector<double> v(m);
    double vn = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      v[j] = rng.normal();
      vn += v[j] * v[j];
    }
    vn = std::sqrt(vn);
    if (vn < 1e-12) continue;
    double rad = r * std::pow(rng.uniform(), 1.0 / double(m));
    std::vector<double> c = to_real(ball.center);
    for (std::size_t j = 0; j < m; ++j) c[j] += rad * v[j] / vn;
    if (D.s(from_real(c)) > 1e-12) {
      ball.verified = false;
      break;
    }
  }
  return ball;
}

// Largest verified tangent-ball radius at the boundary point nearest to q.
inline double largest_inscribed_radius(const DomainModel& D, const CxVec& q,
                                       double r0 = 0.0) {
  if (r0 <= 0.0) r0 = 0.25 * D.collar_width();
  auto ok = [&](double r) {
    try {
      return inscribed_ball(D, q, r, 2048).verified;
    } catch (const Error&) {
      return false;
    }
  };
  if (!ok(r0)) fail(errc::not_interior, "seed tangent ball is not contained in the domain");
  double good = r0, bad = -1.0;
  for (double r = 2.0 * r0; r <= 2.0 * D.bounding_radius(); r *= 2.0) {
    if (ok(r)) good = r;
    else { bad = r; break; }
  }
  if (bad < 0.0) return good;
  for (int it = 0; it < 30; ++it) {
    double mid = 0.5 * (good + bad);
    (ok(mid) ? good : bad) = mid;
  }
  return good;
}

struct C1Defect {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  bool usable = false;
};

// First-order Taylor defect of the signed boundary distance between two
// interior collar points, normalized by |x-y|^2 - (r(x)-r(y))^2.
inline C1Defect c1_defect(const DomainModel& D, const CxVec& x, const CxVec& y) {
  BoundaryFrame fx = boundary_frame(D, x);
  double rx = -fx.delta;
  double ry = signed_distance(D, y);
  CxVec grad_r = fx.normal;
  for (cplx& c : grad_r) c *= -1.0;  // signed distance grows outward
  C1Defect out;
  out.numerator = std::abs(ry - rx - rdot(sub(y, x), grad_r));
  out.denominator = dist2(x, y) - (rx - ry) * (rx - ry);
  if (out.denominator > 1e-18) {
    out.ratio = out.numerator / out.denominator;
    out.usable = true;
  }
  return out;
}

}  // namespace kdb
