#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "kdb/geometry.hpp"

namespace kdb {

// Boundary weight psi(x) = coeff * x^s used by the Finsler models. The zero
// weight is coeff = 0. s > 0 keeps psi(x)/x integrable at 0.
struct PsiSpec {
  double coeff = 0.0;
  double s = 0.5;
};

inline void validate_psi(const PsiSpec& p) {
  if (!std::isfinite(p.coeff) || !std::isfinite(p.s))
    fail(errc::invalid_psi, "psi parameters must be finite");
  if (p.coeff != 0.0 && !(p.s > 0.0))
    fail(errc::invalid_psi, "psi exponent must be positive");
}

inline double psi_eval(const PsiSpec& p, double x) {
  return p.coeff == 0.0 ? 0.0 : p.coeff * std::pow(x, p.s);
}

// integral of |psi(x)|/x over (0,1], closed form for the power family
inline double psi_normal_integral(const PsiSpec& p) {
  validate_psi(p);
  return p.coeff == 0.0 ? 0.0 : std::abs(p.coeff) / p.s;
}

enum class MetricKind {
  KappaUpperInscribed,  // 1 / directional_distance
  BbLower,              // sqrt((1-C sqrt(d))^2 |X_z|^2/(4d^2) + |X|^2/(C d))
  BbUpper,              // sqrt((1+C sqrt(d))^2 |X_z|^2/(4d)   + C |X|^2/d)
  BbUpperSq,            // BbUpper with the 4d^2 normal denominator
  DntUpper,             // C (|X_z|/sqrt(d) + |X|)
  DntLower,             // c (|X_z|/sqrt(d) + |X|)
  FinslerF,             // (1+psi(d)) |X_z|/(2d) + C |X|/sqrt(d)
  FinslerG,             // max of the two FinslerF terms
};

struct MetricModel {
  MetricKind kind = MetricKind::KappaUpperInscribed;
  double C = 1.0;  // multiplicative constant (the lower kinds read it as c)
  PsiSpec psi{};
  double collar = std::numeric_limits<double>::infinity();
  DirDistOptions dd{};
};

inline double metric_eval(const DomainModel& D, const MetricModel& M, const CxVec& z,
                          const CxVec& X) {
  if (M.kind == MetricKind::KappaUpperInscribed)
    return 1.0 / directional_distance(D, z, X, M.dd).value;

  BoundaryFrame f = boundary_frame(D, z);
  double d = f.delta;
  double axz = std::abs(hdot(X, f.normal));
  double ax = norm(X);
  double sd = std::sqrt(d);
  switch (M.kind) {
    case MetricKind::BbLower: {
      double fac = std::max(0.0, 1.0 - M.C * sd);
      return std::sqrt(fac * fac * axz * axz / (4.0 * d * d) + ax * ax / (M.C * d));
    }
    case MetricKind::BbUpper: {
      double fac = 1.0 + M.C * sd;
      return std::sqrt(fac * fac * axz * axz / (4.0 * d) + M.C * ax * ax / d);
    }
    case MetricKind::BbUpperSq: {
      double fac = 1.0 + M.C * sd;
      return std::sqrt(fac * fac * axz * axz / (4.0 * d * d) + M.C * ax * ax / d);
    }
    case MetricKind::DntUpper:
    case MetricKind::DntLower:
      return M.C * (axz / sd + ax);
    case MetricKind::FinslerF:
      return (1.0 + psi_eval(M.psi, d)) * axz / (2.0 * d) + M.C * ax / sd;
    case MetricKind::FinslerG:
      return std::max((1.0 + psi_eval(M.psi, d)) * axz / (2.0 * d), M.C * ax / sd);
    default:
      break;
  }
  fail(errc::invalid_psi, "unhandled metric kind");
}

inline double kappa_upper(const DomainModel& D, const CxVec& z, const CxVec& X,
                          const DirDistOptions& opts = {}) {
  return 1.0 / directional_distance(D, z, X, opts).value;
}

inline MetricModel model_metric(const std::string& kind, double constant = 1.0,
                                PsiSpec psi = {}) {
  validate_psi(psi);
  if (!(constant > 0.0)) fail(errc::invalid_psi, "metric constant must be positive");
  MetricModel m;
  m.C = constant;
  m.psi = psi;
  if (kind == "kappa-upper-inscribed") m.kind = MetricKind::KappaUpperInscribed;
  else if (kind == "bb-model" || kind == "bb-upper") m.kind = MetricKind::BbUpper;
  else if (kind == "bb-lower") m.kind = MetricKind::BbLower;
  else if (kind == "bb-upper-sq") m.kind = MetricKind::BbUpperSq;
  else if (kind == "dnt-upper") m.kind = MetricKind::DntUpper;
  else if (kind == "dnt-lower") m.kind = MetricKind::DntLower;
  else if (kind == "finsler-F") m.kind = MetricKind::FinslerF;
  else if (kind == "finsler-G") m.kind = MetricKind::FinslerG;
  else fail(errc::invalid_psi, "unknown metric kind: " + kind);
  return m;
}

struct PathIntegral {
  double value = 0.0;
  double worst_delta = std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
  bool budget_hit = false;
};

namespace detail {

struct SimpsonCtx {
  const DomainModel* D;
  const MetricModel* M;
  CxVec base, dir;  // point = base + t dir
  PathIntegral* out;
  std::size_t budget;
  double eval(double t) {
    CxVec p = base;
    axpy(base, t, dir, p);
    if (D->s(p) >= 0.0) fail(errc::path_exits_domain, "quadrature node left the domain");
    double d = -signed_distance(*D, p);
    out->worst_delta = std::min(out->worst_delta, d);
    ++out->evals;
    return metric_eval(*D, *M, p, dir);
  }
  double refine(double a, double b, double fa, double fm, double fb, double whole,
                double tol, int depth) {
    double m = 0.5 * (a + b);
    if (out->evals + 2 > budget) {
      out->budget_hit = true;
      return whole;
    }
    double fl = eval(0.5 * (a + m));
    double fr = eval(0.5 * (m + b));
    double left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol * std::abs(left + right))
      return left + right + delta / 15.0;
    return refine(a, m, fa, fl, fm, left, tol, depth - 1) +
           refine(m, b, fm, fr, fb, right, tol, depth - 1);
  }
};

}  // namespace detail

// Adaptive Simpson integral of the metric along a polyline. Segments whose
// endpoint distances differ a lot are pre-split so that delta changes by at
// most half its local value per piece (the integrand grows like 1/delta).
inline PathIntegral integrate_metric(const DomainModel& D, const MetricModel& M,
                                     const std::vector<CxVec>& path,
                                     double rel_tol = 1e-6,
                                     std::size_t node_budget = std::size_t(1) << 14) {
  PathIntegral out;
  if (path.size() < 2) return out;
  std::vector<double> vdelta(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (D.s(path[i]) >= 0.0) fail(errc::path_exits_domain, "path vertex outside the domain");
    vdelta[i] = -signed_distance(D, path[i]);
    if (std::isfinite(M.collar) && vdelta[i] > M.collar + 1e-12)
      fail(errc::outside_collar, "path vertex outside the metric collar");
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const CxVec& a = path[i];
    const CxVec& b = path[i + 1];
    double seg_len2 = dist2(a, b);
    if (seg_len2 == 0.0) continue;
    double da = vdelta[i], db = vdelta[i + 1];
    int parts = (int)std::ceil(std::abs(db - da) / (0.5 * std::min(da, db)));
    parts = std::min(std::max(parts, 1), 64);

    detail::SimpsonCtx ctx{&D, &M, a, sub(b, a), &out, node_budget};
    for (int p = 0; p < parts; ++p) {
      double t0 = double(p) / parts, t1 = double(p + 1) / parts;
      if (out.evals + 3 > node_budget) {
        out.budget_hit = true;
        break;
      }
      double f0 = ctx.eval(t0);
      double fm = ctx.eval(0.5 * (t0 + t1));
      double f1 = ctx.eval(t1);
      double whole = (t1 - t0) / 6.0 * (f0 + 4.0 * fm + f1);
      out.value += ctx.refine(t0, t1, f0, fm, f1, whole, rel_tol, 24);
    }
  }
  return out;
}

}  // namespace kdb
