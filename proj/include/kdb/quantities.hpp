#pragma once

#include <algorithm>
#include <cmath>

#include "kdb/geometry.hpp"

namespace kdb {

// All scalar quantities attached to an ordered pair (z, w). The normal
// component X_z is taken in the frame of the first argument.
struct PairRecord {
  CxVec z, w;
  CxVec X;  // z - w
  double delta_z = 0.0, delta_w = 0.0;
  cplx X_z = 0.0, X_w = 0.0;
  double abs_X = 0.0;
  double B = 0.0;      // |X_z| + |X|^2 + |X| sqrt(delta_z)
  double A = 0.0;      // B / sqrt(delta_z delta_w)
  double A_hat = 0.0;  // |X_z|/delta_z + |X|/sqrt(delta_z)
  double A_p = 0.0;    // curvature-weighted variant of A
  double H = 0.0;
  double H_r = 0.0;    // H with |Re X_z| in place of |X_z|
  double F = 0.0;      // |X| + |sqrt(delta_z) - sqrt(delta_w)|
  double chi = 0.0;    // curvature constant used in A_p
  bool claim_a = false;    // 2B <= sqrt(delta_z delta_w)
  bool concave_a = false;  // 2B <= delta_z
  bool degenerate = false; // z == w
};

// chi is the anchor curvature constant (chi_constant), cached by the caller;
// when it vanishes, chi_eps is substituted in A_p.
inline PairRecord pair_record(const DomainModel& D, double chi, const CxVec& z,
                              const CxVec& w, double chi_eps = 1e-6) {
  PairRecord r;
  r.z = z;
  r.w = w;
  r.X = sub(z, w);
  r.abs_X = norm(r.X);
  r.chi = chi > 0.0 ? chi : chi_eps;
  if (r.abs_X == 0.0) {
    r.delta_z = boundary_distance(D, z);
    r.delta_w = r.delta_z;
    r.degenerate = true;
    r.claim_a = true;
    r.concave_a = true;
    return r;
  }
  BoundaryFrame fz = boundary_frame(D, z);
  BoundaryFrame fw = boundary_frame(D, w);
  r.delta_z = fz.delta;
  r.delta_w = fw.delta;
  r.X_z = hdot(r.X, fz.normal);
  r.X_w = hdot(r.X, fw.normal);

  double axz = std::abs(r.X_z);
  double sdz = std::sqrt(r.delta_z), sdw = std::sqrt(r.delta_w);
  r.B = axz + r.abs_X * r.abs_X + r.abs_X * sdz;
  r.A = r.B / (sdz * sdw);
  r.A_hat = axz / r.delta_z + r.abs_X / sdz;
  r.A_p = (axz + r.chi * r.abs_X * r.abs_X + r.abs_X * std::sqrt(r.chi * r.delta_z)) /
          (sdz * sdw);
  r.H = axz / (std::sqrt(axz) + r.abs_X + sdz) + r.abs_X;
  double rxz = std::abs(r.X_z.real());
  r.H_r = rxz / (std::sqrt(rxz) + r.abs_X + sdz) + r.abs_X;
  r.F = r.abs_X + std::abs(sdz - sdw);
  r.claim_a = 2.0 * r.B <= sdz * sdw;
  r.concave_a = 2.0 * r.B <= r.delta_z;
  return r;
}

struct QuasiSymmetry {
  double a_ratio = 1.0;  // A(w,z) / A(z,w)
  double h_ratio = 1.0;
  bool a_ok = true;
  bool h_ok = true;
};

// rec_zw and rec_wz are the two orientations of the same pair.
inline QuasiSymmetry quasi_symmetry_check(const PairRecord& rec_zw,
                                          const PairRecord& rec_wz,
                                          double a_threshold = 2.2,
                                          double h_threshold = 6.6) {
  QuasiSymmetry q;
  if (rec_zw.degenerate || rec_wz.degenerate) return q;
  q.a_ratio = rec_wz.A / rec_zw.A;
  q.h_ratio = rec_wz.H / rec_zw.H;
  q.a_ok = q.a_ratio <= a_threshold;
  q.h_ok = q.h_ratio <= h_threshold;
  return q;
}

struct BoundFormulas {
  double lower = 0.0;         // log(1 + c A)
  double upper = 0.0;         // log(1 + C A)
  double smooth_upper = 0.0;  // log(1 + C0 A_p)
  double bb_lo = 0.0;         // log(1 + A) - C
  double bb_hi = 0.0;         // log(1 + A) + C
};

inline BoundFormulas bound_formulas(const PairRecord& rec, double c, double C, double C0) {
  BoundFormulas b;
  b.lower = std::log1p(c * rec.A);
  b.upper = std::log1p(C * rec.A);
  b.smooth_upper = std::log1p(C0 * rec.A_p);
  b.bb_lo = std::log1p(rec.A) - C;
  b.bb_hi = std::log1p(rec.A) + C;
  return b;
}

struct FdHrReport {
  bool hr_le_h = true;
  double f_over_hr = 1.0;
  double hr_over_f = 1.0;
  double f_cap = 0.0;   // max{2, C^2+1}
  double hr_cap = 0.0;  // C (C+1)
  bool f_ok = true;
  bool hr_ok = true;
};

// Structural comparison of F, H^r, H at a measured normal-field constant C
// (floored at 2).
inline FdHrReport fd_hr_hd_relation(const PairRecord& rec, double C) {
  FdHrReport rep;
  C = std::max(C, 2.0);
  rep.f_cap = std::max(2.0, C * C + 1.0);
  rep.hr_cap = C * (C + 1.0);
  rep.hr_le_h = rec.H_r <= rec.H + 1e-15;
  if (!rec.degenerate && rec.H_r > 0.0 && rec.F > 0.0) {
    rep.f_over_hr = rec.F / rec.H_r;
    rep.hr_over_f = rec.H_r / rec.F;
  }
  rep.f_ok = rep.f_over_hr <= rep.f_cap + 1e-12;
  rep.hr_ok = rep.hr_over_f <= rep.hr_cap + 1e-12;
  return rep;
}

struct C1Measurement {
  double max_ratio = 0.0;  // sup of defect / (|x-y|^2 - (r_x-r_y)^2)
  double C = 2.0;          // max(2, 2 sqrt(max_ratio))
  int used = 0;
  int skipped = 0;
};

// Empirical Taylor-defect constant of the signed distance over random collar
// pairs with separation at most max_sep.
inline C1Measurement measure_c1_constant(const DomainModel& D, double collar,
                                         int pairs, std::uint64_t seed,
                                         double max_sep = 0.1) {
  C1Measurement m;
  const std::size_t nr = 2 * D.dim();
  const double bound = D.bounding_radius();
  Rng rng(seed);
  auto sample_collar_point = [&](CxVec& out) {
    for (int tries = 0; tries < 4000; ++tries) {
      std::vector<double> x(nr);
      for (std::size_t j = 0; j < nr; ++j) x[j] = rng.uniform(-bound, bound);
      CxVec z = from_real(x);
      if (!D.inside(z)) continue;
      double d = -signed_distance(D, z);
      if (d <= collar && d > 1e-12) {
        out = z;
        return true;
      }
    }
    return false;
  };
  for (int i = 0; i < pairs; ++i) {
    CxVec x;
    if (!sample_collar_point(x)) fail(errc::degenerate_sampling, "collar sampling starved");
    CxVec y = x;
    bool got = false;
    for (int tries = 0; tries < 200 && !got; ++tries) {
      std::vector<double> off(nr);
      for (std::size_t j = 0; j < nr; ++j) off[j] = rng.normal();
      double on = 0.0;
      for (double v : off) on += v * v;
      on = std::sqrt(on);
      double len = max_sep * rng.uniform();
      std::vector<double> yr = to_real(x);
      for (std::size_t j = 0; j < nr; ++j) yr[j] += len * off[j] / on;
      CxVec cand = from_real(yr);
      if (!D.inside(cand)) continue;
      if (-signed_distance(D, cand) > collar) continue;
      y = cand;
      got = true;
    }
    if (!got) { ++m.skipped; continue; }
    C1Defect d = c1_defect(D, x, y);
    if (!d.usable) { ++m.skipped; continue; }
    m.max_ratio = std::max(m.max_ratio, d.ratio);
    ++m.used;
  }
  if (m.used == 0) fail(errc::degenerate_sampling, "no usable defect pairs");
  m.C = std::max(2.0, 2.0 * std::sqrt(m.max_ratio));
  return m;
}

// A computed against the tilted defining function s = r_D (1 + bump/2) with
// the normal direction taken from grad s. Exercises robustness of A under a
// change of defining function.
struct TiltedA {
  double A_s = 0.0;
  double ratio = 1.0;  // A_s / A
};

inline TiltedA tilted_A(const DomainModel& D, const PairRecord& rec) {
  if (rec.degenerate) return {};
  auto bump = [](const CxVec& v) {
    return std::sin(3.0 * v[0].real()) * std::cos(2.0 * v[1].imag());
  };
  auto bump_grad = [&](const CxVec& v, std::vector<double>& g) {
    g.assign(2 * v.size(), 0.0);
    g[0] = 3.0 * std::cos(3.0 * v[0].real()) * std::cos(2.0 * v[1].imag());
    g[3] = -2.0 * std::sin(3.0 * v[0].real()) * std::sin(2.0 * v[1].imag());
  };
  auto delta_s = [&](const CxVec& v) {
    return -signed_distance(D, v) * (1.0 + 0.5 * bump(v));
  };
  double dz = delta_s(rec.z), dw = delta_s(rec.w);

  // grad s at z: (1 + bump/2) grad r + (r/2) grad bump, r < 0 inside
  BoundaryFrame fz = boundary_frame(D, rec.z);
  std::vector<double> g = to_real(fz.normal);
  for (double& v : g) v = -v;  // grad r points outward
  double rz = -fz.delta;
  std::vector<double> gb;
  bump_grad(rec.z, gb);
  double scale = 1.0 + 0.5 * bump(rec.z);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = scale * g[j] + 0.5 * rz * gb[j];
  double gn = 0.0;
  for (double v : g) gn += v * v;
  gn = std::sqrt(gn);
  CxVec ns(D.dim());
  for (std::size_t j = 0; j < D.dim(); ++j)
    ns[j] = cplx(-g[2 * j] / gn, -g[2 * j + 1] / gn);  // inward for s

  double axz = std::abs(hdot(rec.X, ns));
  double Bs = axz + rec.abs_X * rec.abs_X + rec.abs_X * std::sqrt(dz);
  TiltedA out;
  out.A_s = Bs / std::sqrt(dz * dw);
  out.ratio = rec.A > 0.0 ? out.A_s / rec.A : 1.0;
  return out;
}

}  // namespace kdb
