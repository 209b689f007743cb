#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "kdb/quantities.hpp"
#include "kdb/rng.hpp"

namespace kdb {

// Canonical near-inner-boundary pair in the shell 1 < |z| < R, dimension 2:
// z on the positive real axis of the first coordinate, w rotated by eta and
// tilted toward the second coordinate by beta.
struct ShellPair {
  double eps1 = 1e-2;  // delta(z), eps1 >= eps2 > 0
  double eps2 = 1e-2;  // delta(w)
  double eta = 0.0;    // rotation angle, (-pi, pi]
  double beta = 0.0;   // tangential tilt, [0, pi/2]
  double R = 4.0;
};

inline void validate_shell_pair(const ShellPair& sp, double smallness = 0.5) {
  if (!(sp.eps2 > 0.0) || sp.eps1 < sp.eps2)
    fail(errc::constraint_violation, "need eps1 >= eps2 > 0");
  if (!(sp.R > 1.0)) fail(errc::constraint_violation, "shell needs R > 1");
  if (!(sp.eps1 < 0.5 * (sp.R - 1.0)))
    fail(errc::constraint_violation, "pair too deep: delta is not the inner gap");
  if (sp.eta <= -std::numbers::pi || sp.eta > std::numbers::pi)
    fail(errc::constraint_violation, "eta outside (-pi, pi]");
  if (sp.beta < 0.0 || sp.beta > 0.5 * std::numbers::pi)
    fail(errc::constraint_violation, "beta outside [0, pi/2]");
  if ((sp.eps1 - sp.eps2) + sp.beta + std::abs(sp.eta) > smallness)
    fail(errc::constraint_violation, "pair outside the smallness gate");
}

inline CxVec shell_z(const ShellPair& sp) {
  return CxVec{cplx(1.0 + sp.eps1, 0.0), cplx(0.0, 0.0)};
}

inline CxVec shell_w(const ShellPair& sp) {
  double r = 1.0 + sp.eps2;
  return CxVec{r * std::cos(sp.beta) * std::exp(cplx(0.0, sp.eta)),
               cplx(r * std::sin(sp.beta), 0.0)};
}

// Closed form of the normal component of z - w at z (inner-boundary frame,
// inward normal = +radial direction).
inline cplx shell_normal_component(const ShellPair& sp) {
  return cplx(1.0 + sp.eps1, 0.0) -
         (1.0 + sp.eps2) * std::cos(sp.beta) * std::exp(cplx(0.0, sp.eta));
}

struct ShellRegime {
  bool gate = false;        // (eps1 - eps2) + beta^2 <= c0 |eta|
  bool applicable = true;   // inside the smallness region where the model holds
  double H = 0.0;           // exact H over the shell
  double surrogate = 0.0;   // beta + min(sqrt|eta|, |eta|/sqrt(eps1))
  double ratio = 0.0;       // H / surrogate
  double re_tag = 0.0;      // |Re X_z| / ((eps1-eps2) + eta^2 + beta^2)
  double abs_tag = 0.0;     // |X_z|    / ((eps1-eps2) + |eta| + beta^2)
};

inline ShellRegime shell_H_asymptotics(const ShellPair& sp, double c0 = 1e-2) {
  if (!(c0 > 0.0) || c0 > 1e-2)
    fail(errc::constraint_violation, "gate constant must lie in (0, 1e-2]");
  ShellRegime out;
  double gap = sp.eps1 - sp.eps2;
  double aeta = std::abs(sp.eta);
  out.gate = gap + sp.beta * sp.beta <= c0 * aeta;
  out.applicable = gap + sp.beta + aeta <= 0.5 && sp.eps1 < 0.5 * (sp.R - 1.0);

  DomainModel D = DomainModel::shell(sp.R, 2);
  PairRecord rec = pair_record(D, 1.0, shell_z(sp), shell_w(sp));
  out.H = rec.H;
  out.surrogate =
      sp.beta + std::min(std::sqrt(aeta), aeta / std::sqrt(sp.eps1));
  out.ratio = out.surrogate > 0.0 ? out.H / out.surrogate : 0.0;

  double re_den = gap + sp.eta * sp.eta + sp.beta * sp.beta;
  double abs_den = gap + aeta + sp.beta * sp.beta;
  double axz = std::abs(rec.X_z), rxz = std::abs(rec.X_z.real());
  out.re_tag = re_den > 0.0 ? rxz / re_den : 0.0;
  out.abs_tag = abs_den > 0.0 ? axz / abs_den : 0.0;
  return out;
}

// Candidate curve gamma(t) = (1+rho)(e^{i theta1} cos alpha, zeta sin alpha)
// sampled on a uniform grid; zeta stays on the unit sphere of C^{n-1}.
struct ShellCurve {
  std::vector<double> rho, theta1, alpha;
  std::vector<CxVec> zeta;
};

namespace detail {

inline double fd_scalar(const std::vector<double>& f, std::size_t i, double h) {
  std::size_t m = f.size();
  if (i == 0) return (f[1] - f[0]) / h;
  if (i == m - 1) return (f[m - 1] - f[m - 2]) / h;
  return (f[i + 1] - f[i - 1]) / (2.0 * h);
}

inline CxVec fd_vec(const std::vector<CxVec>& f, std::size_t i, double h) {
  std::size_t m = f.size();
  CxVec d(f[0].size());
  const CxVec& a = i == 0 ? f[0] : f[i - 1];
  const CxVec& b = i == m - 1 ? f[m - 1] : f[i + 1];
  double den = (i == 0 || i == m - 1) ? h : 2.0 * h;
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = (b[j] - a[j]) / den;
  return d;
}

}  // namespace detail

// Lower-bound functional evaluated on a candidate curve: the angular-cost
// integrand plus the tilt/radial integral. Trapezoid rule on the node grid,
// derivatives by centered finite differences.
inline double shell_curve_functional(const ShellCurve& c) {
  const std::size_t m = c.rho.size();
  if (m < 2 || c.theta1.size() != m || c.alpha.size() != m || c.zeta.size() != m)
    fail(errc::constraint_violation, "curve arrays must share one grid");
  const double h = 1.0 / double(m - 1);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(c.rho[i] > 0.0)) fail(errc::constraint_violation, "rho must stay positive");
    if (std::abs(norm(c.zeta[i]) - 1.0) > 1e-9)
      fail(errc::constraint_violation, "zeta left the unit sphere");
    double rp = detail::fd_scalar(c.rho, i, h);
    double tp = detail::fd_scalar(c.theta1, i, h);
    double ap = detail::fd_scalar(c.alpha, i, h);
    CxVec zp = detail::fd_vec(c.zeta, i, h);
    double ca = std::cos(c.alpha[i]), sa = std::sin(c.alpha[i]);
    double angular = std::abs(tp * ca * ca - hdot(c.zeta[i], zp).imag() * sa * sa);
    double node = angular / std::sqrt(c.rho[i]) + std::abs(tp * ca) + norm(zp) * std::abs(sa) +
                  std::abs(ap) + std::abs(rp) / std::sqrt(c.rho[i]);
    total += (i == 0 || i == m - 1) ? 0.5 * node : node;
  }
  return total * h;
}

// Three-phase curve: radial drift to depth rho_mid, rotation (with part of
// the tilt and a zeta phase sweep), then radial return with the rest of the
// tilt. Endpoints match the ShellPair boundary conditions exactly.
inline ShellCurve three_phase_curve(const ShellPair& sp, double rho_mid,
                                    double tilt_split, double phi_total,
                                    std::size_t m = 1024) {
  ShellCurve c;
  c.rho.resize(m);
  c.theta1.resize(m);
  c.alpha.resize(m);
  c.zeta.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double t = double(i) / double(m - 1);
    double rho, th, al, phi;
    if (t <= 1.0 / 3.0) {
      double u = 3.0 * t;
      rho = sp.eps1 + (rho_mid - sp.eps1) * u;
      th = 0.0;
      al = 0.0;
      phi = 0.0;
    } else if (t <= 2.0 / 3.0) {
      double u = 3.0 * t - 1.0;
      rho = rho_mid;
      th = sp.eta * u;
      al = sp.beta * tilt_split * u;
      phi = phi_total * u;
    } else {
      double u = 3.0 * t - 2.0;
      rho = rho_mid + (sp.eps2 - rho_mid) * u;
      th = sp.eta;
      al = sp.beta * (tilt_split + (1.0 - tilt_split) * u);
      phi = phi_total;
    }
    c.rho[i] = rho;
    c.theta1[i] = th;
    c.alpha[i] = al;
    c.zeta[i] = CxVec{std::exp(cplx(0.0, phi))};
  }
  return c;
}

struct FamilyMin {
  double value = std::numeric_limits<double>::infinity();
  double rho_mid = 0.0, tilt_split = 0.0, phi_total = 0.0;
};

// Grid search over the three knobs, then a few random smooth perturbations of
// the best curve. Returns the smallest functional value seen.
inline FamilyMin shell_family_min(const ShellPair& sp, std::size_t m = 1024,
                                  std::uint64_t seed = 1) {
  FamilyMin best;
  double lo = std::max(sp.eps1, sp.eps2);
  double hi = std::min(0.5 * (sp.R - 1.0), 0.5);
  if (hi <= lo) hi = 2.0 * lo;
  std::vector<double> mids;
  for (int j = 0; j < 16; ++j)
    mids.push_back(lo * std::pow(hi / lo, double(j) / 15.0));
  const double splits[] = {0.0, 0.5, 1.0};
  const double phis[] = {-2.0 * sp.eta, -sp.eta, 0.0, sp.eta};
  for (double rm : mids)
    for (double s : splits)
      for (double ph : phis) {
        double v = shell_curve_functional(three_phase_curve(sp, rm, s, ph, m));
        if (v < best.value) best = {v, rm, s, ph};
      }
  // smooth random perturbations around the winner
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  ShellCurve base = three_phase_curve(sp, best.rho_mid, best.tilt_split, best.phi_total, m);
  for (int trial = 0; trial < 8; ++trial) {
    ShellCurve c = base;
    int k = 1 + int(rng.uniform() * 3.0);
    double ar = 0.2 * best.rho_mid * rng.uniform(-1.0, 1.0);
    double at = 0.2 * std::abs(sp.eta) * rng.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      double t = double(i) / double(m - 1);
      double bump = std::sin(std::numbers::pi * k * t);
      c.rho[i] = std::max(0.5 * std::min(sp.eps1, sp.eps2), c.rho[i] + ar * bump);
      c.theta1[i] += at * bump;
    }
    double v = shell_curve_functional(c);
    if (v < best.value) best.value = v;
  }
  return best;
}

struct ShellScanCell {
  ShellPair sp;
  ShellRegime regime;
  double functional_min = 0.0;
};

inline std::vector<ShellScanCell> shell_scan(double R, const std::vector<double>& eps_grid,
                                             const std::vector<double>& eta_grid,
                                             const std::vector<double>& beta_grid,
                                             double c0 = 1e-2, bool with_curves = true,
                                             std::size_t curve_nodes = 1024) {
  std::vector<ShellScanCell> cells;
  for (double e : eps_grid)
    for (double eta : eta_grid)
      for (double beta : beta_grid) {
        ShellPair sp;
        sp.eps1 = sp.eps2 = e;
        sp.eta = eta;
        sp.beta = beta;
        sp.R = R;
        validate_shell_pair(sp);
        ShellScanCell cell;
        cell.sp = sp;
        cell.regime = shell_H_asymptotics(sp, c0);
        if (with_curves)
          cell.functional_min = shell_family_min(sp, curve_nodes).value;
        cells.push_back(cell);
      }
  if (cells.empty()) fail(errc::degenerate_sampling, "empty scan grid");
  return cells;
}

}  // namespace kdb
