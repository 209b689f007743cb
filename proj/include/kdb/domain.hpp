#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "kdb/complex_vec.hpp"
#include "kdb/error.hpp"

namespace kdb {

// Small dense complex matrix, row-major.
struct CxMat {
  std::size_t n = 0;
  std::vector<cplx> a;

  CxMat() = default;
  explicit CxMat(std::size_t dim) : n(dim), a(dim * dim, cplx(0.0)) {}
  cplx& at(std::size_t j, std::size_t k) { return a[j * n + k]; }
  const cplx& at(std::size_t j, std::size_t k) const { return a[j * n + k]; }
};

struct RealMat {
  std::size_t n = 0;
  std::vector<double> a;

  RealMat() = default;
  explicit RealMat(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}
  double& at(std::size_t j, std::size_t k) { return a[j * n + k]; }
  const double& at(std::size_t j, std::size_t k) const { return a[j * n + k]; }
};

enum class DomainKind { Ball, Shell, Ellipsoid, PerturbedBall, Custom, Transformed };

// One monomial of a real polynomial in (Re z_1, Im z_1, ..., Re z_n, Im z_n).
struct Monomial {
  std::vector<int> exp;
  double coef = 0.0;
};

// Bounded domain in C^n given by a defining function s < 0 inside.
// Built-in kinds carry closed-form boundary geometry; custom kinds are
// polynomial data; transformed kinds are affine images of a base domain.
class DomainModel {
 public:
  static DomainModel ball(double r, std::size_t n = 2) {
    require(r > 0.0 && n >= 2, "ball needs r > 0 and n >= 2");
    DomainModel d(DomainKind::Ball, n);
    d.r_ = r;
    d.bound_ = r;
    d.spec_ = "ball:r=" + trim_num(r) + (n != 2 ? ",n=" + std::to_string(n) : "");
    return d;
  }

  static DomainModel shell(double R, std::size_t n = 2) {
    require(R > 1.0 && n >= 2, "shell needs R > 1 and n >= 2");
    DomainModel d(DomainKind::Shell, n);
    d.R_ = R;
    d.bound_ = R;
    d.spec_ = "shell:R=" + trim_num(R) + (n != 2 ? ",n=" + std::to_string(n) : "");
    return d;
  }

  static DomainModel ellipsoid(const std::vector<double>& axes) {
    require(axes.size() >= 2, "ellipsoid needs n >= 2 semi-axes");
    for (double a : axes) require(a > 0.0, "ellipsoid semi-axes must be positive");
    DomainModel d(DomainKind::Ellipsoid, axes.size());
    d.axes_ = axes;
    d.bound_ = *std::max_element(axes.begin(), axes.end());
    std::string list;
    for (std::size_t j = 0; j < axes.size(); ++j)
      list += (j ? "," : "") + trim_num(axes[j]);
    d.spec_ = "ellipsoid:a=" + list;
    return d;
  }

  static DomainModel perturbed_ball(double eps, int k, std::size_t n = 2) {
    require(eps >= 0.0 && eps <= 0.5 && k >= 1 && n >= 2,
            "perturbed-ball needs 0 <= eps <= 0.5, k >= 1, n >= 2");
    DomainModel d(DomainKind::PerturbedBall, n);
    d.eps_ = eps;
    d.k_ = k;
    // Outermost boundary point solves t^2 = 1 + eps t^k; fixed point iteration.
    double t = 1.0;
    for (int it = 0; it < 256; ++it) {
      double nt = std::sqrt(1.0 + eps * std::pow(t, k));
      if (std::abs(nt - t) < 1e-14) { t = nt; break; }
      t = nt;
    }
    require(std::isfinite(t) && t < 2.0, "perturbed-ball amplitude too large");
    d.bound_ = t;
    d.spec_ = "perturbed-ball:eps=" + trim_num(eps) + ",k=" + std::to_string(k) +
              (n != 2 ? ",n=" + std::to_string(n) : "");
    return d;
  }

  static DomainModel custom(std::vector<Monomial> poly, std::size_t n, double bound,
                            double collar_override = -1.0) {
    require(n >= 2 && bound > 0.0, "custom needs n >= 2 and a positive bounding radius");
    for (const Monomial& m : poly)
      require(m.exp.size() == 2 * n, "custom monomial exponent count must be 2n");
    DomainModel d(DomainKind::Custom, n);
    d.poly_ = std::move(poly);
    d.bound_ = bound;
    d.collar_override_ = collar_override;
    d.spec_ = "custom";
    return d;
  }

  // Affine image f(D) = { M z + b : z in base }. M must be invertible.
  static DomainModel transformed(const DomainModel& base, const CxMat& M, const CxVec& b) {
    require(M.n == base.dim() && b.size() == base.dim(), "affine map dimension mismatch");
    DomainModel d(DomainKind::Transformed, base.dim());
    d.base_ = std::make_shared<DomainModel>(base);
    d.M_ = M;
    d.b_ = b;
    d.Minv_ = invert(M);
    double mnorm = 0.0, bnorm = 0.0;
    for (const cplx& c : M.a) mnorm += std::norm(c);
    for (const cplx& c : b) bnorm += std::norm(c);
    d.bound_ = std::sqrt(mnorm) * base.bounding_radius() + std::sqrt(bnorm);
    d.spec_ = "transformed(" + base.spec_string() + ")";
    return d;
  }

  // Spec strings: ball:r=1  shell:R=4  ellipsoid:a=1,4
  //               perturbed-ball:eps=0.1,k=3  custom:<path>
  static DomainModel parse(const std::string& spec);

  // Copy with the complex Hessian masked; forces finite-difference fallbacks.
  DomainModel without_hessian() const {
    DomainModel d(*this);
    d.has_hessian_ = false;
    return d;
  }

  DomainKind kind() const { return kind_; }
  std::size_t dim() const { return n_; }
  double bounding_radius() const { return bound_; }
  double collar_width() const {
    return collar_override_ > 0.0 ? collar_override_ : 0.1 * bound_;
  }
  const std::string& spec_string() const { return spec_; }
  bool has_hessian() const { return has_hessian_; }
  double shell_R() const { return R_; }
  double ball_r() const { return r_; }
  const std::vector<double>& ellipsoid_axes() const { return axes_; }

  // Defining function, negative inside the domain.
  double s(const CxVec& z) const {
    switch (kind_) {
      case DomainKind::Ball:
        return norm2(z) - r_ * r_;
      case DomainKind::Shell: {
        double q = norm2(z);
        return std::max(1.0 - q, q - R_ * R_);
      }
      case DomainKind::Ellipsoid: {
        double v = -1.0;
        for (std::size_t j = 0; j < n_; ++j) v += std::norm(z[j]) / (axes_[j] * axes_[j]);
        return v;
      }
      case DomainKind::PerturbedBall:
        return norm2(z) - 1.0 + eps_ * std::pow(z[0], k_).real();
      case DomainKind::Custom:
        return poly_eval(to_real(z));
      case DomainKind::Transformed:
        return base_->s(pullback(z));
    }
    return 0.0;
  }

  bool inside(const CxVec& z) const { return s(z) < 0.0; }

  // Complex gradient (ds/dz_j).
  CxVec grad(const CxVec& z) const {
    CxVec g(n_);
    switch (kind_) {
      case DomainKind::Ball:
        for (std::size_t j = 0; j < n_; ++j) g[j] = std::conj(z[j]);
        return g;
      case DomainKind::Shell: {
        double sign = inner_branch(z) ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n_; ++j) g[j] = sign * std::conj(z[j]);
        return g;
      }
      case DomainKind::Ellipsoid:
        for (std::size_t j = 0; j < n_; ++j) g[j] = std::conj(z[j]) / (axes_[j] * axes_[j]);
        return g;
      case DomainKind::PerturbedBall:
        for (std::size_t j = 0; j < n_; ++j) g[j] = std::conj(z[j]);
        g[0] += 0.5 * eps_ * double(k_) * std::pow(z[0], k_ - 1);
        return g;
      case DomainKind::Custom: {
        std::vector<double> gr = poly_grad(to_real(z));
        for (std::size_t j = 0; j < n_; ++j) g[j] = 0.5 * cplx(gr[2 * j], -gr[2 * j + 1]);
        return g;
      }
      case DomainKind::Transformed: {
        CxVec gb = base_->grad(pullback(z));
        for (std::size_t j = 0; j < n_; ++j) {
          cplx acc = 0.0;
          for (std::size_t k = 0; k < n_; ++k) acc += gb[k] * Minv_.at(k, j);
          g[j] = acc;
        }
        return g;
      }
    }
    return g;
  }

  // Complex Hessian (d^2 s / dz_j dzbar_k), Hermitian.
  CxMat hess(const CxVec& z) const {
    if (!has_hessian_) fail(errc::hessian_unavailable, "complex Hessian masked");
    CxMat h(n_);
    switch (kind_) {
      case DomainKind::Ball:
        for (std::size_t j = 0; j < n_; ++j) h.at(j, j) = 1.0;
        return h;
      case DomainKind::Shell: {
        double sign = inner_branch(z) ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n_; ++j) h.at(j, j) = sign;
        return h;
      }
      case DomainKind::Ellipsoid:
        for (std::size_t j = 0; j < n_; ++j) h.at(j, j) = 1.0 / (axes_[j] * axes_[j]);
        return h;
      case DomainKind::PerturbedBall:
        // The pluriharmonic perturbation drops out of d dbar.
        for (std::size_t j = 0; j < n_; ++j) h.at(j, j) = 1.0;
        return h;
      case DomainKind::Custom: {
        RealMat hr = poly_hess(to_real(z));
        for (std::size_t j = 0; j < n_; ++j)
          for (std::size_t k = 0; k < n_; ++k) {
            double xx = hr.at(2 * j, 2 * k), yy = hr.at(2 * j + 1, 2 * k + 1);
            double xy = hr.at(2 * j, 2 * k + 1), yx = hr.at(2 * j + 1, 2 * k);
            h.at(j, k) = 0.25 * cplx(xx + yy, xy - yx);
          }
        return h;
      }
      case DomainKind::Transformed: {
        CxMat hb = base_->hess(pullback(z));
        for (std::size_t j = 0; j < n_; ++j)
          for (std::size_t l = 0; l < n_; ++l) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < n_; ++k)
              for (std::size_t m = 0; m < n_; ++m)
                acc += Minv_.at(k, j) * std::conj(Minv_.at(m, l)) * hb.at(k, m);
            h.at(j, l) = acc;
          }
        return h;
      }
    }
    return h;
  }

  // Gradient in interleaved real coordinates; equals 2 Re / -2 Im of grad().
  std::vector<double> real_grad(const CxVec& z) const {
    if (kind_ == DomainKind::Custom) return poly_grad(to_real(z));
    if (kind_ == DomainKind::Transformed) {
      std::vector<double> gb = base_->real_grad(pullback(z));
      return realify_tmul(Minv_, gb);
    }
    CxVec g = grad(z);
    std::vector<double> gr(2 * n_);
    for (std::size_t j = 0; j < n_; ++j) {
      gr[2 * j] = 2.0 * g[j].real();
      gr[2 * j + 1] = -2.0 * g[j].imag();
    }
    return gr;
  }

  // Full real Hessian in interleaved coordinates (used by Newton projection).
  RealMat real_hess(const CxVec& z) const {
    RealMat h(2 * n_);
    switch (kind_) {
      case DomainKind::Ball:
        for (std::size_t i = 0; i < 2 * n_; ++i) h.at(i, i) = 2.0;
        return h;
      case DomainKind::Shell: {
        double sign = inner_branch(z) ? -2.0 : 2.0;
        for (std::size_t i = 0; i < 2 * n_; ++i) h.at(i, i) = sign;
        return h;
      }
      case DomainKind::Ellipsoid:
        for (std::size_t j = 0; j < n_; ++j) {
          h.at(2 * j, 2 * j) = 2.0 / (axes_[j] * axes_[j]);
          h.at(2 * j + 1, 2 * j + 1) = 2.0 / (axes_[j] * axes_[j]);
        }
        return h;
      case DomainKind::PerturbedBall: {
        for (std::size_t i = 0; i < 2 * n_; ++i) h.at(i, i) = 2.0;
        if (k_ >= 2) {
          cplx w = std::pow(z[0], k_ - 2);
          double c = eps_ * double(k_) * double(k_ - 1);
          h.at(0, 0) += c * w.real();
          h.at(0, 1) += -c * w.imag();
          h.at(1, 0) += -c * w.imag();
          h.at(1, 1) += -c * w.real();
        }
        return h;
      }
      case DomainKind::Custom:
        return poly_hess(to_real(z));
      case DomainKind::Transformed: {
        RealMat hb = base_->real_hess(pullback(z));
        RealMat A = realify(Minv_);
        RealMat tmp(2 * n_), out(2 * n_);
        for (std::size_t i = 0; i < 2 * n_; ++i)
          for (std::size_t j = 0; j < 2 * n_; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 2 * n_; ++k) acc += hb.at(i, k) * A.at(k, j);
            tmp.at(i, j) = acc;
          }
        for (std::size_t i = 0; i < 2 * n_; ++i)
          for (std::size_t j = 0; j < 2 * n_; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 2 * n_; ++k) acc += A.at(k, i) * tmp.at(k, j);
            out.at(i, j) = acc;
          }
        return out;
      }
    }
    return h;
  }

  bool has_closed_frame() const {
    return kind_ == DomainKind::Ball || kind_ == DomainKind::Shell ||
           kind_ == DomainKind::Ellipsoid;
  }

  // Shell: true when the inner sphere branch of s is active.
  bool inner_branch(const CxVec& z) const {
    return norm2(z) <= 0.5 * (1.0 + R_ * R_);
  }

  CxVec push_forward(const CxVec& z) const {
    CxVec out(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      cplx acc = b_[j];
      for (std::size_t k = 0; k < n_; ++k) acc += M_.at(j, k) * z[k];
      out[j] = acc;
    }
    return out;
  }

  CxVec pullback(const CxVec& zeta) const {
    CxVec out(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n_; ++k) acc += Minv_.at(j, k) * (zeta[k] - b_[k]);
      out[j] = acc;
    }
    return out;
  }

  const DomainModel& base() const { return *base_; }

 private:
  DomainModel(DomainKind k, std::size_t n) : kind_(k), n_(n) {}

  static void require(bool ok, const std::string& what) {
    if (!ok) fail(errc::domain_parse, what);
  }

  static std::string trim_num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  }

  static CxMat invert(const CxMat& m) {
    std::size_t n = m.n;
    std::vector<cplx> a(m.a);
    CxMat inv(n);
    for (std::size_t j = 0; j < n; ++j) inv.at(j, j) = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < n; ++r)
        if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
      require(std::abs(a[piv * n + col]) > 1e-14, "affine map is singular");
      if (piv != col)
        for (std::size_t c = 0; c < n; ++c) {
          std::swap(a[piv * n + c], a[col * n + c]);
          std::swap(inv.at(piv, c), inv.at(col, c));
        }
      cplx d = a[col * n + col];
      for (std::size_t c = 0; c < n; ++c) {
        a[col * n + c] /= d;
        inv.at(col, c) /= d;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col) continue;
        cplx f = a[r * n + col];
        if (f == cplx(0.0)) continue;
        for (std::size_t c = 0; c < n; ++c) {
          a[r * n + c] -= f * a[col * n + c];
          inv.at(r, c) -= f * inv.at(col, c);
        }
      }
    }
    return inv;
  }

  static RealMat realify(const CxMat& m) {
    RealMat r(2 * m.n);
    for (std::size_t j = 0; j < m.n; ++j)
      for (std::size_t k = 0; k < m.n; ++k) {
        r.at(2 * j, 2 * k) = m.at(j, k).real();
        r.at(2 * j, 2 * k + 1) = -m.at(j, k).imag();
        r.at(2 * j + 1, 2 * k) = m.at(j, k).imag();
        r.at(2 * j + 1, 2 * k + 1) = m.at(j, k).real();
      }
    return r;
  }

  // transpose(realify(M)) * v
  static std::vector<double> realify_tmul(const CxMat& m, const std::vector<double>& v) {
    RealMat A = realify(m);
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t k = 0; k < v.size(); ++k) out[i] += A.at(k, i) * v[k];
    return out;
  }

  double poly_eval(const std::vector<double>& x) const {
    double v = 0.0;
    for (const Monomial& m : poly_) {
      double t = m.coef;
      for (std::size_t i = 0; i < x.size(); ++i)
        for (int e = 0; e < m.exp[i]; ++e) t *= x[i];
      v += t;
    }
    return v;
  }

  std::vector<double> poly_grad(const std::vector<double>& x) const {
    std::vector<double> g(x.size(), 0.0);
    for (const Monomial& m : poly_)
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (m.exp[i] == 0) continue;
        double t = m.coef * m.exp[i];
        for (std::size_t j = 0; j < x.size(); ++j) {
          int e = m.exp[j] - (j == i ? 1 : 0);
          for (int q = 0; q < e; ++q) t *= x[j];
        }
        g[i] += t;
      }
    return g;
  }

  RealMat poly_hess(const std::vector<double>& x) const {
    RealMat h(x.size());
    for (const Monomial& m : poly_)
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) {
          int fi = m.exp[i], fj = m.exp[j];
          if (i == j) {
            if (fi < 2) continue;
          } else if (fi < 1 || fj < 1) {
            continue;
          }
          double t = m.coef;
          t *= (i == j) ? double(fi) * double(fi - 1) : double(fi) * double(fj);
          for (std::size_t q = 0; q < x.size(); ++q) {
            int e = m.exp[q] - (q == i ? 1 : 0) - (q == j ? 1 : 0);
            for (int k = 0; k < e; ++k) t *= x[q];
          }
          h.at(i, j) += t;
        }
    return h;
  }

  DomainKind kind_;
  std::size_t n_;
  double bound_ = 1.0;
  double collar_override_ = -1.0;
  bool has_hessian_ = true;
  std::string spec_;

  double r_ = 1.0;               // ball
  double R_ = 4.0;               // shell
  std::vector<double> axes_;     // ellipsoid
  double eps_ = 0.0;             // perturbed ball
  int k_ = 2;                    // perturbed ball
  std::vector<Monomial> poly_;   // custom

  std::shared_ptr<DomainModel> base_;  // transformed
  CxMat M_, Minv_;
  CxVec b_;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_num(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(errc::domain_parse, std::string("bad number for ") + what + ": '" + s + "'");
  }
}

inline DomainModel load_custom_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::domain_parse, "cannot open coefficient file: " + path);
  std::size_t n = 0;
  double bound = 0.0, collar = -1.0;
  std::vector<Monomial> poly;
  std::string line;
  bool header_seen = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    if (!header_seen) {
      std::string kw;
      if (!(ls >> kw)) continue;
      if (kw != "dim")
        fail(errc::domain_parse, "coefficient file must start with 'dim n bound R'");
      std::string bkw;
      if (!(ls >> n >> bkw >> bound) || bkw != "bound" || n < 2 || bound <= 0.0)
        fail(errc::domain_parse, "bad header at line " + std::to_string(lineno));
      std::string ckw;
      if (ls >> ckw) {
        if (ckw != "collar" || !(ls >> collar) || collar <= 0.0)
          fail(errc::domain_parse, "bad collar in header");
      }
      header_seen = true;
      continue;
    }
    Monomial m;
    m.exp.resize(2 * n);
    bool any = false;
    for (std::size_t i = 0; i < 2 * n; ++i) {
      if (!(ls >> m.exp[i])) {
        if (i == 0) { any = false; break; }
        fail(errc::domain_parse, "short monomial line " + std::to_string(lineno));
      }
      if (m.exp[i] < 0) fail(errc::domain_parse, "negative exponent at line " + std::to_string(lineno));
      any = true;
    }
    if (!any) continue;
    if (!(ls >> m.coef))
      fail(errc::domain_parse, "missing coefficient at line " + std::to_string(lineno));
    poly.push_back(std::move(m));
  }
  if (!header_seen || poly.empty())
    fail(errc::domain_parse, "coefficient file has no usable content: " + path);
  return DomainModel::custom(std::move(poly), n, bound, collar);
}

}  // namespace detail

inline DomainModel DomainModel::parse(const std::string& spec) {
  std::size_t colon = spec.find(':');
  if (colon == std::string::npos) fail(errc::domain_parse, "expected kind:params in '" + spec + "'");
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "custom") return detail::load_custom_file(rest);

  double r = 0.0, R = 0.0, eps = -1.0;
  int k = -1;
  std::size_t n = 2;
  std::vector<double> axes;
  for (const std::string& item : detail::split(rest, ',')) {
    if (item.empty()) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      // continuation of an a= list
      if (!axes.empty()) {
        axes.push_back(detail::parse_num(item, "a"));
        continue;
      }
      fail(errc::domain_parse, "expected key=value in '" + item + "'");
    }
    std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "r") r = detail::parse_num(val, "r");
    else if (key == "R") R = detail::parse_num(val, "R");
    else if (key == "a") axes.push_back(detail::parse_num(val, "a"));
    else if (key == "eps") eps = detail::parse_num(val, "eps");
    else if (key == "k") k = int(detail::parse_num(val, "k"));
    else if (key == "n") n = std::size_t(detail::parse_num(val, "n"));
    else fail(errc::domain_parse, "unknown key '" + key + "' in domain spec");
  }
  if (kind == "ball") {
    if (r <= 0.0) fail(errc::domain_parse, "ball needs r=<positive>");
    return ball(r, n);
  }
  if (kind == "shell") {
    if (R <= 1.0) fail(errc::domain_parse, "shell needs R>1");
    return shell(R, n);
  }
  if (kind == "ellipsoid") {
    if (axes.size() < 2) fail(errc::domain_parse, "ellipsoid needs a=<list of n>=2 semi-axes>");
    return ellipsoid(axes);
  }
  if (kind == "perturbed-ball") {
    if (eps < 0.0 || k < 1) fail(errc::domain_parse, "perturbed-ball needs eps=..., k=...");
    return perturbed_ball(eps, k, n);
  }
  fail(errc::domain_parse, "unknown domain kind '" + kind + "'");
}

}  // namespace kdb
