#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace kdb {

using cplx = std::complex<double>;

// Point of C^n or tangent vector at one; n is small (2..4 in practice).
using CxVec = std::vector<cplx>;

inline CxVec cx(std::initializer_list<cplx> v) { return CxVec(v); }

// Hermitian product, conjugate-linear in the second slot: sum_j a_j conj(b_j).
inline cplx hdot(const CxVec& a, const CxVec& b) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * std::conj(b[j]);
  return s;
}

inline double norm2(const CxVec& a) {
  double s = 0.0;
  for (const cplx& c : a) s += std::norm(c);
  return s;
}

inline double norm(const CxVec& a) { return std::sqrt(norm2(a)); }

inline CxVec add(const CxVec& a, const CxVec& b) {
  CxVec r(a);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] += b[j];
  return r;
}

inline CxVec sub(const CxVec& a, const CxVec& b) {
  CxVec r(a);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] -= b[j];
  return r;
}

inline CxVec scaled(const CxVec& a, cplx t) {
  CxVec r(a);
  for (cplx& c : r) c *= t;
  return r;
}

// a + t*b into out, allocation-free for hot loops.
inline void axpy(const CxVec& a, cplx t, const CxVec& b, CxVec& out) {
  out.resize(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + t * b[j];
}

inline double dist2(const CxVec& a, const CxVec& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a[j] - b[j]);
  return s;
}

inline double dist(const CxVec& a, const CxVec& b) { return std::sqrt(dist2(a, b)); }

inline CxVec normalized(const CxVec& a) {
  double n = norm(a);
  CxVec r(a);
  if (n > 0.0)
    for (cplx& c : r) c /= n;
  return r;
}

// Real coordinates interleaved as (Re z_1, Im z_1, ..., Re z_n, Im z_n).
inline std::vector<double> to_real(const CxVec& z) {
  std::vector<double> x(2 * z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

inline CxVec from_real(const std::vector<double>& x) {
  CxVec z(x.size() / 2);
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = cplx(x[2 * j], x[2 * j + 1]);
  return z;
}

// Real-bilinear dot of the underlying R^{2n} vectors, equals Re hdot(a, b).
inline double rdot(const CxVec& a, const CxVec& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    s += a[j].real() * b[j].real() + a[j].imag() * b[j].imag();
  return s;
}

}  // namespace kdb
