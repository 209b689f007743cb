#pragma once

#include <cmath>
#include <vector>

#include "kdb/complex_vec.hpp"
#include "kdb/error.hpp"

namespace kdb {

// Closed-form invariant geometry of the round ball B(0, r). Used as the exact
// reference metric on ball domains and as an oracle everywhere else.

namespace detail {

inline double atanh_safe(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) fail(errc::outside_ball, "argument reached the boundary value 1");
  return 0.5 * std::log((1.0 + s) / (1.0 - s));
}

}  // namespace detail

// Mobius involution of the unit ball exchanging a and 0.
inline CxVec mobius(const CxVec& a, const CxVec& z) {
  double a2 = norm2(a);
  if (a2 >= 1.0) fail(errc::outside_ball, "mobius base point must lie in the unit ball");
  if (a2 == 0.0) return scaled(z, -1.0);
  cplx za = hdot(z, a);
  double s = std::sqrt(1.0 - a2);
  CxVec proj = scaled(a, za / a2);       // component of z along a
  CxVec perp = sub(z, proj);
  CxVec num = sub(sub(a, proj), scaled(perp, s));
  cplx den = 1.0 - za;
  return scaled(num, 1.0 / den);
}

// Invariant distance of B(0, r).
inline double ball_distance(const CxVec& z, const CxVec& w, double r = 1.0) {
  CxVec u = scaled(z, 1.0 / r), v = scaled(w, 1.0 / r);
  double u2 = norm2(u), v2 = norm2(v);
  if (u2 >= 1.0 || v2 >= 1.0) fail(errc::outside_ball, "points must lie inside the ball");
  double den = std::norm(cplx(1.0) - hdot(u, v));
  double arg = 1.0 - (1.0 - u2) * (1.0 - v2) / den;
  if (arg < 0.0) arg = 0.0;
  return detail::atanh_safe(std::sqrt(arg));
}

// Infinitesimal invariant metric of B(0, r).
inline double ball_metric(const CxVec& z, const CxVec& X, double r = 1.0) {
  CxVec u = scaled(z, 1.0 / r), Y = scaled(X, 1.0 / r);
  double u2 = norm2(u);
  if (u2 >= 1.0) fail(errc::outside_ball, "base point must lie inside the ball");
  double d = 1.0 - u2;
  return std::sqrt(norm2(Y) * d + std::norm(hdot(Y, u))) / d;
}

// Points on the invariant geodesic from z to w at the given distance
// fractions (0 -> z, 1 -> w).
inline std::vector<CxVec> ball_geodesic(const CxVec& z, const CxVec& w,
                                        const std::vector<double>& fractions,
                                        double r = 1.0) {
  CxVec u = scaled(z, 1.0 / r);
  CxVec v = mobius(u, scaled(w, 1.0 / r));
  double vn = norm(v);
  std::vector<CxVec> out;
  out.reserve(fractions.size());
  if (vn < 1e-300) {
    for (std::size_t i = 0; i < fractions.size(); ++i) out.push_back(z);
    return out;
  }
  CxVec dir = scaled(v, 1.0 / vn);
  double total = detail::atanh_safe(vn);
  for (double f : fractions) {
    double t = std::tanh(f * total);
    out.push_back(scaled(mobius(u, scaled(dir, t)), r));
  }
  return out;
}

}  // namespace kdb
