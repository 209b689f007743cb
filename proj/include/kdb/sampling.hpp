#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "kdb/geometry.hpp"
#include "kdb/rng.hpp"

namespace kdb {

struct SampledPair {
  CxVec z, w;
  double target_A = 0.0;
  int stratum = 0;     // A decade, 10^{stratum-2} .. 10^{stratum-1}
  bool radial = false; // w on the same inward normal as z
};

namespace detail {

// random unit vector in the realified tangent space at a boundary foot
inline std::vector<double> tangent_direction(const DomainModel& D, const CxVec& foot,
                                             Rng& rng) {
  std::vector<double> nrm = to_real(inward_normal_at(D, foot));
  const std::size_t m = nrm.size();
  std::vector<double> v(m);
  for (int tries = 0; tries < 16; ++tries) {
    double dot = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      v[j] = rng.normal();
      dot += v[j] * nrm[j];
    }
    double len2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      v[j] -= dot * nrm[j];
      len2 += v[j] * v[j];
    }
    if (len2 > 1e-12) {
      double inv = 1.0 / std::sqrt(len2);
      for (double& x : v) x *= inv;
      return v;
    }
  }
  fail(errc::degenerate_sampling, "no tangent direction at boundary foot");
}

inline CxVec offset_point(const CxVec& base, const std::vector<double>& dir, double len) {
  std::vector<double> x = to_real(base);
  for (std::size_t j = 0; j < x.size(); ++j) x[j] += len * dir[j];
  return from_real(x);
}

}  // namespace detail

// Deterministic sample #i of a run: a collar pair aimed at a target A decade.
// Depths are log-uniform; the tangential separation is inverted from
// A sqrt(delta_z delta_w) ~ l^2 + l sqrt(delta_z). Indices cycle through the
// four decades of A in [1e-2, 1e2), so every regime keeps at least a quarter
// of the stream.
inline SampledPair sample_pair(const DomainModel& D, const CxVec& anchor_foot,
                               double delta_min, double delta_max, double spread,
                               std::uint64_t seed, std::uint64_t i) {
  Rng rng = Rng::for_index(seed, i);
  SampledPair out;
  out.stratum = int(i % 4);
  out.target_A = std::pow(10.0, double(out.stratum) - 2.0 + rng.uniform());

  double dz = rng.log_uniform(delta_min, delta_max);
  std::vector<double> drift = detail::tangent_direction(D, anchor_foot, rng);
  CxVec near_b = detail::offset_point(anchor_foot, drift, spread * rng.uniform());
  CxVec foot_z = project_any(D, near_b);
  CxVec nz = inward_normal_at(D, foot_z);
  out.z = foot_z;
  axpy(foot_z, dz, nz, out.z);

  out.radial = rng.uniform() < 0.3;
  if (out.radial) {
    double x = 0.5 * (out.target_A + std::sqrt(out.target_A * out.target_A + 4.0));
    double dw = std::min(dz * x * x, delta_max);
    out.w = foot_z;
    axpy(foot_z, dw, nz, out.w);
  } else {
    double dw = std::min(dz * rng.log_uniform(1.0, 2.0), delta_max);
    double l = 0.5 * (-std::sqrt(dz) +
                      std::sqrt(dz + 4.0 * out.target_A * std::sqrt(dz * dw)));
    l = std::min(l, spread);
    std::vector<double> tau = detail::tangent_direction(D, foot_z, rng);
    for (int shrink = 0; shrink < 48; ++shrink) {
      CxVec foot_w = project_any(D, detail::offset_point(foot_z, tau, l));
      CxVec nw = inward_normal_at(D, foot_w);
      out.w = foot_w;
      axpy(foot_w, dw, nw, out.w);
      if (D.inside(out.w) && dist2(out.z, out.w) > 0.0) break;
      l *= 0.5;
    }
  }
  if (!D.inside(out.z) || !D.inside(out.w))
    fail(errc::degenerate_sampling, "sampled pair left the domain");
  return out;
}

}  // namespace kdb
