#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kdb/error.hpp"

namespace kdb {

struct EnvelopeReport {
  std::string name;
  double min = 0.0, max = 0.0;
  double p01 = 0.0, p50 = 0.0, p99 = 0.0;
  std::size_t count = 0;
  bool stable = false;
};

// Keeps raw samples so that merging partial accumulators from parallel
// workers reproduces the single-worker result exactly.
struct EnvelopeAccumulator {
  std::vector<double> samples;

  void add(double x) { samples.push_back(x); }

  void merge(const EnvelopeAccumulator& other) {
    samples.insert(samples.end(), other.samples.begin(), other.samples.end());
  }
};

// Nearest-rank percentiles over the sample stream.
inline EnvelopeReport fit_envelope(const std::string& name, std::vector<double> samples) {
  if (samples.empty()) fail(errc::empty_stream, "envelope over zero samples: " + name);
  std::sort(samples.begin(), samples.end());
  auto rank = [&](double p) {
    std::size_t r = (std::size_t)std::ceil(p / 100.0 * double(samples.size()));
    if (r == 0) r = 1;
    return samples[r - 1];
  };
  EnvelopeReport rep;
  rep.name = name;
  rep.count = samples.size();
  rep.min = samples.front();
  rep.max = samples.back();
  rep.p01 = rank(1.0);
  rep.p50 = rank(50.0);
  rep.p99 = rank(99.0);
  return rep;
}

inline EnvelopeReport fit_envelope(const std::string& name, const EnvelopeAccumulator& acc) {
  return fit_envelope(name, acc.samples);
}

// Refinement stability of the doubled-sample envelope against the base run:
// each percentile moved by at most `tol` relative to the doubled value.
inline bool envelope_stable(const EnvelopeReport& base, const EnvelopeReport& doubled,
                            double tol = 0.10) {
  auto near = [&](double a, double b) {
    double scale = std::max({std::abs(a), std::abs(b), 1e-12});
    return std::abs(a - b) <= tol * scale;
  };
  return near(base.p01, doubled.p01) && near(base.p50, doubled.p50) &&
         near(base.p99, doubled.p99);
}

}  // namespace kdb
