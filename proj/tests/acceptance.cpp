// Acceptance gate: end-to-end checks of the two-sided distance estimates on
// the model domains, each printed as one PASS/FAIL line. Run with no
// arguments for the full gate or with `--only N` for a single check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "kdb/ball_math.hpp"
#include "kdb/envelope.hpp"
#include "kdb/estimators.hpp"
#include "kdb/experiment.hpp"
#include "kdb/metrics.hpp"
#include "kdb/quantities.hpp"
#include "kdb/rng.hpp"
#include "kdb/sampling.hpp"
#include "kdb/shell.hpp"

using namespace kdb;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

CxVec unit_dir(Rng& rng, std::size_t n) {
  std::vector<double> v(2 * n);
  double len2 = 0.0;
  for (double& x : v) {
    x = rng.normal();
    len2 += x * x;
  }
  CxVec u = from_real(v);
  return scaled(u, 1.0 / std::sqrt(len2));
}

struct Stream {
  EnvelopeAccumulator full, half;
  void add(double x, bool prefix) {
    full.add(x);
    if (prefix) half.add(x);
  }
  EnvelopeReport report(const std::string& name) const {
    EnvelopeReport e = fit_envelope(name, full);
    e.stable = envelope_stable(fit_envelope(name, half), e);
    return e;
  }
};

bool check_1_ball_sandwich() {
  const double start = now_s();
  DomainModel D = DomainModel::ball(1.0, 2);
  CxVec anchor{cplx(1.0, 0.0), cplx(0.0, 0.0)};
  CollarGraph graph(D, anchor, 2.2);

  Rng rng(0x5a5a1001);
  int lower_bad = 0, upper_bad = 0, gap_bad = 0;
  double worst_gap = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    double dz = std::pow(10.0, rng.uniform(-4.0, -1.0));
    double dw = std::pow(10.0, rng.uniform(-4.0, -1.0));
    CxVec z = scaled(unit_dir(rng, 2), 1.0 - dz);
    CxVec w = scaled(unit_dir(rng, 2), 1.0 - dw);
    double k = ball_distance(z, w);
    double lo = lower_bound_halflog(D, z, w).value;
    CollarGraph::Query q = graph.query(z, w);
    if (lo > k + 1e-9) ++lower_bad;
    if (k > q.fine + 1e-6) ++upper_bad;
    double gap = (q.fine - k) / k;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 0.10) ++gap_bad;
  }
  double elapsed = now_s() - start;
  bool ok = lower_bad == 0 && upper_bad == 0 && gap_bad == 0 && elapsed < 300.0;
  std::printf("[%s] 1 ball distance sandwich: %d pairs, %d lower / %d upper violations, "
              "worst mesh gap %.2e, %.1f s\n",
              ok ? "PASS" : "FAIL", n, lower_bad, upper_bad, worst_gap, elapsed);
  return ok;
}

bool check_2_growth_ratio_envelope() {
  ExperimentConfig cfg;
  cfg.domain = "ball:r=1";
  cfg.count = 10000;
  cfg.seed = 7;
  ExperimentReport rep = run_experiment(cfg);
  const EnvelopeReport* env = nullptr;
  for (const EnvelopeReport& e : rep.envelopes)
    if (e.name == "exp_ratio") env = &e;
  if (!env) {
    std::printf("[FAIL] 2 growth ratio envelope: statistic missing from the report\n");
    return false;
  }
  double spread = env->max / env->min;
  bool ok = env->min > 0.0 && spread < 100.0 && env->stable && env->count > 9000;
  std::printf("[%s] 2 growth ratio envelope: %zu samples, range [%.4f, %.4f], "
              "spread %.2f, %sstable\n",
              ok ? "PASS" : "FAIL", env->count, env->min, env->max, spread,
              env->stable ? "" : "NOT ");
  return ok;
}

bool check_3_reversal_factor() {
  int violations = 0, total = 0;
  double worst = 0.0;
  for (const DomainModel& D :
       {DomainModel::ball(1.0, 2), DomainModel::ellipsoid({1.0, 2.0})}) {
    CxVec probe(D.dim(), cplx(0.0));
    probe[0] = D.bounding_radius();
    CxVec foot = project_any(D, probe);
    double spread = 1.5 * D.collar_width();
    for (int i = 0; i < 5000; ++i) {
      SampledPair sp = sample_pair(D, foot, 1e-4, 1e-2, spread, 31, (std::uint64_t)i);
      PairRecord fwd = pair_record(D, 1.0, sp.z, sp.w);
      PairRecord rev = pair_record(D, 1.0, sp.w, sp.z);
      if (fwd.degenerate || fwd.A == 0.0) continue;
      double ratio = rev.A / fwd.A;
      worst = std::max(worst, ratio);
      if (ratio > 2.2) ++violations;
      ++total;
    }
  }
  bool ok = violations == 0 && total > 9000;
  std::printf("[%s] 3 reversal factor below 2.2: %d pairs, %d violations, worst %.4f\n",
              ok ? "PASS" : "FAIL", total, violations, worst);
  return ok;
}

bool check_4_hr_order_and_gauge_envelopes() {
  int hr_bad = 0;
  bool envelopes_ok = true;
  std::string detail;
  for (const DomainModel& D : {DomainModel::ball(1.0, 2), DomainModel::shell(4.0, 2)}) {
    CxVec probe(D.dim(), cplx(0.0));
    probe[0] = D.kind() == DomainKind::Shell ? 1.0 : D.bounding_radius();
    CxVec foot = project_any(D, probe);
    double spread = 1.5 * D.collar_width();
    Stream f_over_hr, hr_over_f;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      SampledPair sp = sample_pair(D, foot, 1e-4, 1e-1, spread, 47, (std::uint64_t)i);
      PairRecord rec = pair_record(D, 1.0, sp.z, sp.w);
      if (rec.degenerate) continue;
      if (rec.H_r > rec.H + 1e-15 * std::max(1.0, rec.H)) ++hr_bad;
      if (rec.H_r > 0.0 && rec.F > 0.0) {
        bool prefix = i < n / 2;
        f_over_hr.add(rec.F / rec.H_r, prefix);
        hr_over_f.add(rec.H_r / rec.F, prefix);
      }
    }
    EnvelopeReport ef = f_over_hr.report("F_over_Hr");
    EnvelopeReport eh = hr_over_f.report("Hr_over_F");
    bool finite = std::isfinite(ef.max) && std::isfinite(eh.max) && ef.min > 0.0 &&
                  eh.min > 0.0;
    envelopes_ok = envelopes_ok && finite && ef.stable && eh.stable;
    char buf[160];
    std::snprintf(buf, sizeof buf, " | %s F/Hr in [%.3f, %.3f]%s",
                  D.kind() == DomainKind::Shell ? "shell" : "ball", ef.min, ef.max,
                  ef.stable && eh.stable ? "" : " UNSTABLE");
    detail += buf;
  }
  bool ok = hr_bad == 0 && envelopes_ok;
  std::printf("[%s] 4 real-part bound ordering: %d violations%s\n", ok ? "PASS" : "FAIL",
              hr_bad, detail.c_str());
  return ok;
}

bool check_5_taylor_defect() {
  DomainModel D = DomainModel::ball(1.0, 2);
  C1Measurement m = measure_c1_constant(D, 0.09, 10000, 0xc0ffee, 0.1);
  bool ok = m.max_ratio <= 0.55 && m.used > 9000;
  std::printf("[%s] 5 distance taylor defect: %d pairs, max ratio %.6f (cap 0.55)\n",
              ok ? "PASS" : "FAIL", m.used, m.max_ratio);
  return ok;
}

bool check_6_path_bound_caps() {
  struct Setup {
    DomainModel D;
    int narrow, wide;
    DirDistOptions dd;
  };
  DirDistOptions coarse;
  coarse.max_angles = 1024;
  coarse.abs_tol = 1e-6;
  std::vector<Setup> setups;
  setups.push_back({DomainModel::ball(1.0, 2), 300, 300, {}});
  setups.push_back({DomainModel::ellipsoid({1.0, 2.0}), 300, 300, {}});
  setups.push_back({DomainModel::perturbed_ball(0.02, 3), 6, 6, coarse});

  int seg_bad = 0, lift_bad = 0, seg_n = 0, lift_n = 0, skipped = 0;
  for (const Setup& su : setups) {
    const DomainModel& D = su.D;
    CxVec probe(D.dim(), cplx(0.0));
    probe[0] = D.bounding_radius();
    CxVec foot = project_any(D, probe);
    double spread = 1.5 * D.collar_width();

    int got = 0;
    for (std::uint64_t i = 0; got < su.narrow && i < 40000; ++i) {
      SampledPair sp = sample_pair(D, foot, 1e-4, 1e-1, spread, 61, i);
      PairRecord rec = pair_record(D, 1.0, sp.z, sp.w);
      if (rec.degenerate || !rec.claim_a) continue;
      BoundResult r = upper_bound_segment(D, sp.z, sp.w, su.dd);
      if (r.value > 4.4 * rec.A) ++seg_bad;
      ++seg_n;
      ++got;
    }
    got = 0;
    for (std::uint64_t i = 0; got < su.wide && i < 40000; ++i) {
      SampledPair sp = sample_pair(D, foot, 1e-4, 1e-2, spread, 67, i);
      PairRecord rec = pair_record(D, 1.0, sp.z, sp.w);
      if (rec.degenerate || rec.claim_a) continue;
      try {
        BoundResult r = upper_bound_normal_lift(D, sp.z, sp.w, su.dd);
        if (r.value > std::log(rec.A) + 10.5) ++lift_bad;
        ++lift_n;
        ++got;
      } catch (const Error& e) {
        if (e.code() == errc::lift_exits_domain) { ++skipped; continue; }
        throw;
      }
    }
  }
  bool ok = seg_bad == 0 && lift_bad == 0 && seg_n >= 600 && lift_n >= 600;
  std::printf("[%s] 6 path construction caps: %d narrow (%d over 4.4A), %d wide "
              "(%d over logA+10.5), %d lifts skipped\n",
              ok ? "PASS" : "FAIL", seg_n, seg_bad, lift_n, lift_bad, skipped);
  return ok;
}

bool check_7_shell_lift_envelope() {
  DomainModel S = DomainModel::shell(4.0, 2);
  const double c0 = 1e-2;
  // beta axis scales with the gate cap sqrt(c0 |eta|); multiplier 2 puts the
  // cell outside the gate, the rest inside, so both regimes are scanned.
  const double smul[] = {0.0, 0.5, 1.0, 2.0};
  int f_bad = 0, gate_cells = 0, off_cells = 0;
  double worst_f_over_lift = 0.0;
  auto run = [&](int n) {
    EnvelopeAccumulator acc;
    for (int a = 0; a < n; ++a) {
      double e = 1e-3 * std::pow(50.0, a / double(n - 1));
      for (int b = 0; b < n; ++b) {
        double h = 1e-3 * std::pow(300.0, b / double(n - 1));
        for (double s : smul) {
          double beta = s * std::sqrt(c0 * h);
          ShellPair sp{e, e, h, beta, 4.0};
          validate_shell_pair(sp);
          if (beta * beta <= c0 * h) ++gate_cells; else ++off_cells;
          CxVec z = shell_z(sp), w = shell_w(sp);
          PairRecord rec = pair_record(S, 1.0, z, w);
          BoundResult lift = upper_bound_normal_lift(S, z, w, {}, false);
          acc.add(lift.value / rec.H);
          double F = lower_bound_F(S, z, w, 1.0).value;
          worst_f_over_lift = std::max(worst_f_over_lift, F / lift.value);
          if (F > lift.value + 1e-12) ++f_bad;
        }
      }
    }
    return fit_envelope("lift_over_H", acc);
  };
  // refinement doubles the grid density over the same parameter box; the base
  // must already resolve the steep small-eta edge or the tail quantile drifts
  EnvelopeReport coarse = run(23);
  EnvelopeReport fine = run(45);
  bool stable = envelope_stable(coarse, fine);
  bool ok = std::isfinite(fine.max) && fine.min > 0.0 && stable && f_bad == 0;
  std::printf("[%s] 7 shell lift envelope: %zu+%zu cells (%d gate / %d off-gate), "
              "lift/H in [%.3f, %.3f], %sstable, %d gauge violations, max F/lift %.3f\n",
              ok ? "PASS" : "FAIL", coarse.count, fine.count, gate_cells, off_cells,
              fine.min, fine.max, stable ? "" : "NOT ", f_bad, worst_f_over_lift);
  return ok;
}

bool check_8_rotation_regime_envelope() {
  const double c0 = 1e-2;
  EnvelopeAccumulator acc;
  int off_gate = 0;
  for (int a = 0; a < 25; ++a) {
    double e = 1e-4 * std::pow(500.0, a / 24.0);
    for (int b = 0; b < 25; ++b) {
      double h = 1e-3 * std::pow(300.0, b / 24.0);
      for (int c = 0; c < 16; ++c) {
        double beta = (c / 15.0) * 0.99 * std::sqrt(c0 * h);
        ShellPair sp{e, e, h, beta, 4.0};
        ShellRegime reg = shell_H_asymptotics(sp, c0);
        if (!reg.gate) {
          ++off_gate;
          continue;
        }
        acc.add(reg.ratio);
      }
    }
  }
  EnvelopeReport env = fit_envelope("H_over_surrogate", acc);
  double spread = env.max / env.min;
  bool ok = off_gate == 0 && env.count == 10000 && env.min > 0.0 && spread < 100.0;
  std::printf("[%s] 8 rotation regime envelope: %zu cells, H/surrogate in [%.4f, %.4f], "
              "spread %.2f, %d off-gate\n",
              ok ? "PASS" : "FAIL", env.count, env.min, env.max, spread, off_gate);
  return ok;
}

bool check_9_normal_segment_budget() {
  DomainModel D = DomainModel::ball(1.0, 2);
  MetricModel F = model_metric("finsler-F", 1.0, PsiSpec{1.0, 0.5});
  MetricModel G = model_metric("finsler-G", 1.0, PsiSpec{1.0, 0.5});

  Rng rng(0x9d);
  int seg_bad = 0;
  double worst_margin = -1e9;
  for (int i = 0; i < 100; ++i) {
    CxVec foot = unit_dir(rng, 2);
    CxVec n = scaled(foot, -1.0);  // inward normal of the unit sphere
    double d0 = std::pow(10.0, rng.uniform(-4.0, -1.0));
    double d1 = std::pow(10.0, rng.uniform(-4.0, -1.0));
    CxVec z = foot, zp = foot;
    axpy(foot, d0, n, z);
    axpy(foot, d1, n, zp);
    double value = integrate_metric(D, F, {z, zp}).value;
    double budget = std::abs(0.5 * std::log(d1 / d0)) + 1.0 + 1e-3;
    worst_margin = std::max(worst_margin, value - budget);
    if (value > budget) ++seg_bad;
  }

  int order_bad = 0;
  for (int i = 0; i < 10000; ++i) {
    double d = std::pow(10.0, rng.uniform(-4.0, -1.0));
    CxVec z = scaled(unit_dir(rng, 2), 1.0 - d);
    CxVec X = unit_dir(rng, 2);
    if (metric_eval(D, G, z, X) > metric_eval(D, F, z, X) * (1.0 + 1e-14)) ++order_bad;
  }
  bool ok = seg_bad == 0 && order_bad == 0;
  std::printf("[%s] 9 finsler segment budget: %d segment violations (worst margin %.2e), "
              "%d max-vs-sum violations\n",
              ok ? "PASS" : "FAIL", seg_bad, worst_margin, order_bad);
  return ok;
}

bool check_10_levi_classification() {
  Rng rng(0xfeed);
  int bad = 0;
  DomainModel B = DomainModel::ball(1.0, 2);
  DomainModel E = DomainModel::ellipsoid({1.0, 2.0});
  DomainModel S = DomainModel::shell(4.0, 2);
  for (int i = 0; i < 100; ++i) {
    CxVec u = unit_dir(rng, 2);
    if (levi_classify(B, scaled(u, 0.99)).cls != "strongly-pseudoconvex") ++bad;

    CxVec v = unit_dir(rng, 2);
    CxVec e{v[0] * 1.0, v[1] * 2.0};  // stretch onto the ellipsoid scale
    if (levi_classify(E, scaled(e, 0.99)).cls != "strongly-pseudoconvex") ++bad;

    CxVec s = scaled(unit_dir(rng, 2), 1.1);  // nearest wall is the inner sphere
    if (levi_classify(S, s).cls != "not-pseudoconvex") ++bad;
  }
  bool ok = bad == 0;
  std::printf("[%s] 10 boundary classification: 300 points, %d misclassified\n",
              ok ? "PASS" : "FAIL", bad);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
  }
  bool (*checks[])() = {
      check_1_ball_sandwich,     check_2_growth_ratio_envelope,
      check_3_reversal_factor,   check_4_hr_order_and_gauge_envelopes,
      check_5_taylor_defect,     check_6_path_bound_caps,
      check_7_shell_lift_envelope, check_8_rotation_regime_envelope,
      check_9_normal_segment_budget, check_10_levi_classification,
  };
  int failures = 0;
  for (int n = 1; n <= 10; ++n) {
    if (only != 0 && only != n) continue;
    try {
      if (!checks[n - 1]()) ++failures;
    } catch (const std::exception& ex) {
      std::printf("[FAIL] %d raised: %s\n", n, ex.what());
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
