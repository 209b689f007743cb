#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <queue>
#include <string>
#include <vector>

#include "kdb/ball_math.hpp"
#include "kdb/kdtree.hpp"
#include "kdb/metrics.hpp"
#include "kdb/parallel.hpp"
#include "kdb/quantities.hpp"

namespace kdb {

struct BoundResult {
  double value = 0.0;
  bool upper = true;
  std::string method;
  // closed-form caps reported alongside the numeric value
  double cap = std::numeric_limits<double>::quiet_NaN();      // 4A or log A + 10
  double cap_alt = std::numeric_limits<double>::quiet_NaN();  // sqrt(B) track
  double coarse = std::numeric_limits<double>::quiet_NaN();   // graph, coarse mesh
  // conservatism notes
  double worst_delta = std::numeric_limits<double>::infinity();
  std::size_t metric_evals = 0;
  std::size_t mesh_nodes = 0;
  int angle_samples = 0;
  bool heuristic = false;
};

// Straight-segment bound, valid in the regime 2B <= sqrt(delta_z delta_w).
inline BoundResult upper_bound_segment(const DomainModel& D, const CxVec& z,
                                       const CxVec& w, const DirDistOptions& dd = {}) {
  BoundResult r;
  r.method = "segment";
  if (dist2(z, w) == 0.0) return r;
  PairRecord rec = pair_record(D, 1.0, z, w);
  if (!rec.claim_a)
    fail(errc::regime_mismatch, "segment bound requires 2B <= sqrt(delta_z delta_w)");
  MetricModel M;
  M.dd = dd;
  PathIntegral pi = integrate_metric(D, M, {z, w});
  r.value = pi.value;
  r.cap = 4.0 * rec.A;
  r.worst_delta = pi.worst_delta;
  r.metric_evals = pi.evals;
  r.angle_samples = dd.initial_angles;
  return r;
}

// Three-leg bound through lifted points z' = pi(z) + 3B n, w' = pi(w) + 3B n.
// Valid in the complementary regimes (2B > sqrt(delta_z delta_w), or
// 2B > delta_z for the concave track); strict = false skips the regime check
// for scan use.
inline BoundResult upper_bound_normal_lift(const DomainModel& D, const CxVec& z,
                                           const CxVec& w, const DirDistOptions& dd = {},
                                           bool strict = true) {
  BoundResult r;
  r.method = "normal-lift";
  if (dist2(z, w) == 0.0) return r;
  PairRecord rec = pair_record(D, 1.0, z, w);
  if (strict && rec.claim_a && rec.concave_a)
    fail(errc::regime_mismatch, "lift bound requires 2B above the segment-regime gate");
  BoundaryFrame fz = boundary_frame(D, z);
  BoundaryFrame fw = boundary_frame(D, w);
  double h = 3.0 * rec.B;
  CxVec zp = fz.foot, wp = fw.foot;
  axpy(fz.foot, h, fz.normal, zp);
  axpy(fw.foot, h, fw.normal, wp);
  if (!D.inside(zp) || !D.inside(wp))
    fail(errc::lift_exits_domain, "lift height 3B leaves the domain");
  MetricModel M;
  M.dd = dd;
  PathIntegral a = integrate_metric(D, M, {z, zp});
  PathIntegral b = integrate_metric(D, M, {zp, wp});
  PathIntegral c = integrate_metric(D, M, {wp, w});
  r.value = a.value + b.value + c.value;
  r.cap = std::log(rec.A) + 10.0;
  r.cap_alt = std::sqrt(rec.B);
  r.worst_delta = std::min({a.worst_delta, b.worst_delta, c.worst_delta});
  r.metric_evals = a.evals + b.evals + c.evals;
  r.angle_samples = dd.initial_angles;
  return r;
}

struct GraphOptions {
  std::size_t nodes = 2000;  // coarse cloud size; fine mesh uses 4x
  std::size_t neighbors = 12;
  std::uint64_t seed = 1;
  double reach = 0.0;  // tube half-width; 0 = derive from the query pair
  DirDistOptions dd{};
};

// Shortest-path upper bound on a point cloud filling the collar tube around
// an anchor. The fine mesh extends the coarse cloud (same low-discrepancy
// sequence) and keeps every coarse edge, so refinement never increases the
// value. Edge weights are exact ball distances on ball domains and
// inscribed-disc metric integrals elsewhere; both satisfy the triangle
// inequality against k, so any path gives a valid upper bound.
class CollarGraph {
 public:
  CollarGraph(const DomainModel& D, const CxVec& anchor, double reach,
              const GraphOptions& opts = {})
      : D_(D), opts_(opts), reach_(reach) {
    foot_ = project_any(D, anchor);
    build();
  }

  struct Query {
    double coarse = std::numeric_limits<double>::infinity();
    double fine = std::numeric_limits<double>::infinity();
    std::size_t nodes = 0;
  };

  Query query(const CxVec& z, const CxVec& w) const {
    Query q;
    if (dist2(z, w) == 0.0) {
      q.coarse = q.fine = 0.0;
      q.nodes = nodes_.size();
      return q;
    }
    std::vector<CxVec> ext = extension_nodes(z, w);
    q.coarse = solve(ext, coarse_count_, adj_coarse_);
    q.fine = solve(ext, nodes_.size(), adj_fine_);
    q.nodes = nodes_.size() + ext.size();
    if (!std::isfinite(q.fine))
      fail(errc::disconnected_graph, "no in-domain path through the point cloud");
    return q;
  }

  std::size_t cloud_size() const { return nodes_.size(); }

 private:
  using Adj = std::vector<std::vector<std::pair<std::uint32_t, double>>>;

  bool segment_inside(const CxVec& a, const CxVec& b) const {
    // 17 interior probes; endpoints are known nodes
    CxVec d = sub(b, a);
    for (int i = 1; i <= 17; ++i) {
      CxVec p = a;
      axpy(a, double(i) / 18.0, d, p);
      if (!D_.inside(p)) return false;
    }
    return true;
  }

  double edge_weight(const CxVec& a, const CxVec& b) const {
    if (D_.kind() == DomainKind::Ball) return ball_distance(a, b, D_.ball_r());
    MetricModel M;
    M.dd = opts_.dd;
    return integrate_metric(D_, M, {a, b}, 1e-6, std::size_t(1) << 10).value;
  }

  void build() {
    const std::size_t n = D_.dim(), nr = 2 * n;
    const std::size_t coarse = opts_.nodes, fine = 4 * opts_.nodes;
    nodes_.reserve(fine);
    std::size_t offset = opts_.seed * 7919;  // deterministic sequence offset
    std::size_t attempts = 0, cap = 400 * fine;
    while (nodes_.size() < fine && attempts < cap) {
      ++attempts;
      std::vector<double> x = halton(offset + attempts, nr);
      for (std::size_t j = 0; j < nr; ++j)
        x[j] = foot_real(j) + (2.0 * x[j] - 1.0) * reach_;
      CxVec q = from_real(x);
      if (!D_.inside(q)) continue;
      if (-signed_distance(D_, q) > reach_) continue;
      nodes_.push_back(q);
    }
    coarse_count_ = std::min(coarse, nodes_.size());
    if (nodes_.size() < opts_.neighbors + 2)
      fail(errc::degenerate_sampling, "collar tube sampling starved");

    flat_.resize(nodes_.size() * nr);
    for (std::size_t a = 0; a < nodes_.size(); ++a) {
      std::vector<double> x = to_real(nodes_[a]);
      std::copy(x.begin(), x.end(), flat_.begin() + a * nr);
    }
    tree_coarse_ = std::make_unique<KdTree>(
        std::vector<double>(flat_.begin(), flat_.begin() + coarse_count_ * nr), nr);
    tree_fine_ = std::make_unique<KdTree>(flat_, nr);

    adj_coarse_ = knn_edges(*tree_coarse_, coarse_count_);
    adj_fine_ = knn_edges(*tree_fine_, nodes_.size());
    // carry every coarse edge into the fine graph: refinement stays monotone
    for (std::size_t a = 0; a < coarse_count_; ++a)
      for (auto& e : adj_coarse_[a]) add_edge(adj_fine_, a, e.first, e.second);
  }

  Adj knn_edges(const KdTree& tree, std::size_t count) const {
    const std::size_t nr = 2 * D_.dim();
    Adj adj(count);
    std::vector<std::vector<std::pair<std::uint32_t, double>>> found(count);
    parallel_for(count, [&](std::size_t a) {
      auto ids = tree.knn(flat_.data() + a * nr, opts_.neighbors + 1);
      for (std::size_t b : ids) {
        if (b == a || b > a) continue;  // each unordered pair once, from the larger index
        if (!segment_inside(nodes_[a], nodes_[b])) continue;
        found[a].push_back({(std::uint32_t)b, edge_weight(nodes_[a], nodes_[b])});
      }
    });
    for (std::size_t a = 0; a < count; ++a)
      for (auto& e : found[a]) add_edge(adj, a, e.first, e.second);
    return adj;
  }

  static void add_edge(Adj& adj, std::size_t a, std::size_t b, double wgt) {
    for (auto& e : adj[a])
      if (e.first == b) {
        e.second = std::min(e.second, wgt);
        for (auto& r : adj[b])
          if (r.first == a) r.second = e.second;
        return;
      }
    adj[a].push_back({(std::uint32_t)b, wgt});
    adj[b].push_back({(std::uint32_t)a, wgt});
  }

  double foot_real(std::size_t j) const {
    return j % 2 == 0 ? foot_[j / 2].real() : foot_[j / 2].imag();
  }

  // pair-specific nodes: endpoints, normal ladders, and (on balls) a chain
  // along the exact geodesic
  std::vector<CxVec> extension_nodes(const CxVec& z, const CxVec& w) const {
    std::vector<CxVec> ext{z, w};
    for (const CxVec* q : {&z, &w}) {
      CxVec foot = project_any(D_, *q);
      CxVec nrm = inward_normal_at(D_, foot);
      double d = dist(*q, foot);
      for (double h = 2.0 * d; h <= reach_; h *= 2.0) {
        CxVec node = foot;
        axpy(foot, h, nrm, node);
        if (D_.inside(node)) ext.push_back(node);
      }
    }
    if (D_.kind() == DomainKind::Ball) {
      std::vector<double> fr(31);
      for (int j = 0; j < 31; ++j) fr[j] = double(j + 1) / 32.0;
      for (CxVec& g : ball_geodesic(z, w, fr, D_.ball_r())) ext.push_back(std::move(g));
    }
    return ext;
  }

  // Dijkstra over static nodes [0, count) + extensions appended after them;
  // source = first extension (z), target = second (w)
  double solve(const std::vector<CxVec>& ext, std::size_t count, const Adj& adj) const {
    const KdTree& tree = count == coarse_count_ ? *tree_coarse_ : *tree_fine_;
    std::size_t total = count + ext.size();
    Adj dyn(ext.size());                   // outgoing lists of extension nodes
    std::vector<std::vector<std::pair<std::uint32_t, double>>> to_ext(count);
    auto link = [&](std::size_t e, std::size_t u, double wgt) {
      dyn[e].push_back({(std::uint32_t)u, wgt});
      if (u < count)
        to_ext[u].push_back({(std::uint32_t)(count + e), wgt});
      else
        dyn[u - count].push_back({(std::uint32_t)(count + e), wgt});
    };
    for (std::size_t e = 0; e < ext.size(); ++e) {
      std::vector<double> x = to_real(ext[e]);
      for (std::size_t b : tree.knn(x.data(), opts_.neighbors)) {
        if (!segment_inside(ext[e], nodes_[b])) continue;
        link(e, b, edge_weight(ext[e], nodes_[b]));
      }
      for (std::size_t e2 = 0; e2 < e; ++e2) {
        // chain/ladder nodes are few; link all mutually visible pairs
        if (!segment_inside(ext[e], ext[e2])) continue;
        link(e, count + e2, edge_weight(ext[e], ext[e2]));
      }
    }
    std::vector<double> dist(total, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[count] = 0.0;  // ext[0] == z
    pq.push({0.0, (std::uint32_t)count});
    auto relax = [&](double dv, std::size_t u, double wgt) {
      if (dv + wgt < dist[u]) {
        dist[u] = dv + wgt;
        pq.push({dist[u], (std::uint32_t)u});
      }
    };
    while (!pq.empty()) {
      auto [dv, v] = pq.top();
      pq.pop();
      if (dv > dist[v]) continue;
      if (v == count + 1) break;  // ext[1] == w
      if (v < count) {
        for (auto& e : adj[v]) relax(dv, e.first, e.second);
        for (auto& e : to_ext[v]) relax(dv, e.first, e.second);
      } else {
        for (auto& e : dyn[v - count]) relax(dv, e.first, e.second);
      }
    }
    return dist[count + 1];
  }

  const DomainModel& D_;
  GraphOptions opts_;
  double reach_;
  CxVec foot_;
  std::vector<CxVec> nodes_;
  std::vector<double> flat_;
  std::size_t coarse_count_ = 0;
  std::unique_ptr<KdTree> tree_coarse_, tree_fine_;
  Adj adj_coarse_, adj_fine_;
};

inline BoundResult upper_bound_graph(const DomainModel& D, const CxVec& anchor,
                                     const CxVec& z, const CxVec& w,
                                     GraphOptions opts = {}) {
  BoundResult r;
  r.method = "graph";
  if (dist2(z, w) == 0.0) return r;
  double reach = opts.reach;
  if (reach <= 0.0) {
    CxVec fp = project_any(D, anchor);
    reach = std::max({2.0 * D.collar_width(), 1.6 * dist(fp, z), 1.6 * dist(fp, w),
                      1.6 * dist(z, w)});
  }
  CollarGraph g(D, anchor, reach, opts);
  CollarGraph::Query q = g.query(z, w);
  r.value = q.fine;
  r.coarse = q.coarse;
  r.mesh_nodes = q.nodes;
  r.angle_samples = opts.dd.initial_angles;
  return r;
}

// Explicit lower bound (1/2) log(1 + 1/delta_dir(z, z-w)) with the pair
// ordered so that z is the point closer to the boundary. The derivation uses
// convexification, so the result is tagged heuristic away from strongly
// pseudoconvex boundary.
inline BoundResult lower_bound_halflog(const DomainModel& D, const CxVec& z_in,
                                       const CxVec& w_in, const DirDistOptions& dd = {}) {
  BoundResult r;
  r.upper = false;
  r.method = "halflog";
  if (dist2(z_in, w_in) == 0.0) return r;
  CxVec z = z_in, w = w_in;
  if (boundary_distance(D, w) < boundary_distance(D, z)) std::swap(z, w);
  DirDist dd_res = directional_distance(D, z, sub(z, w), dd);
  r.value = 0.5 * std::log1p(1.0 / dd_res.value);
  r.angle_samples = dd_res.angles;
  r.heuristic = levi_classify(D, z).cls != "strongly-pseudoconvex";
  return r;
}

// Boundary-gauge lower bound c_low * F. On the shell the proof's integral has
// a closed form, reported in cap_alt.
inline BoundResult lower_bound_F(const DomainModel& D, const CxVec& z, const CxVec& w,
                                 double c_low = 1.0) {
  BoundResult r;
  r.upper = false;
  r.method = "F";
  if (dist2(z, w) == 0.0) return r;
  double dz = boundary_distance(D, z), dw = boundary_distance(D, w);
  double F = dist(z, w) + std::abs(std::sqrt(dz) - std::sqrt(dw));
  r.value = c_low * F;
  if (D.kind() == DomainKind::Shell) {
    double az = norm(z), aw = norm(w);
    r.cap_alt = dist(z, w) +
                std::abs(std::sqrt(az * az - 1.0) - std::sqrt(aw * aw - 1.0));
  }
  return r;
}

}  // namespace kdb
