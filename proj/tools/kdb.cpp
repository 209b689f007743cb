// Command-line front end: boundary classification, pair quantities, distance
// bounds, batch experiments, and the shell regime scanner.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kdb/csv.hpp"
#include "kdb/experiment.hpp"
#include "kdb/shell.hpp"

using nlohmann::json;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = kdb::detail::trim(tok);
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) kdb::fail(kdb::errc::config_parse, "empty list: " + text);
  return out;
}

json point_json(const kdb::CxVec& v) {
  json arr = json::array();
  for (double x : kdb::to_real(v)) arr.push_back(x);
  return arr;
}

json record_json(const kdb::PairRecord& r) {
  return json{{"delta_z", r.delta_z},
              {"delta_w", r.delta_w},
              {"abs_X", r.abs_X},
              {"X_z", {r.X_z.real(), r.X_z.imag()}},
              {"B", r.B},
              {"A", r.A},
              {"A_hat", r.A_hat},
              {"A_p", r.A_p},
              {"H", r.H},
              {"H_r", r.H_r},
              {"F", r.F},
              {"chi", r.chi},
              {"regime", r.claim_a ? "a" : "b"},
              {"concave_regime", r.concave_a ? "a" : "b"}};
}

json bound_json(const kdb::BoundResult& b) {
  json j{{"value", b.value},
         {"kind", b.upper ? "upper" : "lower"},
         {"method", b.method},
         {"heuristic", b.heuristic}};
  if (std::isfinite(b.cap)) j["cap"] = b.cap;
  if (std::isfinite(b.cap_alt)) j["cap_alt"] = b.cap_alt;
  if (std::isfinite(b.coarse)) j["coarse_mesh_value"] = b.coarse;
  if (b.metric_evals) j["metric_evals"] = b.metric_evals;
  if (b.mesh_nodes) j["mesh_nodes"] = b.mesh_nodes;
  if (b.angle_samples) j["angle_samples"] = b.angle_samples;
  if (std::isfinite(b.worst_delta)) j["worst_delta"] = b.worst_delta;
  return j;
}

int cmd_classify(const std::string& domain, const std::string& point) {
  kdb::DomainModel D = kdb::DomainModel::parse(domain);
  kdb::LeviReport rep = kdb::levi_classify(D, kdb::parse_point(point));
  json j{{"class", rep.cls},
         {"eigenvalues", rep.eigenvalues},
         {"finite_difference_hessian", rep.fd_fallback},
         {"tolerance", rep.tol}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_pair(const std::string& domain, const std::string& zs, const std::string& ws,
             const std::string& anchor, double chi_eps) {
  kdb::DomainModel D = kdb::DomainModel::parse(domain);
  kdb::CxVec z = kdb::parse_point(zs), w = kdb::parse_point(ws);
  kdb::CxVec p = anchor.empty() ? z : kdb::parse_point(anchor);
  double chi = kdb::chi_constant(D, kdb::project_any(D, p)).value;
  kdb::PairRecord zw = kdb::pair_record(D, chi > 0 ? chi : chi_eps, z, w, chi_eps);
  kdb::PairRecord wz = kdb::pair_record(D, chi > 0 ? chi : chi_eps, w, z, chi_eps);
  kdb::QuasiSymmetry qs = kdb::quasi_symmetry_check(zw, wz);
  kdb::BoundFormulas bf = kdb::bound_formulas(zw, 1.0, 1.0, 1.0);
  json j{{"z", point_json(z)},
         {"w", point_json(w)},
         {"chi", chi},
         {"record", record_json(zw)},
         {"record_reversed", record_json(wz)},
         {"reversal", {{"A_ratio", qs.a_ratio}, {"H_ratio", qs.h_ratio}}},
         {"formulas",
          {{"log1p_cA", bf.lower},
           {"log1p_CA", bf.upper},
           {"log1p_C0Ap", bf.smooth_upper},
           {"log1pA_minus_C", bf.bb_lo},
           {"log1pA_plus_C", bf.bb_hi}}}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_bounds(const std::string& domain, const std::string& anchor, const std::string& zs,
               const std::string& ws, const std::string& method, std::size_t mesh) {
  kdb::DomainModel D = kdb::DomainModel::parse(domain);
  kdb::CxVec z = kdb::parse_point(zs), w = kdb::parse_point(ws);
  kdb::CxVec p = anchor.empty() ? z : kdb::parse_point(anchor);
  json out = json::array();
  auto run = [&](const std::string& name, auto&& fn) {
    if (method != "all" && method != name) return;
    try {
      out.push_back(bound_json(fn()));
    } catch (const kdb::Error& e) {
      out.push_back(json{{"method", name}, {"error", e.what()}});
    }
  };
  run("segment", [&] { return kdb::upper_bound_segment(D, z, w); });
  run("lift", [&] { return kdb::upper_bound_normal_lift(D, z, w); });
  run("graph", [&] {
    kdb::GraphOptions opts;
    opts.nodes = mesh;
    return kdb::upper_bound_graph(D, p, z, w, opts);
  });
  run("halflog", [&] { return kdb::lower_bound_halflog(D, z, w); });
  run("F", [&] { return kdb::lower_bound_F(D, z, w); });
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_experiment(const std::string& config_path, std::string csv_override,
                   std::string json_override) {
  auto kv = config_path.empty() ? std::map<std::string, std::string>{}
                                : kdb::parse_config_file(config_path);
  kdb::ExperimentConfig cfg = kdb::experiment_config(kv);
  if (!csv_override.empty()) cfg.csv_path = csv_override;
  if (!json_override.empty()) cfg.json_path = json_override;

  std::ofstream csv_file, json_file;
  std::ostream* csv_os = nullptr;
  std::ostream* json_os = nullptr;
  if (!cfg.csv_path.empty()) {
    csv_file.open(cfg.csv_path, std::ios::binary);
    if (!csv_file) kdb::fail(kdb::errc::config_parse, "cannot open " + cfg.csv_path);
    csv_os = &csv_file;
  }
  if (!cfg.json_path.empty()) {
    json_file.open(cfg.json_path, std::ios::binary);
    if (!json_file) kdb::fail(kdb::errc::config_parse, "cannot open " + cfg.json_path);
    json_os = &json_file;
  }

  kdb::ExperimentReport rep = kdb::run_experiment(cfg, csv_os, json_os);
  std::cout << "domain=" << cfg.domain << " rows=" << rep.rows
            << " chi=" << kdb::csv_num(rep.chi)
            << " C1=" << kdb::csv_num(rep.c1_constant) << "\n";
  for (const kdb::EnvelopeReport& e : rep.envelopes) {
    std::cout << e.name << ": min=" << kdb::csv_num(e.min) << " p01=" << kdb::csv_num(e.p01)
              << " p50=" << kdb::csv_num(e.p50) << " p99=" << kdb::csv_num(e.p99)
              << " max=" << kdb::csv_num(e.max) << " n=" << e.count
              << (e.stable ? "" : " WARN:unstable") << "\n";
  }
  for (const std::string& err : rep.errors) std::cout << "WARN " << err << "\n";
  std::cout << "exact-checks: hr=" << rep.checks.hr_violations
            << " eq8=" << rep.checks.eq8_violations
            << " sandwich=" << rep.checks.sandwich_violations
            << " ahat=" << rep.checks.ahat_violations << "\n";
  return rep.ok() ? 0 : 3;
}

int cmd_shell_scan(double R, const std::string& eps_grid, const std::string& eta_grid,
                   const std::string& beta_grid, double c0, bool curves,
                   const std::string& out_path) {
  auto cells = kdb::shell_scan(R, parse_list(eps_grid), parse_list(eta_grid),
                               parse_list(beta_grid), c0, curves);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) kdb::fail(kdb::errc::config_parse, "cannot open " + out_path);
    os = &file;
  }
  kdb::csv_row(*os, {"eps1", "eps2", "eta", "beta", "H", "surrogate", "ratio",
                     "re_tag", "abs_tag", "gate", "applicable", "functional_min"});
  for (const auto& c : cells) {
    kdb::csv_row(*os, {kdb::csv_num(c.sp.eps1), kdb::csv_num(c.sp.eps2),
                       kdb::csv_num(c.sp.eta), kdb::csv_num(c.sp.beta),
                       kdb::csv_num(c.regime.H), kdb::csv_num(c.regime.surrogate),
                       kdb::csv_num(c.regime.ratio), kdb::csv_num(c.regime.re_tag),
                       kdb::csv_num(c.regime.abs_tag), c.regime.gate ? "1" : "0",
                       c.regime.applicable ? "1" : "0", kdb::csv_num(c.functional_min)});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-geometry quantities and Kobayashi-distance bounds"};
  app.require_subcommand(1);

  std::string domain = "ball:r=1", point, zs, ws, anchor, method = "all";
  std::string config_path, csv_path, json_path, out_path;
  std::string eps_grid = "1e-3,1e-2", eta_grid = "0.01,0.1", beta_grid = "0,0.05";
  double chi_eps = 1e-6, R = 4.0, c0 = 1e-2;
  std::size_t mesh = 2000;
  bool no_curves = false;

  CLI::App* classify = app.add_subcommand("classify", "Levi classification at a boundary point");
  classify->add_option("--domain", domain)->required();
  classify->add_option("--point", point)->required();

  CLI::App* pair = app.add_subcommand("pair", "comparison quantities for one pair");
  pair->add_option("--domain", domain)->required();
  pair->add_option("--z", zs)->required();
  pair->add_option("--w", ws)->required();
  pair->add_option("--anchor", anchor);
  pair->add_option("--chi-eps", chi_eps);

  CLI::App* bounds = app.add_subcommand("bounds", "distance bounds for one pair");
  bounds->add_option("--domain", domain)->required();
  bounds->add_option("--z", zs)->required();
  bounds->add_option("--w", ws)->required();
  bounds->add_option("--anchor", anchor);
  bounds->add_option("--method", method)->check(CLI::IsMember({"segment", "lift", "graph", "halflog", "F", "all"}));
  bounds->add_option("--mesh", mesh);

  CLI::App* experiment = app.add_subcommand("experiment", "batch collar-pair experiment");
  experiment->add_option("--config", config_path);
  experiment->add_option("--csv", csv_path);
  experiment->add_option("--json", json_path);

  CLI::App* scan = app.add_subcommand("shell-scan", "regime scan over shell pairs");
  scan->add_option("--R", R);
  scan->add_option("--eps-grid", eps_grid);
  scan->add_option("--eta-grid", eta_grid);
  scan->add_option("--beta-grid", beta_grid);
  scan->add_option("--c0", c0);
  scan->add_flag("--no-curves", no_curves);
  scan->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed()) return cmd_classify(domain, point);
    if (pair->parsed()) return cmd_pair(domain, zs, ws, anchor, chi_eps);
    if (bounds->parsed()) return cmd_bounds(domain, anchor, zs, ws, method, mesh);
    if (experiment->parsed()) return cmd_experiment(config_path, csv_path, json_path);
    if (scan->parsed())
      return cmd_shell_scan(R, eps_grid, eta_grid, beta_grid, c0, !no_curves, out_path);
  } catch (const kdb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
