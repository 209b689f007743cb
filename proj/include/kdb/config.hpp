#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kdb/complex_vec.hpp"
#include "kdb/error.hpp"

namespace kdb {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace((unsigned char)s[a])) ++a;
  while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
  return s.substr(a, b - a);
}

}  // namespace detail

// Plain-text configuration: one `key = value` per line, # starts a comment.
inline std::map<std::string, std::string> parse_config_text(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::config_parse, "line " + std::to_string(lineno) + ": expected key=value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty())
      fail(errc::config_parse, "line " + std::to_string(lineno) + ": empty key");
    kv[key] = val;
  }
  return kv;
}

inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::config_parse, "cannot open config file: " + path);
  return parse_config_text(in);
}

// comma-separated reals, interleaved re/im per complex coordinate
inline CxVec parse_point(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = detail::trim(tok);
    if (tok.empty()) fail(errc::config_parse, "empty coordinate in point: " + text);
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      fail(errc::config_parse, "bad coordinate '" + tok + "'");
    }
    if (pos != tok.size()) fail(errc::config_parse, "bad coordinate '" + tok + "'");
    vals.push_back(v);
  }
  if (vals.empty() || vals.size() % 2 != 0)
    fail(errc::config_parse, "point needs an even count of reals: " + text);
  return from_real(vals);
}

struct ExperimentConfig {
  std::string domain = "ball:r=1";
  std::string anchor;  // empty = first-axis boundary point of the domain
  double collar = 0.0;  // 0 = domain default
  double delta_min = 1e-4;
  double delta_max = 1e-1;
  std::size_t count = 1000;
  std::uint64_t seed = 7;
  double slack_pct = 10.0;       // envelope / cap slack
  double eq8_slack_pct = 10.0;   // reversal-ratio slack over the structural 2
  // model constants, all order-one defaults
  double c_low = 1.0;
  double dnt_c = 1.0;
  double dnt_C = 1.0;
  double bb_C = 1.0;
  double C0 = 1.0;
  double c0 = 1e-2;
  double chi_eps = 1e-6;
  std::string csv_path;
  std::string json_path;
};

inline double cfg_num(const std::map<std::string, std::string>& kv, const std::string& key,
                      double dflt) {
  auto it = kv.find(key);
  if (it == kv.end()) return dflt;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(errc::config_parse, "key '" + key + "': bad number '" + it->second + "'");
  }
}

inline void validate(const ExperimentConfig& cfg) {
  if (!(cfg.delta_min > 0.0) || !(cfg.delta_max >= cfg.delta_min))
    fail(errc::config_parse, "need 0 < delta_min <= delta_max");
  if (cfg.count < 1) fail(errc::config_parse, "sample count must be at least 1");
  if (!(cfg.c0 > 0.0) || cfg.c0 > 1e-2)
    fail(errc::config_parse, "c0 must lie in (0, 1e-2]");
  if (!(cfg.c_low > 0.0 && cfg.dnt_c > 0.0 && cfg.dnt_C > 0.0 && cfg.bb_C > 0.0 &&
        cfg.C0 > 0.0 && cfg.chi_eps > 0.0))
    fail(errc::config_parse, "model constants must be positive");
}

inline ExperimentConfig experiment_config(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  auto str = [&](const char* k, std::string& out) {
    auto it = kv.find(k);
    if (it != kv.end()) out = it->second;
  };
  str("domain", cfg.domain);
  str("anchor", cfg.anchor);
  str("csv", cfg.csv_path);
  str("json", cfg.json_path);
  cfg.collar = cfg_num(kv, "collar", cfg.collar);
  cfg.delta_min = cfg_num(kv, "delta_min", cfg.delta_min);
  cfg.delta_max = cfg_num(kv, "delta_max", cfg.delta_max);
  cfg.count = (std::size_t)cfg_num(kv, "count", double(cfg.count));
  cfg.seed = (std::uint64_t)cfg_num(kv, "seed", double(cfg.seed));
  cfg.slack_pct = cfg_num(kv, "slack", cfg.slack_pct);
  cfg.eq8_slack_pct = cfg_num(kv, "eq8_slack", cfg.eq8_slack_pct);
  cfg.c_low = cfg_num(kv, "c_low", cfg.c_low);
  cfg.dnt_c = cfg_num(kv, "dnt_c", cfg.dnt_c);
  cfg.dnt_C = cfg_num(kv, "dnt_C", cfg.dnt_C);
  cfg.bb_C = cfg_num(kv, "bb_C", cfg.bb_C);
  cfg.C0 = cfg_num(kv, "C0", cfg.C0);
  cfg.c0 = cfg_num(kv, "c0", cfg.c0);
  cfg.chi_eps = cfg_num(kv, "chi_eps", cfg.chi_eps);
  validate(cfg);
  return cfg;
}

}  // namespace kdb
