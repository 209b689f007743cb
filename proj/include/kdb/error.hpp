#pragma once

#include <stdexcept>
#include <string>

namespace kdb {

enum class errc {
  projection_no_converge,
  outside_collar,
  ambiguous_projection,
  degenerate_sampling,
  hessian_unavailable,
  not_interior,
  regime_mismatch,
  path_exits_domain,
  lift_exits_domain,
  disconnected_graph,
  invalid_psi,
  outside_ball,
  constraint_violation,
  config_parse,
  domain_parse,
  empty_stream,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::projection_no_converge: return "projection-no-converge";
    case errc::outside_collar: return "outside-collar";
    case errc::ambiguous_projection: return "ambiguous-projection";
    case errc::degenerate_sampling: return "degenerate-sampling";
    case errc::hessian_unavailable: return "hessian-unavailable";
    case errc::not_interior: return "not-interior";
    case errc::regime_mismatch: return "regime-mismatch";
    case errc::path_exits_domain: return "path-exits-domain";
    case errc::lift_exits_domain: return "lift-exits-domain";
    case errc::disconnected_graph: return "disconnected-graph";
    case errc::invalid_psi: return "invalid-psi";
    case errc::outside_ball: return "outside-ball";
    case errc::constraint_violation: return "constraint-violation";
    case errc::config_parse: return "config-parse";
    case errc::domain_parse: return "domain-parse";
    case errc::empty_stream: return "empty-stream";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace kdb
