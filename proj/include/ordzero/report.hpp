#pragma once

// JSON artifacts. Doubles are written with 17 significant digits so that every
// value round-trips; non-finite values become null. Object keys are sorted,
// which with fixed quadrature makes reports byte-identical across runs.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordzero/dbar.hpp"
#include "ordzero/dispatcher.hpp"
#include "ordzero/dynamics.hpp"
#include "ordzero/errors.hpp"
#include "ordzero/growth.hpp"
#include "ordzero/subharmonic.hpp"

namespace ordzero {

using json = nlohmann::json;

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void write_value(std::ostream& os, const json& j, int indent, int depth) {
  const auto pad = [&](int d) {
    if (indent >= 0) os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        os << json(it.key()).dump() << (indent >= 0 ? ": " : ":");
        write_value(os, it.value(), indent, depth + 1);
      }
      pad(depth);
      os << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        pad(depth + 1);
        write_value(os, j[i], indent, depth + 1);
      }
      pad(depth);
      os << ']';
      return;
    }
    case json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

inline std::string dump(const json& j, int indent = 2) {
  std::ostringstream os;
  detail::write_value(os, j, indent, 0);
  os << '\n';
  return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, dump(j)); }

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return json::parse(in);
}

/// Wall-clock stopwatch in seconds.
class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// ---- module reports --------------------------------------------------------

inline json cjson(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Schedule& s) {
  return {{"start_index", s.start_index()},     {"periods", s.periods()},     {"rates", s.original_rates()},
          {"normalized_rates", s.rates()},      {"degrees", s.degrees()},     {"exponents", s.exponents()},
          {"renormalized", s.was_renormalized()}};
}

inline const char* to_string(PPPFailure f) {
  switch (f) {
    case PPPFailure::none:
      return "none";
    case PPPFailure::orbit_residual:
      return "orbit_residual";
    case PPPFailure::primitivity:
      return "primitivity";
    case PPPFailure::degenerate_jacobian:
      return "degenerate_jacobian";
  }
  return "unknown";
}

inline json to_json(const PPPRecord& r) {
  json j = {{"n", r.point.n},
            {"j", r.point.j},
            {"l", r.point.ell},
            {"period", r.period},
            {"z", cjson(r.z)},
            {"w", cjson(r.w)},
            {"norm", r.norm()},
            {"orbit_residual", r.orbit_residual},
            {"newton_refined", r.newton_refined},
            {"newton_steps", r.newton_steps},
            {"min_primitivity_margin", json()},
            {"max_margin_rel_error", json()},
            {"log2_abs_a", r.log2_abs_a},
            {"jacobian_log_margin", r.jacobian_log_margin},
            {"jacobian_log_margin_fd", r.jacobian_log_margin_fd},
            {"fd_bits", r.fd_bits},
            {"ok", r.ok()},
            {"failure_kind", to_string(r.failure_kind)},
            {"failure", r.failure}};
  if (!r.primitivity_margins.empty()) {
    double mn = INFINITY, rel = 0;
    for (std::size_t k = 0; k < r.primitivity_margins.size(); ++k) {
      mn = std::min(mn, r.primitivity_margins[k]);
      if (k < r.expected_margins.size() && r.expected_margins[k] > 0)
        rel = std::max(rel, std::abs(r.primitivity_margins[k] - r.expected_margins[k]) / r.expected_margins[k]);
    }
    j["min_primitivity_margin"] = mn;
    j["max_margin_rel_error"] = rel;
  }
  return j;
}

inline json to_json(const LevelCount& l) {
  json recs = json::array();
  for (const auto& r : l.records) recs.push_back(to_json(r));
  return {{"n", l.n},
          {"period", l.period},
          {"claimed", l.claimed},
          {"normalized_rate", l.normalized_rate},
          {"lattice_points", l.lattice_points},
          {"verified", l.verified},
          {"check_radius", l.check_radius},
          {"count_at_radius", l.count_at_radius},
          {"count_at_literal_radius", l.count_at_literal},
          {"second_factor_nonzero", l.second_factor_nonzero},
          {"ok", l.ok()},
          {"records", recs}};
}

inline json to_json(const CountReport& c) {
  json levels = json::array();
  for (const auto& l : c.levels) levels.push_back(to_json(l));
  return {{"levels", levels}, {"total_verified", c.total_verified()}, {"ok", c.ok()}};
}

inline json to_json(const ModulusSample& s) {
  return {{"r", s.r}, {"log_max", s.log_max}, {"z", cjson(s.z)}, {"w", cjson(s.w)}};
}

inline json to_json(const std::vector<ModulusSample>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(to_json(s));
  return a;
}

inline json to_json(const GrowthFit& f) {
  return {{"c_fit", f.c_fit}, {"const_fit", f.const_fit}, {"degenerate", f.degenerate}};
}

inline json to_json(const SphereDensity& d) { return {{"phi", d.phi}, {"psi", d.psi}, {"s", d.s}}; }

inline json to_json(const GrowthReport& g) {
  return {{"samples", to_json(g.samples)},
          {"density", to_json(g.density)},
          {"fit", to_json(g.fit)},
          {"order_estimate", g.order_estimate}};
}

inline json to_json(const DispatcherGrowth& g) {
  return {{"samples", to_json(g.samples)},
          {"fit", to_json(g.fit)},
          {"max_log_over_log2", g.max_log_over_log2},
          {"constant_depends_on_m", g.constant_depends_on_m}};
}

inline json to_json(const DbarValidation& v) {
  json nodes = json::array();
  for (const auto& n : v.nodes)
    nodes.push_back({{"k", n.k},
                     {"target", n.target},
                     {"explicit", cjson(n.explicit_value)},
                     {"numeric", cjson(n.numeric_value)},
                     {"deviation", n.deviation}});
  return {{"J", std::vector<int>(v.J.begin(), v.J.end())},
          {"M", v.M},
          {"nodes", nodes},
          {"max_node_deviation", v.max_node_deviation},
          {"max_numeric_error", v.max_numeric_error},
          {"explicit_samples", to_json(v.explicit_samples)},
          {"numeric_samples", to_json(v.numeric_samples)},
          {"explicit_fit", to_json(v.explicit_fit)},
          {"numeric_fit", to_json(v.numeric_fit)},
          {"residual", v.residual},
          {"hormander_lhs", v.hormander.lhs},
          {"hormander_rhs", v.hormander.rhs},
          {"iterations", v.iterations}};
}

inline json to_json(const SubharmonicReport& r) {
  json off = json::array();
  for (const auto& o : r.offenders) off.push_back({{"z", cjson(o.z)}, {"kind", o.kind}, {"value", o.value}});
  return {{"h", r.h},
          {"tol", r.tol},
          {"points_checked", r.points_checked},
          {"points_excluded", r.points_excluded},
          {"min_laplacian", r.min_laplacian},
          {"argmin_laplacian", cjson(r.argmin_laplacian)},
          {"min_laplacian_over_C", r.min_laplacian_over_C},
          {"max_jump", r.max_jump},
          {"argmax_jump", cjson(r.argmax_jump)},
          {"max_jump_per_disk", r.max_jump_per_disk},
          {"laplacian_ok", r.laplacian_ok()},
          {"jump_ok", r.jump_ok()},
          {"ok", r.ok()},
          {"offenders", off}};
}

inline json to_json(const PunctureBound& b) {
  return {{"k", b.k}, {"delta", b.delta}, {"max_v", b.max_v}, {"bound", b.bound}, {"ok", b.ok()}};
}

/// Certificate fields of a dbar run (fields themselves go to CSV).
inline json certificate_json(const DbarResult& r, const std::set<int>& J, double M) {
  json errs = json::array();
  for (const auto& n : r.solution.nodes)
    errs.push_back({{"k", n.k}, {"target", n.target}, {"value", cjson(n.value)}, {"error", n.error}});
  const auto& gr = r.problem.grid;
  return {{"J", std::vector<int>(J.begin(), J.end())},
          {"M", M},
          {"grid", {{"n", gr.n}, {"h", gr.h}, {"x0", gr.x0}, {"y0", gr.y0}}},
          {"residual", r.solve.residual},
          {"iterations", r.solve.iterations},
          {"passes", r.solve.passes},
          {"hormander_lhs", r.hormander.lhs},
          {"hormander_rhs", r.hormander.rhs},
          {"hormander_slack", r.hormander.slack},
          {"interpolation_errors", errs},
          {"max_interpolation_error", r.solution.max_node_error()},
          {"holomorphy_residual", r.solution.holomorphy_residual},
          {"c_fit", r.growth.fit.c_fit},
          {"const_fit", r.growth.fit.const_fit},
          {"growth_samples", to_json(r.growth.samples)},
          {"cutoff_A", r.problem.chi.A},
          {"capped_nodes", r.problem.capped_nodes},
          {"i_diagnostic", r.i_diagnostic},
          {"i_majorant", r.i_majorant}};
}

}  // namespace ordzero
