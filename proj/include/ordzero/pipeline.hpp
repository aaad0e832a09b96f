#pragma once

// Subcommand pipelines: each one computes, writes its artifacts under the
// output directory and returns a JSON summary with an "ok" flag.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ordzero/config.hpp"
#include "ordzero/cs_builder.hpp"
#include "ordzero/dbar.hpp"
#include "ordzero/dispatcher.hpp"
#include "ordzero/dynamics.hpp"
#include "ordzero/growth.hpp"
#include "ordzero/report.hpp"
#include "ordzero/subharmonic.hpp"
#include "ordzero/svg.hpp"

namespace ordzero {

namespace fs = std::filesystem;

#ifndef ORDZERO_VERSION
#define ORDZERO_VERSION "0.0.0"
#endif

inline const char* version() { return ORDZERO_VERSION; }

struct StageResult {
  std::string name;
  json report;  ///< always carries "ok"
  std::vector<std::string> artifacts;
  bool ok() const { return report.value("ok", false); }
};

/// Artifact holding each stage's JSON report; `report` reads these back.
inline const std::map<std::string, std::string>& stage_files() {
  static const std::map<std::string, std::string> m = {
      {"build", "build.json"},         {"verify", "count_report.json"},  {"growth", "growth.json"},
      {"dbar-demo", "dbar_certificate.json"}, {"puncture-demo", "puncture.json"}, {"zeros", "zeros.json"},
      {"dispatcher", "dispatcher.json"}};
  return m;
}

namespace detail {

inline std::string csv_num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_number(x);
}

/// Wall-clock seconds per stage; kept out of the reports so those stay byte-identical.
inline void record_timing(const fs::path& out, const std::string& stage, double seconds) {
  const fs::path p = out / "timings.json";
  json t = json::object();
  if (fs::exists(p)) {
    try {
      t = read_json(p);
    } catch (const std::exception&) {
      t = json::object();
    }
  }
  t[stage] = seconds;
  write_json(p, t);
}

inline StageResult finish(StageResult r, const fs::path& out, const Stopwatch& sw) {
  const auto it = stage_files().find(r.name);
  if (it != stage_files().end()) {
    write_json(out / it->second, r.report);
    r.artifacts.insert(r.artifacts.begin(), it->second);
  }
  record_timing(out, r.name, sw.seconds());
  return r;
}

inline std::string level_label(int n, int p) {
  return "n=" + std::to_string(n) + ", p=" + std::to_string(p);
}

}  // namespace detail

// ---- build ------------------------------------------------------------------

inline StageResult run_build(const RunConfig& cfg, const fs::path& out) {
  Stopwatch sw;
  StageResult r{"build", {}, {}};
  const auto s = cfg.make_schedule();
  const auto policy = cfg.policy();
  const auto cs = build_cs<double>(s, policy, cfg.precision_bits);

  const auto checks = check_zero_lattice(cs);
  double max_g1 = 0, max_g2 = 0, max_tail = 0;
  bool lattice_ok = true;
  for (const auto& c : checks) {
    max_g1 = std::max(max_g1, c.abs_g1);
    max_g2 = std::max(max_g2, c.abs_g2);
    max_tail = std::max(max_tail, c.tail_bound);
    lattice_ok = lattice_ok && c.ok();
  }

  json disp = json::array();
  bool nodes_ok = true;
  const auto ds = build_dispatchers<double>(s, policy, true);
  for (const auto& d : ds) {
    json nodes = json::array();
    for (int n : s.indices()) {
      const auto v = d(cplx(std::ldexp(1.0, n), 0));
      const double target = n == d.m() ? d.M() : 0.0;
      const double err = std::abs(v - target);
      nodes_ok = nodes_ok && err <= 1e-12 * std::max(1.0, d.M());
      nodes.push_back({{"n", n}, {"value", cjson(v)}, {"target", target}, {"error", err}});
    }
    disp.push_back({{"m", d.m()}, {"M", d.M()}, {"kind", to_string(d.kind())}, {"nodes", nodes},
                    {"growth", to_json(d.growth())}});
  }
  const auto F = assemble_F(cs, ds);

  json levels = json::array();
  for (int n : s.indices())
    levels.push_back({{"n", n},
                      {"period", s.period(n)},
                      {"rate", s.rate(n)},
                      {"exponent", s.exponent(n)},
                      {"factor_count", s.factor_count(n)},
                      {"rotation_period", F.period_at(n)}});

  r.report = {{"schedule", to_json(s)},
              {"truncation", {{"eps", policy.eps()}, {"max_terms", policy.max_terms}}},
              {"precision_bits", cs.precision_bits()},
              {"levels", levels},
              {"zero_lattice",
               {{"points", checks.size()},
                {"max_abs_g1", max_g1},
                {"max_abs_g2", max_g2},
                {"max_tail_bound", max_tail},
                {"ok", lattice_ok}}},
              {"dispatchers", disp},
              {"dispatcher_nodes_ok", nodes_ok},
              {"ok", lattice_ok && nodes_ok}};
  return detail::finish(std::move(r), out, sw);
}

// ---- verify -----------------------------------------------------------------

/// Criterion-level summary of a CountReport.
inline json verify_summary(const CountReport& rep, const PPPOptions& opt) {
  double max_res = 0, max_margin = 0, max_log = 0;
  bool finite = true;
  int total_claimed = 0;
  for (const auto& l : rep.levels) {
    total_claimed += l.claimed;
    for (const auto& rec : l.records) {
      max_res = std::max(max_res, rec.orbit_residual);
      for (std::size_t k = 0; k < rec.primitivity_margins.size() && k < rec.expected_margins.size(); ++k)
        max_margin = std::max(max_margin, std::abs(rec.primitivity_margins[k] - rec.expected_margins[k]) /
                                              rec.expected_margins[k]);
      finite = finite && std::isfinite(rec.jacobian_log_margin);
      if (opt.finite_difference) {
        if (!std::isfinite(rec.jacobian_log_margin_fd)) finite = false;
        else
          max_log = std::max(max_log, std::abs(rec.jacobian_log_margin_fd - rec.jacobian_log_margin) /
                                          std::max(1.0, std::abs(rec.jacobian_log_margin)));
      }
    }
  }
  return {{"max_orbit_residual", max_res},
          {"max_margin_rel_error", max_margin},
          {"max_log_margin_rel_disagreement", max_log},
          {"jacobian_margins_finite", finite},
          {"total_verified", rep.total_verified()},
          {"total_claimed", total_claimed},
          {"orbit_tol", opt.orbit_tol},
          {"ok", rep.ok() && finite && max_res <= opt.orbit_tol && max_margin <= 1e-8 &&
                     max_log <= opt.log_agreement && rep.total_verified() >= total_claimed}};
}

inline std::string verify_svg(const CountReport& rep) {
  svg::Plot plot("Verified primitive periodic points (z-plane, one panel per level)", "Re z (panels offset by 3)",
                 "Im z");
  plot.equal_aspect();
  std::map<int, std::size_t> colour;
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    const auto& l = rep.levels[i];
    if (!colour.count(l.period)) colour[l.period] = colour.size();
    const double off = 3.0 * double(i);
    svg::Points ok_pts, bad_pts;
    for (const auto& rec : l.records) (rec.ok() ? ok_pts : bad_pts).emplace_back(rec.z.real() + off, rec.z.imag());
    const auto& col = svg::palette()[colour[l.period] % svg::palette().size()];
    plot.circle(off, 0, 1.0, {"#cccccc", 0.6, 0, "3,3"});
    plot.scatter(ok_pts, {col, 1, 3.5, ""}, detail::level_label(l.n, l.period) + ", " + std::to_string(l.verified) +
                                               " verified");
    if (!bad_pts.empty()) plot.scatter(bad_pts, {"#000000", 1, 4.5, ""}, "failed");
  }
  return plot.str();
}

inline StageResult run_verify(const RunConfig& cfg, const fs::path& out) {
  Stopwatch sw;
  StageResult r{"verify", {}, {}};
  const auto cs = build_cs<double>(cfg.make_schedule(), cfg.policy(), cfg.precision_bits);
  const auto F = assemble_F(cs);
  const auto opt = cfg.ppp_options();
  const auto rep = count_report(F, opt);
  r.report = to_json(rep);
  r.report["summary"] = verify_summary(rep, opt);
  r.report["schedule"] = to_json(cs.schedule());
  r.report["ok"] = r.report["summary"]["ok"];
  write_text(out / "verify.svg", verify_svg(rep));
  r.artifacts.push_back("verify.svg");
  return detail::finish(std::move(r), out, sw);
}

// ---- growth -----------------------------------------------------------------

struct GrowthStage {
  GrowthReport g, g_doubled, f;
  double c40 = 0, c40_doubled = 0;
  bool g_ok = false, f_ok = false;
};

inline GrowthStage compute_growth(const RunConfig& cfg) {
  const auto cs = build_cs<double>(cfg.make_schedule(), cfg.policy(), cfg.precision_bits);
  const auto F = assemble_F(cs);
  GrowthStage st;
  const auto& radii = cfg.growth.radii;
  st.g = growth_report(cs, radii, cfg.growth.density);
  st.g_doubled = growth_report(cs, radii, cfg.growth.density.doubled());
  st.f = growth_report(F, radii, cfg.growth.density);
  const double c = cfg.growth.envelope_c;
  st.c40 = offset_for_slope(st.g.samples, c);
  st.c40_doubled = offset_for_slope(st.g_doubled.samples, c);
  const bool stable = std::abs(st.c40_doubled - st.c40) <= 0.1 * std::abs(st.c40);
  st.g_ok = std::isfinite(st.c40) && stable;
  st.f_ok = std::isfinite(st.f.fit.c_fit) && envelope_dominates(st.f.samples, st.f.fit);
  return st;
}

inline StageResult run_growth(const RunConfig& cfg, const fs::path& out) {
  Stopwatch sw;
  StageResult r{"growth", {}, {}};
  const auto st = compute_growth(cfg);
  const double c = cfg.growth.envelope_c;

  std::ostringstream csv;
  csv << "map,r,log_max,envelope\n";
  for (const auto& s : st.g.samples)
    csv << "G," << detail::csv_num(s.r) << ',' << detail::csv_num(s.log_max) << ','
        << detail::csv_num(c * log2p1(s.r) + st.c40) << '\n';
  for (const auto& s : st.f.samples)
    csv << "F," << detail::csv_num(s.r) << ',' << detail::csv_num(s.log_max) << ','
        << detail::csv_num(st.f.fit.c_fit * log2p1(s.r) + st.f.fit.const_fit) << '\n';
  write_text(out / "growth.csv", csv.str());

  svg::Plot plot("Sampled maximum modulus", "r (log scale)", "ln M(r)");
  plot.log_x();
  svg::Points g, f, ge, fe;
  for (const auto& s : st.g.samples) {
    g.emplace_back(s.r, s.log_max);
    ge.emplace_back(s.r, c * log2p1(s.r) + st.c40);
  }
  for (const auto& s : st.f.samples) {
    f.emplace_back(s.r, s.log_max);
    fe.emplace_back(s.r, st.f.fit.c_fit * log2p1(s.r) + st.f.fit.const_fit);
  }
  char lab[96];
  std::snprintf(lab, sizeof lab, "G envelope %g ln^2(r+1) %+.3f", c, st.c40);
  plot.line(ge, {"#1f77b4", 1.2, 0, "6,4"}, lab);
  std::snprintf(lab, sizeof lab, "F envelope %.3f ln^2(r+1) %+.3f", st.f.fit.c_fit, st.f.fit.const_fit);
  plot.line(fe, {"#d62728", 1.2, 0, "6,4"}, lab);
  plot.line(g, {"#1f77b4", 1.8, 0, ""});
  plot.scatter(g, {"#1f77b4", 1, 3.5, ""}, "G samples");
  plot.line(f, {"#d62728", 1.8, 0, ""});
  plot.scatter(f, {"#d62728", 1, 3.5, ""}, "F samples");
  write_text(out / "growth.svg", plot.str());

  r.report = {{"G",
               {{"report", to_json(st.g)},
                {"doubled", to_json(st.g_doubled)},
                {"envelope_c", c},
                {"C_fit", st.c40},
                {"C_fit_doubled", st.c40_doubled},
                {"C_fit_rel_change", std::abs(st.c40_doubled - st.c40) / std::abs(st.c40)},
                {"ok", st.g_ok}}},
              {"F", {{"report", to_json(st.f)}, {"envelope_dominates", envelope_dominates(st.f.samples, st.f.fit)},
                     {"ok", st.f_ok}}},
              {"ok", st.g_ok && st.f_ok}};
  r.artifacts = {"growth.csv", "growth.svg"};
  return detail::finish(std::move(r), out, sw);
}

// ---- dbar-demo --------------------------------------------------------------

struct DbarChecks {
  bool residual = false, hormander = false, interpolation = false, growth = false;
  bool ok() const { return residual && hormander && interpolation && growth; }
};

inline DbarChecks dbar_checks(const DbarResult& d, const RunConfig& cfg) {
  DbarChecks c;
  c.residual = d.solve.residual <= cfg.dbar.solver.cg_tol;
  c.hormander = d.hormander.ok(1.0);
  c.interpolation = !d.solution.nodes.empty() && d.solution.max_node_error() <= 1e-3 * std::max(cfg.dbar.M, 1.0);
  c.growth = std::isfinite(d.growth.fit.c_fit);
  return c;
}

inline StageResult run_dbar_demo(const RunConfig& cfg, const fs::path& out) {
  Stopwatch sw;
  StageResult r{"dbar-demo", {}, {}};
  const auto d = run_dbar(cfg.dbar.solver, cfg.dbar.J, cfg.dbar.M);
  const auto chk = dbar_checks(d, cfg);
  r.report = certificate_json(d, cfg.dbar.J, cfg.dbar.M);
  r.report["checks"] = {{"residual", chk.residual},
                        {"hormander", chk.hormander},
                        {"interpolation", chk.interpolation},
                        {"growth_fit_finite", chk.growth}};
  r.report["residual_tol"] = cfg.dbar.solver.cg_tol;
  r.report["ok"] = chk.ok();

  const auto& gr = d.problem.grid;
  std::ofstream csv((fs::create_directories(out), out / "dbar_field.csv"));
  if (!csv) throw Error("cannot write " + (out / "dbar_field.csv").string());
  csv << "x,y,re,im\n";
  for (int b = 0; b < gr.n; ++b)
    for (int a = 0; a < gr.n; ++a) {
      const cplx z = gr.at(a, b);
      const cplx f = d.solution.f[gr.id(a, b)];
      csv << detail::csv_num(z.real()) << ',' << detail::csv_num(z.imag()) << ',' << detail::csv_num(f.real()) << ','
          << detail::csv_num(f.imag()) << '\n';
    }
  r.artifacts.push_back("dbar_field.csv");
  return detail::finish(std::move(r), out, sw);
}

// ---- puncture-demo ----------------------------------------------------------

struct PunctureStage {
  std::shared_ptr<const PuncturedPotential> v;
  GridSpec grid;
  SubharmonicReport literal;     ///< default exclusion, tolerance 10 h^2
  SubharmonicReport off_centre;  ///< stencils at least 9 steps from the centres
  std::vector<PunctureBound> bounds;
  bool bounds_ok = true;
};

inline PunctureStage compute_puncture(const RunConfig& cfg) {
  const auto& pc = cfg.puncture;
  const double C = pc.C > 0 ? pc.C : default_C();
  PunctureStage st;
  st.v = std::make_shared<const PuncturedPotential>(puncture(std::make_shared<LogSquaredBase>(C), pc.k_min, pc.k_max));
  st.grid = {pc.box[0], pc.box[1], pc.box[2], pc.box[3], pc.h};
  st.literal = check_subharmonic(*st.v, st.grid);
  st.off_centre = check_subharmonic(*st.v, st.grid, {.exclusion_steps = 9});
  for (std::size_t i = 0; i < st.v->disks().size(); ++i)
    for (double delta : pc.deltas) {
      st.bounds.push_back(puncture_bound(*st.v, i, delta));
      st.bounds_ok = st.bounds_ok && st.bounds.back().ok();
    }
  return st;
}

inline StageResult run_puncture_demo(const RunConfig& cfg, const fs::path& out) {
  Stopwatch sw;
  StageResult r{"puncture-demo", {}, {}};
  const auto st = compute_puncture(cfg);
  const auto& v = *st.v;
  const auto& g = st.grid;

  // Heightfield on the same grid as the Laplacian check. The contour plot shows
  // the modification v - u, which vanishes off the disks; near z_k the base
  // gradient hides the wells in v itself.
  const int nx = g.nx(), ny = g.ny();
  std::vector<double> mod(static_cast<std::size_t>(nx) * ny);
  std::ostringstream csv;
  csv << "x,y,v,v_minus_base\n";
  for (int b = 0; b < ny; ++b)
    for (int a = 0; a < nx; ++a) {
      const cplx z = g.at(a, b);
      const auto e = v.eval(z);
      const double x = e.neg_inf ? -INFINITY : e.value;
      const double m = e.neg_inf ? -INFINITY : e.value - v.base().value(z);
      mod[static_cast<std::size_t>(b) * nx + a] = e.neg_inf ? kNegInfSentinel : m;
      csv << detail::csv_num(z.real()) << ',' << detail::csv_num(z.imag()) << ',' << detail::csv_num(x) << ','
          << detail::csv_num(m) << '\n';
    }
  write_text(out / "puncture.csv", csv.str());

  svg::Plot plot("Puncture wells: level sets of v - u (levels -A/4 ... -4A) and disks B_k", "Re z", "Im z", 980, 420);
  plot.equal_aspect();
  const double A = v.disks().empty() ? 1.0 : v.disks().front().A;
  const double levels[] = {-0.25, -0.5, -1, -2, -4};
  for (std::size_t i = 0; i < std::size(levels); ++i) {
    const auto& col = svg::palette()[i % svg::palette().size()];
    char lab[48];
    std::snprintf(lab, sizeof lab, "v - u = %g A", levels[i]);
    plot.segments(svg::contour(mod, nx, ny, g.x0, g.y0, g.h, levels[i] * A), {col, 1.0, 0, ""}, lab);
  }
  for (const auto& d : v.disks()) {
    plot.circle(d.center.real(), d.center.imag(), d.radius, {"#000000", 1.2, 0, "4,3"});
    plot.scatter({{d.center.real(), d.center.imag()}}, {"#000000", 1, 2.5, ""});
  }
  write_text(out / "puncture.svg", plot.str());

  json disks = json::array();
  for (const auto& d : v.disks())
    disks.push_back({{"k", d.k}, {"center", cjson(d.center)}, {"radius", d.radius}, {"A", d.A}});
  json bounds = json::array();
  for (const auto& b : st.bounds) bounds.push_back(to_json(b));
  r.report = {{"C", v.base().constant()},
              {"c", cached_c()},
              {"disks", disks},
              {"grid", {{"x0", g.x0}, {"x1", g.x1}, {"y0", g.y0}, {"y1", g.y1}, {"h", g.h}}},
              {"laplacian_check", to_json(st.literal)},
              {"laplacian_check_off_centre", to_json(st.off_centre)},
              {"bounds", bounds},
              {"bounds_ok", st.bounds_ok},
              {"ok", st.literal.ok() && st.bounds_ok}};
  r.artifacts = {"puncture.csv", "puncture.svg"};
  return detail::finish(std::move(r), out, sw);
}

// ---- zeros ------------------------------------------------------------------

inline StageResult run_zeros(const RunConfig& cfg, const fs::path& out) {
  Stopwatch sw;
  StageResult r{"zeros", {}, {}};
  const auto cs = build_cs<double>(cfg.make_schedule(), cfg.policy(), cfg.precision_bits);
  const auto& s = cs.schedule();
  const auto pts = [](const std::vector<LatticePoint>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back({{"n", p.n}, {"j", p.j}, {"l", p.ell}, {"z", cjson(p.z)}, {"w", cjson(p.w)}});
    return a;
  };
  const auto lattice = cs.zero_lattice();
  const auto original = cs.zero_lattice_original();
  const auto checks = check_zero_lattice(cs);
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const LatticeCheck& c) { return c.ok(); });

  // Layout: one panel per level, z-plane, rates as given.
  svg::Plot plot("Zeros of the symmetrized map G (one panel per level, |w| = 2^n)", "Re z (panels offset by 3)",
                 "Im z");
  plot.equal_aspect();
  const auto idx = s.indices();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const int n = idx[i];
    const double off = 3.0 * double(i);
    svg::Points p;
    for (const auto& q : original)
      if (q.n == n) p.emplace_back(q.z.real() + off, q.z.imag());
    for (int j = 1; j <= s.original_rate(n); ++j) plot.circle(off, 0, 1.0 / j, {"#cccccc", 0.6, 0, "3,3"});
    plot.scatter(p, {svg::palette()[i % svg::palette().size()], 1, 3.5, ""},
                 detail::level_label(n, s.period(n)) + ", m=" + std::to_string(s.original_rate(n)));
  }
  write_text(out / "zeros.svg", plot.str());

  r.report = {{"schedule", to_json(s)},
              {"lattice", pts(lattice)},
              {"lattice_original_rates", pts(original)},
              {"count", lattice.size()},
              {"count_original_rates", original.size()},
              {"ok", ok}};
  r.artifacts = {"zeros.svg"};
  return detail::finish(std::move(r), out, sw);
}

// ---- dispatcher -------------------------------------------------------------

inline StageResult run_dispatcher(const RunConfig& cfg, const fs::path& out) {
  Stopwatch sw;
  StageResult r{"dispatcher", {}, {}};
  const auto s = cfg.make_schedule();
  const auto policy = cfg.policy();
  json tables = json::array();
  bool nodes_ok = true;
  for (int m : s.indices()) {
    const auto d = build_explicit_dispatcher<double>(m, double(m) * m, policy);
    json rows = json::array();
    for (int n = std::max(1, s.start_index() - 1); n <= s.end_index(); ++n) {
      const auto v = d(cplx(std::ldexp(1.0, n), 0));
      const double target = n == m ? d.M() : 0.0;
      nodes_ok = nodes_ok && std::abs(v - target) <= 1e-12 * d.M();
      rows.push_back({{"n", n}, {"node", std::ldexp(1.0, n)}, {"value", cjson(v)}, {"target", target}});
    }
    tables.push_back({{"m", m}, {"M", d.M()}, {"kind", to_string(d.kind())}, {"nodes", rows},
                      {"growth", to_json(d.growth())}});
  }
  const auto val = validate_against_dbar(cfg.dbar.J, cfg.dbar.M, cfg.dbar.solver, policy);
  const bool val_ok = val.max_numeric_error <= 1e-3 * std::max(cfg.dbar.M, 1.0) &&
                      val.residual <= cfg.dbar.solver.cg_tol;
  r.report = {{"tables", tables},
              {"nodes_ok", nodes_ok},
              {"dbar_validation", to_json(val)},
              {"dbar_validation_ok", val_ok},
              {"ok", nodes_ok && val_ok}};
  return detail::finish(std::move(r), out, sw);
}

// ---- report -----------------------------------------------------------------

inline StageResult run_report(const RunConfig& cfg, const fs::path& out) {
  StageResult r{"report", {}, {}};
  json reports = json::object(), summary = json::object();
  bool all = true;
  for (const auto& [stage, file] : stage_files()) {
    const fs::path p = out / file;
    if (!fs::exists(p)) continue;
    json j;
    try {
      j = read_json(p);
    } catch (const std::exception& e) {
      throw Error("cannot aggregate " + p.string() + ": " + e.what());
    }
    const bool ok = j.value("ok", false);
    summary[stage] = ok;
    all = all && ok;
    reports[stage] = std::move(j);
  }
  if (reports.empty()) throw Error("nothing to aggregate in " + out.string());
  r.report = {{"tool", "ordzero"},
              {"version", version()},
              {"config", to_json(cfg)},
              {"reports", reports},
              {"summary", summary},
              {"timings_file", "timings.json"},
              {"ok", all}};
  write_json(out / "run_report.json", r.report);
  r.artifacts = {"run_report.json"};
  return r;
}

using StageFn = StageResult (*)(const RunConfig&, const fs::path&);

inline const std::vector<std::pair<std::string, StageFn>>& stages() {
  static const std::vector<std::pair<std::string, StageFn>> s = {
      {"build", run_build},         {"verify", run_verify},
      {"growth", run_growth},       {"dbar-demo", run_dbar_demo},
      {"puncture-demo", run_puncture_demo}, {"zeros", run_zeros},
      {"dispatcher", run_dispatcher},   {"report", run_report}};
  return s;
}

}  // namespace ordzero
