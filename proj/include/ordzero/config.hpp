#pragma once

// Run configuration: strict JSON schema (unknown fields are errors), defaults
// filled in, validated before any computation.

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordzero/dbar.hpp"
#include "ordzero/dynamics.hpp"
#include "ordzero/errors.hpp"
#include "ordzero/growth.hpp"
#include "ordzero/products.hpp"
#include "ordzero/schedule.hpp"

namespace ordzero {

using json = nlohmann::json;

struct ScheduleConfig {
  std::vector<int> periods, rates;
  int start_index = 2;
};

struct TruncationConfig {
  double eps = 1e-16;
  int max_terms = 4096;
};

struct GrowthConfig {
  std::vector<double> radii = {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  SphereDensity density;
  double envelope_c = 40;  ///< fixed slope for the C_fit offset
};

struct DbarRunConfig {
  DbarConfig solver;
  std::set<int> J = {3};
  double M = 9;
};

struct PunctureConfig {
  int k_min = 2, k_max = 6;
  double h = 0.125;
  double C = 0;  ///< 0: 2^9 / estimate_c()
  std::vector<double> box = {2.5, 73, -9, 9};  ///< x0, x1, y0, y1 of the Laplacian grid
  std::vector<double> deltas = {0.5, 0.25, 0.125};
};

struct PPPConfig {
  double newton_tol = 1e-12;
  double orbit_tol = 1e-10;
};

struct RunConfig {
  ScheduleConfig schedule;
  unsigned precision_bits = 53;
  TruncationConfig truncation;
  GrowthConfig growth;
  DbarRunConfig dbar;
  PPPConfig ppp;
  PunctureConfig puncture;
  std::string output_dir = "out";

  Schedule make_schedule() const { return Schedule(schedule.periods, schedule.rates, schedule.start_index); }
  TruncationPolicy policy() const { return TruncationPolicy::from_eps(truncation.eps, truncation.max_terms); }
  PPPOptions ppp_options() const {
    PPPOptions o;
    o.newton_tol = ppp.newton_tol;
    o.orbit_tol = ppp.orbit_tol;
    o.min_fd_bits = precision_bits;
    return o;
  }
};

namespace detail {

/// Reads one JSON object, rejecting keys outside `allowed`.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path, std::initializer_list<const char*> allowed) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!ok.count(it.key())) throw ConfigError(field(it.key()), "unknown field");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) const { return j_.at(key); }

  template <class T>
  void get(const char* key, T& out) const {
    if (has(key)) out = convert<T>(j_.at(key), field(key));
  }
  template <class T>
  void require(const char* key, T& out) const {
    if (!has(key)) throw ConfigError(field(key), "required field missing");
    out = convert<T>(j_.at(key), field(key));
  }

 private:
  template <class T>
  static T convert(const json& v, const std::string& f) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(f, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(f, "expected an integer");
      const auto x = v.get<long long>();
      if constexpr (std::is_unsigned_v<T>)
        if (x < 0) throw ConfigError(f, "expected a non-negative integer");
      return static_cast<T>(x);
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(f, "expected a number");
      return v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(f, "expected a string");
      return v.get<std::string>();
    } else {
      if (!v.is_array()) throw ConfigError(f, "expected an array");
      T out;
      for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(convert<typename T::value_type>(v[i], f + "[" + std::to_string(i) + "]"));
      return out;
    }
  }

  const json& j_;
  std::string path_;
};

inline void check(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

}  // namespace detail

/// Range and consistency checks; every failure names the offending field.
inline void validate(const RunConfig& c) {
  using detail::check;
  const auto& s = c.schedule;
  check(!s.rates.empty(), "schedule.rates", "must be non-empty");
  check(!s.periods.empty(), "schedule.periods", "must be non-empty");
  check(s.periods.size() == s.rates.size(), "schedule.rates", "must have the same length as schedule.periods");
  for (int p : s.periods) check(p >= 1, "schedule.periods", "entries must be >= 1");
  for (int m : s.rates) check(m >= 1, "schedule.rates", "entries must be >= 1");
  check(s.start_index >= 1, "schedule.start_index", "must be >= 1");
  check(c.precision_bits >= 53 && c.precision_bits <= (1u << 20), "precision_bits", "must lie in [53, 2^20]");
  check(c.truncation.eps > 0 && c.truncation.eps < 1, "truncation.eps", "must lie in (0, 1)");
  check(c.truncation.max_terms >= 8, "truncation.max_terms", "must be >= 8");

  const auto& g = c.growth;
  check(g.radii.size() >= 6, "growth.radii", "needs at least 6 radii");
  for (std::size_t i = 0; i < g.radii.size(); ++i) {
    check(g.radii[i] > 0 && std::isfinite(g.radii[i]), "growth.radii", "entries must be positive");
    if (i) check(g.radii[i] > g.radii[i - 1], "growth.radii", "must be strictly increasing");
  }
  check(g.radii.back() >= 8 * g.radii.front(), "growth.radii", "must span at least 3 octaves");
  check(g.density.phi >= 32, "growth.density.phi", "must be >= 32");
  check(g.density.psi >= 32, "growth.density.psi", "must be >= 32");
  check(g.density.s >= 1, "growth.density.s", "must be >= 1");
  check(g.envelope_c > 0, "growth.envelope_c", "must be positive");

  const auto& d = c.dbar.solver;
  check(d.grid_n >= 4, "dbar.grid_n", "must be >= 4");
  check(d.box_half_width > 0, "dbar.box_half_width", "must be positive");
  check(d.k_min >= 2, "dbar.k_min", "must be >= 2");
  check(d.k_max >= d.k_min, "dbar.k_max", "must be >= dbar.k_min");
  check(d.weight_cap > 1, "dbar.weight_cap", "must be > 1");
  check(d.weight_floor > 0 && d.weight_floor < 1, "dbar.weight_floor", "must lie in (0, 1)");
  check(d.weight_C > 1, "dbar.weight_C", "must be > 1");
  check(d.cg_tol > 0 && d.cg_tol < 1, "dbar.cg_tol", "must lie in (0, 1)");
  check(d.cg_max_iter >= 1, "dbar.cg_max_iter", "must be >= 1");
  for (int k : c.dbar.J) check(k >= d.k_min && k <= d.k_max, "dbar.J", "entries must lie in [k_min, k_max]");
  check(c.dbar.M >= 0, "dbar.M", "must be non-negative");
  if (!c.dbar.J.empty())
    check(c.dbar.M <= double(*c.dbar.J.begin()) * *c.dbar.J.begin(), "dbar.M", "must be <= (min J)^2");

  check(c.ppp.newton_tol > 0, "ppp.newton_tol", "must be positive");
  check(c.ppp.orbit_tol > 0, "ppp.orbit_tol", "must be positive");

  const auto& p = c.puncture;
  check(p.k_min >= 2, "puncture.k_min", "must be >= 2");
  check(p.k_max >= p.k_min && p.k_max <= 20, "puncture.k_max", "must lie in [k_min, 20]");
  check(p.h > 0, "puncture.h", "must be positive");
  check(p.C == 0 || p.C > 1, "puncture.C", "must be > 1 (or 0 for the default)");
  check(p.box.size() == 4 && p.box[1] > p.box[0] && p.box[3] > p.box[2], "puncture.box",
        "must be [x0, x1, y0, y1] with x1 > x0, y1 > y0");
  check(!p.deltas.empty(), "puncture.deltas", "must be non-empty");
  for (double x : p.deltas) check(x > 0 && x < 1, "puncture.deltas", "entries must lie in (0, 1)");
  check(!c.output_dir.empty(), "output_dir", "must be non-empty");
}

inline RunConfig parse_config(const json& j) {
  using detail::ObjectReader;
  RunConfig c;
  const ObjectReader root(j, "",
                          {"schedule", "precision_bits", "truncation", "growth", "dbar", "ppp", "puncture", "output_dir"});
  if (!root.has("schedule")) throw ConfigError("schedule", "required field missing");
  {
    const ObjectReader r(root.at("schedule"), "schedule", {"periods", "rates", "start_index"});
    r.require("periods", c.schedule.periods);
    r.require("rates", c.schedule.rates);
    r.get("start_index", c.schedule.start_index);
  }
  root.get("precision_bits", c.precision_bits);
  if (root.has("truncation")) {
    const ObjectReader r(root.at("truncation"), "truncation", {"eps", "max_terms"});
    r.get("eps", c.truncation.eps);
    r.get("max_terms", c.truncation.max_terms);
  }
  if (root.has("growth")) {
    const ObjectReader r(root.at("growth"), "growth", {"radii", "density", "envelope_c"});
    r.get("radii", c.growth.radii);
    r.get("envelope_c", c.growth.envelope_c);
    if (r.has("density")) {
      const ObjectReader d(r.at("density"), "growth.density", {"phi", "psi", "s"});
      d.get("phi", c.growth.density.phi);
      d.get("psi", c.growth.density.psi);
      d.get("s", c.growth.density.s);
    }
  }
  if (root.has("dbar")) {
    const ObjectReader r(root.at("dbar"), "dbar",
                         {"grid_n", "box_half_width", "box_center", "k_min", "k_max", "weight_cap", "weight_floor",
                          "weight_C", "cg_tol", "cg_max_iter", "J", "M"});
    auto& d = c.dbar.solver;
    r.get("grid_n", d.grid_n);
    r.get("box_half_width", d.box_half_width);
    if (r.has("box_center")) {
      std::vector<double> bc;
      r.get("box_center", bc);
      detail::check(bc.size() == 2, "dbar.box_center", "must be [x, y]");
      d.box_center = {bc[0], bc[1]};
    }
    r.get("k_min", d.k_min);
    r.get("k_max", d.k_max);
    r.get("weight_cap", d.weight_cap);
    r.get("weight_floor", d.weight_floor);
    r.get("weight_C", d.weight_C);
    r.get("cg_tol", d.cg_tol);
    r.get("cg_max_iter", d.cg_max_iter);
    if (r.has("J")) {
      std::vector<int> J;
      r.get("J", J);
      c.dbar.J = std::set<int>(J.begin(), J.end());
      detail::check(c.dbar.J.size() == J.size(), "dbar.J", "entries must be distinct");
    }
    r.get("M", c.dbar.M);
  }
  if (root.has("ppp")) {
    const ObjectReader r(root.at("ppp"), "ppp", {"newton_tol", "orbit_tol"});
    r.get("newton_tol", c.ppp.newton_tol);
    r.get("orbit_tol", c.ppp.orbit_tol);
  }
  if (root.has("puncture")) {
    const ObjectReader r(root.at("puncture"), "puncture", {"k_min", "k_max", "h", "C", "box", "deltas"});
    r.get("k_min", c.puncture.k_min);
    r.get("k_max", c.puncture.k_max);
    r.get("h", c.puncture.h);
    r.get("C", c.puncture.C);
    r.get("box", c.puncture.box);
    r.get("deltas", c.puncture.deltas);
  }
  root.get("output_dir", c.output_dir);
  validate(c);
  return c;
}

inline RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Echo with every default filled in; parse_config(to_json(c)) == c.
inline json to_json(const RunConfig& c) {
  const auto& d = c.dbar.solver;
  return json{
      {"schedule", {{"periods", c.schedule.periods}, {"rates", c.schedule.rates}, {"start_index", c.schedule.start_index}}},
      {"precision_bits", c.precision_bits},
      {"truncation", {{"eps", c.truncation.eps}, {"max_terms", c.truncation.max_terms}}},
      {"growth",
       {{"radii", c.growth.radii},
        {"density", {{"phi", c.growth.density.phi}, {"psi", c.growth.density.psi}, {"s", c.growth.density.s}}},
        {"envelope_c", c.growth.envelope_c}}},
      {"dbar",
       {{"grid_n", d.grid_n},
        {"box_half_width", d.box_half_width},
        {"box_center", {d.box_center.real(), d.box_center.imag()}},
        {"k_min", d.k_min},
        {"k_max", d.k_max},
        {"weight_cap", d.weight_cap},
        {"weight_floor", d.weight_floor},
        {"weight_C", d.weight_C},
        {"cg_tol", d.cg_tol},
        {"cg_max_iter", d.cg_max_iter},
        {"J", std::vector<int>(c.dbar.J.begin(), c.dbar.J.end())},
        {"M", c.dbar.M}}},
      {"ppp", {{"newton_tol", c.ppp.newton_tol}, {"orbit_tol", c.ppp.orbit_tol}}},
      {"puncture",
       {{"k_min", c.puncture.k_min},
        {"k_max", c.puncture.k_max},
        {"h", c.puncture.h},
        {"C", c.puncture.C},
        {"box", c.puncture.box},
        {"deltas", c.puncture.deltas}}},
      {"output_dir", c.output_dir}};
}

}  // namespace ordzero
