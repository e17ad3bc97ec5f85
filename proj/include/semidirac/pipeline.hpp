#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "semidirac/assembly.hpp"
#include "semidirac/bounds.hpp"
#include "semidirac/eigensolve.hpp"
#include "semidirac/model.hpp"
#include "semidirac/rbf.hpp"
#include "semidirac/testfn.hpp"

namespace semidirac {

using json = nlohmann::json;

struct BasisConfig {
  int count = 800;
  NodeLayout method = NodeLayout::Halton;
  Rect box = Rect::square(8.0);
  std::optional<double> shape;
};

struct SolverConfig {
  double truncation_tol = 1e-10;
  double residual_tol = 1e-6;
};

struct BoundsConfig {
  double cutoff_margin = 0.1;
  std::vector<double> n_grid = {8.0, 16.0, 32.0};
  AnnulusQuad annulus;
};

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool json_out = true;
  bool eigenfunctions = false;
  int eigenfunction_grid = 101;
};

/// Fully materialised run configuration; parse_config fills every default
/// and the manifest echoes the result back.
struct RunConfig {
  double delta = 5.0;
  Potential potential;
  std::vector<double> epsilon_grid;
  BasisConfig basis;
  QuadControls quadrature;
  SolverConfig solver;
  BoundsConfig bounds;
  OutputConfig output;
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& path, const std::string& message) {
  throw std::invalid_argument("config: " + path + ": " + message);
}

inline void require_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      config_error(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
}

inline double get_number(const json& obj, const std::string& path, const std::string& key,
                         std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    config_error(path + "." + key, "missing required number");
  }
  if (!obj[key].is_number()) config_error(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

inline cplx parse_amplitude(const json& j, const std::string& path) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  config_error(path, "amplitude must be a number or [re, im]");
}

inline Vec2 parse_point(const json& j, const std::string& path) {
  if (!(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()))
    config_error(path, "expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline ScalarField2D parse_field(const json& j, const std::string& path) {
  if (!j.is_object()) config_error(path, "expected a field object");
  if (!j.contains("type") || !j["type"].is_string()) config_error(path + ".type", "missing type");
  const std::string type = j["type"].get<std::string>();
  if (type == "zero") {
    require_keys(j, path, {"type"});
    return ScalarField2D::zero();
  }
  if (type == "disk") {
    require_keys(j, path, {"type", "center", "radius", "amplitude"});
    const Vec2 center = j.contains("center") ? parse_point(j["center"], path + ".center") : Vec2{};
    const double radius = get_number(j, path, "radius");
    if (!(radius > 0.0)) config_error(path + ".radius", "must be > 0");
    if (!j.contains("amplitude")) config_error(path + ".amplitude", "missing amplitude");
    return ScalarField2D::disk_indicator(center, radius,
                                         parse_amplitude(j["amplitude"], path + ".amplitude"));
  }
  if (type == "gaussian") {
    require_keys(j, path, {"type", "center", "width", "amplitude"});
    const Vec2 center = j.contains("center") ? parse_point(j["center"], path + ".center") : Vec2{};
    const double width = get_number(j, path, "width");
    if (!(width > 0.0)) config_error(path + ".width", "must be > 0");
    if (!j.contains("amplitude")) config_error(path + ".amplitude", "missing amplitude");
    return ScalarField2D::gaussian_decay(center, width,
                                         parse_amplitude(j["amplitude"], path + ".amplitude"));
  }
  if (type == "sum") {
    require_keys(j, path, {"type", "terms"});
    if (!j.contains("terms") || !j["terms"].is_array())
      config_error(path + ".terms", "expected an array of fields");
    std::vector<ScalarField2D> terms;
    int idx = 0;
    for (const auto& t : j["terms"])
      terms.push_back(parse_field(t, path + ".terms[" + std::to_string(idx++) + "]"));
    return ScalarField2D::sum(std::move(terms));
  }
  config_error(path + ".type", "unknown field type '" + type + "'");
}

inline std::vector<double> parse_epsilon_grid(const json& j, const std::string& path) {
  std::vector<double> grid;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) config_error(path, "grid entries must be numbers");
      grid.push_back(v.get<double>());
    }
  } else if (j.is_object()) {
    require_keys(j, path, {"start", "stop", "count"});
    const double start = get_number(j, path, "start");
    const double stop = get_number(j, path, "stop");
    if (!j.contains("count") || !j["count"].is_number_integer())
      config_error(path + ".count", "expected an integer");
    const int count = j["count"].get<int>();
    if (count < 1) config_error(path + ".count", "must be >= 1");
    if (count == 1) {
      grid.push_back(start);
    } else {
      for (int i = 0; i < count; ++i)
        grid.push_back(start + (stop - start) * i / (count - 1));
    }
  } else {
    config_error(path, "expected an array or {start, stop, count}");
  }
  if (grid.empty()) config_error(path, "must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0) config_error(path, "epsilon values must be >= 0");
    if (i > 0 && !(grid[i] > grid[i - 1])) config_error(path, "must be strictly increasing");
  }
  return grid;
}

inline Rect parse_box(const json& j, const std::string& path) {
  if (j.is_object() && j.contains("half_width")) {
    require_keys(j, path, {"half_width"});
    const double hw = get_number(j, path, "half_width");
    if (!(hw > 0.0)) config_error(path + ".half_width", "must be > 0");
    return Rect::square(hw);
  }
  if (j.is_object()) {
    require_keys(j, path, {"xmin", "xmax", "ymin", "ymax"});
    const double x0 = get_number(j, path, "xmin"), x1 = get_number(j, path, "xmax");
    const double y0 = get_number(j, path, "ymin"), y1 = get_number(j, path, "ymax");
    if (!(x1 > x0 && y1 > y0)) config_error(path, "degenerate box");
    return Rect(x0, x1, y0, y1);
  }
  config_error(path, "expected {half_width} or {xmin, xmax, ymin, ymax}");
}

}  // namespace detail

/// Parses and validates a JSON configuration document.  Unknown keys are
/// rejected; all defaults are materialised into the returned RunConfig.
inline RunConfig parse_config(const json& doc) {
  using detail::config_error;
  using detail::get_number;
  using detail::require_keys;
  if (!doc.is_object()) config_error("", "top-level document must be an object");
  require_keys(doc, "",
               {"model", "epsilon_grid", "basis", "quadrature", "solver", "bounds", "output"});
  RunConfig cfg;

  if (!doc.contains("model") || !doc["model"].is_object())
    config_error("model", "missing required section");
  const json& model = doc["model"];
  require_keys(model, "model", {"delta", "potential"});
  cfg.delta = get_number(model, "model", "delta");
  if (!(cfg.delta > 0.0)) config_error("model.delta", "delta must be positive");
  if (model.contains("potential")) {
    const json& pot = model["potential"];
    if (!pot.is_object()) config_error("model.potential", "expected an object");
    require_keys(pot, "model.potential", {"v11", "v22", "v12"});
    if (pot.contains("v11"))
      cfg.potential.v11 = detail::parse_field(pot["v11"], "model.potential.v11");
    if (pot.contains("v22"))
      cfg.potential.v22 = detail::parse_field(pot["v22"], "model.potential.v22");
    if (pot.contains("v12"))
      cfg.potential.v12 = detail::parse_field(pot["v12"], "model.potential.v12");
  }
  const ValidationReport v = validate_potential(cfg.potential);
  if (!v.passed) config_error("model.potential", "invalid potential: " + v.first_failure);

  if (doc.contains("epsilon_grid")) {
    cfg.epsilon_grid = detail::parse_epsilon_grid(doc["epsilon_grid"], "epsilon_grid");
  } else {
    cfg.epsilon_grid = detail::parse_epsilon_grid(
        json{{"start", 0.0}, {"stop", 5.0}, {"count", 21}}, "epsilon_grid");
  }

  if (doc.contains("basis")) {
    const json& b = doc["basis"];
    if (!b.is_object()) config_error("basis", "expected an object");
    require_keys(b, "basis", {"count", "method", "box", "shape"});
    cfg.basis.count = static_cast<int>(get_number(b, "basis", "count", cfg.basis.count));
    if (cfg.basis.count < 1) config_error("basis.count", "must be >= 1");
    if (b.contains("method")) {
      const std::string m = b["method"].is_string() ? b["method"].get<std::string>() : "";
      if (m == "halton")
        cfg.basis.method = NodeLayout::Halton;
      else if (m == "grid")
        cfg.basis.method = NodeLayout::Grid;
      else
        config_error("basis.method", "expected 'halton' or 'grid'");
    }
    if (b.contains("box")) cfg.basis.box = detail::parse_box(b["box"], "basis.box");
    if (b.contains("shape")) {
      const double s = get_number(b, "basis", "shape");
      if (!(s > 0.0)) config_error("basis.shape", "must be > 0");
      cfg.basis.shape = s;
    }
  }

  if (doc.contains("quadrature")) {
    const json& q = doc["quadrature"];
    require_keys(q, "quadrature", {"radial_order", "angular_count", "tensor_order", "tolerance"});
    cfg.quadrature.radial_order =
        static_cast<int>(get_number(q, "quadrature", "radial_order", cfg.quadrature.radial_order));
    cfg.quadrature.angular_count = static_cast<int>(
        get_number(q, "quadrature", "angular_count", cfg.quadrature.angular_count));
    cfg.quadrature.tensor_order =
        static_cast<int>(get_number(q, "quadrature", "tensor_order", cfg.quadrature.tensor_order));
    cfg.quadrature.tolerance =
        get_number(q, "quadrature", "tolerance", cfg.quadrature.tolerance);
    if (cfg.quadrature.radial_order < 1 || cfg.quadrature.angular_count < 1 ||
        cfg.quadrature.tensor_order < 1)
      config_error("quadrature", "orders must be >= 1");
    if (!(cfg.quadrature.tolerance > 0.0 && cfg.quadrature.tolerance < 1.0))
      config_error("quadrature.tolerance", "must lie in (0, 1)");
  }

  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    require_keys(s, "solver", {"truncation_tol", "residual_tol"});
    cfg.solver.truncation_tol =
        get_number(s, "solver", "truncation_tol", cfg.solver.truncation_tol);
    cfg.solver.residual_tol = get_number(s, "solver", "residual_tol", cfg.solver.residual_tol);
    if (!(cfg.solver.truncation_tol > 0.0 && cfg.solver.truncation_tol < 1.0))
      config_error("solver.truncation_tol", "must lie in (0, 1)");
    if (!(cfg.solver.residual_tol > 0.0 && cfg.solver.residual_tol < 1.0))
      config_error("solver.residual_tol", "must lie in (0, 1)");
  }

  if (doc.contains("bounds")) {
    const json& b = doc["bounds"];
    require_keys(b, "bounds", {"cutoff_margin", "n_grid", "annulus_t_order", "annulus_theta_count"});
    cfg.bounds.cutoff_margin = get_number(b, "bounds", "cutoff_margin", cfg.bounds.cutoff_margin);
    if (!(cfg.bounds.cutoff_margin > 0.0 && cfg.bounds.cutoff_margin < 0.5))
      config_error("bounds.cutoff_margin", "must lie in (0, 0.5)");
    if (b.contains("n_grid")) {
      if (!b["n_grid"].is_array()) config_error("bounds.n_grid", "expected an array");
      cfg.bounds.n_grid.clear();
      for (const auto& x : b["n_grid"]) {
        if (!x.is_number()) config_error("bounds.n_grid", "entries must be numbers");
        cfg.bounds.n_grid.push_back(x.get<double>());
      }
    }
    cfg.bounds.annulus.t_order = static_cast<int>(
        get_number(b, "bounds", "annulus_t_order", cfg.bounds.annulus.t_order));
    cfg.bounds.annulus.theta_count = static_cast<int>(
        get_number(b, "bounds", "annulus_theta_count", cfg.bounds.annulus.theta_count));
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    require_keys(o, "output", {"directory", "formats", "eigenfunctions", "eigenfunction_grid"});
    if (o.contains("directory")) {
      if (!o["directory"].is_string()) config_error("output.directory", "expected a string");
      cfg.output.directory = o["directory"].get<std::string>();
    }
    if (o.contains("formats")) {
      if (!o["formats"].is_array()) config_error("output.formats", "expected an array");
      cfg.output.csv = false;
      cfg.output.json_out = false;
      for (const auto& f : o["formats"]) {
        const std::string name = f.is_string() ? f.get<std::string>() : "";
        if (name == "csv")
          cfg.output.csv = true;
        else if (name == "json")
          cfg.output.json_out = true;
        else
          config_error("output.formats", "unknown format '" + name + "'");
      }
    }
    if (o.contains("eigenfunctions")) {
      if (!o["eigenfunctions"].is_boolean()) config_error("output.eigenfunctions", "expected a bool");
      cfg.output.eigenfunctions = o["eigenfunctions"].get<bool>();
    }
    if (o.contains("eigenfunction_grid")) {
      cfg.output.eigenfunction_grid =
          static_cast<int>(get_number(o, "output", "eigenfunction_grid", 101));
      if (cfg.output.eigenfunction_grid < 2)
        config_error("output.eigenfunction_grid", "must be >= 2");
    }
  }

  return cfg;
}

inline RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

namespace detail {

inline json field_to_json(const ScalarField2D& f) {
  using Kind = ScalarField2D::Kind;
  json j;
  switch (f.kind()) {
    case Kind::Zero:
      j["type"] = "zero";
      break;
    case Kind::DiskIndicator:
      j["type"] = "disk";
      j["center"] = {f.center().x, f.center().y};
      j["radius"] = f.radius();
      j["amplitude"] = {f.amplitude().real(), f.amplitude().imag()};
      break;
    case Kind::GaussianDecay:
      j["type"] = "gaussian";
      j["center"] = {f.center().x, f.center().y};
      j["width"] = f.width();
      j["amplitude"] = {f.amplitude().real(), f.amplitude().imag()};
      break;
    case Kind::Sum: {
      j["type"] = "sum";
      j["terms"] = json::array();
      for (const auto& t : f.terms()) j["terms"].push_back(field_to_json(t));
      break;
    }
  }
  return j;
}

}  // namespace detail

/// Canonical echo of a config with every default materialised.
inline json config_to_json(const RunConfig& cfg) {
  json j;
  j["model"]["delta"] = cfg.delta;
  j["model"]["potential"]["v11"] = detail::field_to_json(cfg.potential.v11);
  j["model"]["potential"]["v22"] = detail::field_to_json(cfg.potential.v22);
  j["model"]["potential"]["v12"] = detail::field_to_json(cfg.potential.v12);
  j["epsilon_grid"] = cfg.epsilon_grid;
  j["basis"]["count"] = cfg.basis.count;
  j["basis"]["method"] = cfg.basis.method == NodeLayout::Halton ? "halton" : "grid";
  j["basis"]["box"] = {{"xmin", cfg.basis.box.xmin},
                       {"xmax", cfg.basis.box.xmax},
                       {"ymin", cfg.basis.box.ymin},
                       {"ymax", cfg.basis.box.ymax}};
  if (cfg.basis.shape) j["basis"]["shape"] = *cfg.basis.shape;
  j["quadrature"] = {{"radial_order", cfg.quadrature.radial_order},
                     {"angular_count", cfg.quadrature.angular_count},
                     {"tensor_order", cfg.quadrature.tensor_order},
                     {"tolerance", cfg.quadrature.tolerance}};
  j["solver"] = {{"truncation_tol", cfg.solver.truncation_tol},
                 {"residual_tol", cfg.solver.residual_tol}};
  j["bounds"] = {{"cutoff_margin", cfg.bounds.cutoff_margin},
                 {"n_grid", cfg.bounds.n_grid},
                 {"annulus_t_order", cfg.bounds.annulus.t_order},
                 {"annulus_theta_count", cfg.bounds.annulus.theta_count}};
  json formats = json::array();
  if (cfg.output.csv) formats.push_back("csv");
  if (cfg.output.json_out) formats.push_back("json");
  j["output"] = {{"directory", cfg.output.directory},
                 {"formats", formats},
                 {"eigenfunctions", cfg.output.eigenfunctions},
                 {"eigenfunction_grid", cfg.output.eigenfunction_grid}};
  return j;
}

/// FNV-1a hash of the canonical config serialisation.
inline std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string s = config_to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct EigenRow {
  double epsilon;
  int index;
  double e;
  double residual;
};

struct SweepFailure {
  double epsilon;
  std::string message;
};

struct BasisReport {
  int count = 0;
  std::string method;
  Rect box = Rect::square(1.0);
  double shape = 0.0;
  double fill_distance = 0.0;
};

struct SweepTable {
  std::vector<EigenRow> rows;              // sorted by (epsilon, E)
  std::vector<BoundsReport> bounds_rows;   // one per epsilon
  std::vector<SweepFailure> failures;
  BasisReport basis_report;
  double delta = 0.0;
  std::uint64_t hash = 0;
};

/// Runs the full epsilon sweep: kernels are assembled once, each coupling
/// value is materialised, solved and gap-filtered, and the analytic bounds
/// are evaluated on the shared moments.  Per-epsilon failures are recorded
/// and the sweep continues (partial results are valid outputs).
inline SweepTable run_sweep(const RunConfig& cfg) {
  SweepTable table;
  table.delta = cfg.delta;
  table.hash = config_hash(cfg);

  const RbfBasis basis = make_basis(cfg.basis.box, cfg.basis.count, cfg.basis.method,
                                    cfg.basis.shape);
  table.basis_report = {basis.size(),
                        cfg.basis.method == NodeLayout::Halton ? "halton" : "grid", basis.box,
                        basis.shape, fill_distance(basis.nodes, basis.box)};

  const KernelMatrices kernels = assemble_kernels(cfg.potential, basis, cfg.quadrature);
  const PotentialMoments moments = potential_moments(cfg.potential, cfg.quadrature);
  const CutoffProfile profile(cfg.bounds.cutoff_margin);
  const CutoffConstants constants = cutoff_constants(profile, cfg.delta);

  for (double eps : cfg.epsilon_grid) {
    table.bounds_rows.push_back(evaluate_bounds(moments, cfg.delta, eps, constants));
    try {
      const BlockSystem sys = materialize(kernels, basis, cfg.delta, eps);
      const RawSolution raw = solve_pencil(sys, cfg.solver.truncation_tol);
      const SpectralResult spec = gap_filter(raw, sys, cfg.delta, cfg.solver.residual_tol);
      int index = 0;
      for (const auto& pair : spec.gap_eigenvalues)
        table.rows.push_back({eps, index++, pair.e, pair.residual});
    } catch (const std::exception& e) {
      table.failures.push_back({eps, e.what()});
    }
  }
  return table;
}

namespace detail {

inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string opt_cell(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "";
  return format_g17(*v);
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_outputs: cannot open " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write_outputs: write failed for " + path.string());
}

}  // namespace detail

/// eigencurves.csv body (header is part of the contract).
inline std::string eigencurves_csv(const SweepTable& table) {
  std::string out = "epsilon,index,E,residual\n";
  for (const auto& r : table.rows)
    out += detail::format_g17(r.epsilon) + "," + std::to_string(r.index) + "," +
           detail::format_g17(r.e) + "," + detail::format_g17(r.residual) + "\n";
  return out;
}

/// bounds.csv body; absent quantities serialise as empty cells.
inline std::string bounds_csv(const SweepTable& table) {
  std::string out = "epsilon,i_plus,i_minus,g_plus,g_minus,h,threshold_plus,threshold_minus\n";
  for (const auto& b : table.bounds_rows)
    out += detail::format_g17(b.epsilon) + "," + detail::format_g17(b.i_plus) + "," +
           detail::format_g17(b.i_minus) + "," + detail::opt_cell(b.g_plus) + "," +
           detail::opt_cell(b.g_minus) + "," + detail::opt_cell(b.envelope_h) + "," +
           detail::opt_cell(b.threshold_plus) + "," + detail::opt_cell(b.threshold_minus) + "\n";
  return out;
}

inline json bounds_report_to_json(const BoundsReport& b) {
  json j;
  j["epsilon"] = b.epsilon;
  j["moments"] = {{"mean_re_v12", b.moments.mean_re_v12},
                  {"norm2_v11", b.moments.norm2_v11},
                  {"norm2_v12", b.moments.norm2_v12},
                  {"norm2_v22", b.moments.norm2_v22}};
  j["i_plus"] = b.i_plus;
  j["i_minus"] = b.i_minus;
  j["sufficient_plus"] = b.sufficient_plus;
  j["sufficient_minus"] = b.sufficient_minus;
  j["nonempty"] = b.nonempty;
  j["eigenvalue_count_lower_bound"] = b.eigenvalue_count_lower_bound;
  auto put_opt = [&](const char* key, const std::optional<double>& v) {
    if (v && std::isfinite(*v))
      j[key] = *v;
    else
      j[key] = nullptr;
  };
  put_opt("threshold_plus", b.threshold_plus);
  put_opt("threshold_minus", b.threshold_minus);
  put_opt("coupling_lower_bound", b.coupling_bound);
  if (!b.coupling_note.empty()) j["coupling_note"] = b.coupling_note;
  j["cutoff_constants"] = {{"c1", b.constants.c1}, {"c2", b.constants.c2}, {"c", b.constants.c},
                           {"sup1", b.constants.sup1}, {"sup2", b.constants.sup2}};
  put_opt("n_crit_plus", b.n_crit_plus);
  put_opt("n_crit_minus", b.n_crit_minus);
  put_opt("g_plus", b.g_plus);
  put_opt("g_minus", b.g_minus);
  put_opt("h", b.envelope_h);
  if (!b.envelope_note.empty()) j["envelope_note"] = b.envelope_note;
  put_opt("asymptotic_log_abs_g", b.asymptotic_log_abs_g);
  return j;
}

/// Self-contained plot script overlaying blue eigencurves and red +-h
/// envelopes from the emitted CSV files.
inline std::string plot_script_text() {
  return R"PY(#!/usr/bin/env python3
"""Plot eigencurves (blue) and the +-h bound envelope (red) from this run."""
import csv
import os
import sys

here = os.path.dirname(os.path.abspath(__file__))

def read(path):
    with open(os.path.join(here, path), newline="") as f:
        return list(csv.DictReader(f))

eigen = read("eigencurves.csv")
bounds = read("bounds.csv")

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

fig, ax = plt.subplots(figsize=(7, 5))
eps = [float(r["epsilon"]) for r in eigen]
ev = [float(r["E"]) for r in eigen]
ax.plot(eps, ev, "b.", markersize=4, label="eigenvalues E")

h_eps = [float(r["epsilon"]) for r in bounds if r["h"]]
h_val = [float(r["h"]) for r in bounds if r["h"]]
if h_val:
    ax.plot(h_eps, h_val, "r-", label="+h bound")
    ax.plot(h_eps, [-v for v in h_val], "r-", label="-h bound")

ax.set_xlabel("epsilon")
ax.set_ylabel("E")
ax.legend(loc="best")
out = os.path.join(here, "eigencurves.png")
fig.savefig(out, dpi=150)
print(out)
)PY";
}

/// Writes the outputs of a sweep: CSV tables, optional JSON mirror, the run
/// manifest (config echo + provenance) and the plot script.  Returns the
/// paths written.
inline std::vector<std::string> write_outputs(const SweepTable& table, const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output.directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("write_outputs: cannot create " + dir.string());

  std::vector<std::string> written;
  auto emit = [&](const fs::path& p, const std::string& text) {
    detail::write_text_file(p, text);
    written.push_back(p.string());
  };

  if (cfg.output.csv) {
    emit(dir / "eigencurves.csv", eigencurves_csv(table));
    emit(dir / "bounds.csv", bounds_csv(table));
  }
  if (cfg.output.json_out) {
    json results;
    results["eigencurves"] = json::array();
    for (const auto& r : table.rows)
      results["eigencurves"].push_back(
          {{"epsilon", r.epsilon}, {"index", r.index}, {"E", r.e}, {"residual", r.residual}});
    results["bounds"] = json::array();
    for (const auto& b : table.bounds_rows) results["bounds"].push_back(bounds_report_to_json(b));
    emit(dir / "results.json", results.dump(2) + "\n");
  }

  json manifest;
  manifest["tool"] = "semidirac";
  manifest["config"] = config_to_json(cfg);
  char hashbuf[32];
  std::snprintf(hashbuf, sizeof(hashbuf), "%016llx",
                static_cast<unsigned long long>(table.hash));
  manifest["config_hash"] = hashbuf;
  manifest["basis"] = {{"count", table.basis_report.count},
                       {"method", table.basis_report.method},
                       {"box",
                        {{"xmin", table.basis_report.box.xmin},
                         {"xmax", table.basis_report.box.xmax},
                         {"ymin", table.basis_report.box.ymin},
                         {"ymax", table.basis_report.box.ymax}}},
                       {"shape", table.basis_report.shape},
                       {"fill_distance", table.basis_report.fill_distance}};
  manifest["delta"] = table.delta;
  manifest["failures"] = json::array();
  for (const auto& f : table.failures)
    manifest["failures"].push_back({{"epsilon", f.epsilon}, {"message", f.message}});
  emit(dir / "manifest.json", manifest.dump(2) + "\n");
  emit(dir / "plot.py", plot_script_text());
  return written;
}

/// Eigenfunction grid CSV (columns x,y,abs_psi).
inline std::string field_grid_csv(const FieldGrid& grid) {
  std::string out = "x,y,abs_psi\n";
  for (std::size_t j = 0; j < grid.ys.size(); ++j)
    for (std::size_t i = 0; i < grid.xs.size(); ++i)
      out += detail::format_g17(grid.xs[i]) + "," + detail::format_g17(grid.ys[j]) + "," +
             detail::format_g17(grid.abs_psi[j * grid.xs.size() + i]) + "\n";
  return out;
}

}  // namespace semidirac
