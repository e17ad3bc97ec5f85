// Command-line interface: dispersion tables, analytic bounds, test-function
// convergence, single-coupling solves and full eigencurve sweeps, all driven
// by a JSON configuration file.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "semidirac/semidirac.hpp"

namespace fs = std::filesystem;
using namespace semidirac;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;      // empty: use config
  std::string format;       // empty: use config
};

RunConfig load_config(const CommonArgs& args) {
  std::ifstream in(args.config_path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file: " + args.config_path);
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  RunConfig cfg = parse_config(text);
  if (!args.out_dir.empty()) cfg.output.directory = args.out_dir;
  if (!args.format.empty()) {
    if (args.format == "csv") {
      cfg.output.csv = true;
      cfg.output.json_out = false;
    } else if (args.format == "json") {
      cfg.output.csv = false;
      cfg.output.json_out = true;
    } else {
      throw std::invalid_argument("--format must be csv or json");
    }
  }
  return cfg;
}

fs::path ensure_out_dir(const RunConfig& cfg) {
  const fs::path dir(cfg.output.directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
  std::cout << "wrote " << path.string() << "\n";
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int cmd_validate(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);  // throws on schema violations
  const ValidationReport report = validate_potential(cfg.potential);
  for (const auto& check : report.checks)
    std::cout << (check.passed ? "[ok]   " : "[FAIL] ") << check.name
              << (check.detail.empty() ? "" : " — " + check.detail) << "\n";
  std::cout << "config valid: delta = " << cfg.delta << ", " << cfg.epsilon_grid.size()
            << " epsilon values, basis count " << cfg.basis.count << "\n";
  return report.passed ? 0 : 1;
}

int cmd_dispersion(const CommonArgs& args, double kmax, int count) {
  const RunConfig cfg = load_config(args);
  if (!(kmax > 0.0) || count < 2) throw std::invalid_argument("need kmax > 0 and count >= 2");
  const fs::path dir = ensure_out_dir(cfg);
  std::string csv = "kx,ky,e_minus,e_plus\n";
  json rows = json::array();
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      const Vec2 k{-kmax + 2.0 * kmax * i / (count - 1), -kmax + 2.0 * kmax * j / (count - 1)};
      const auto [lo, hi] = dispersion(k, cfg.delta);
      if (cfg.output.csv)
        csv += g17(k.x) + "," + g17(k.y) + "," + g17(lo) + "," + g17(hi) + "\n";
      if (cfg.output.json_out)
        rows.push_back({{"kx", k.x}, {"ky", k.y}, {"e_minus", lo}, {"e_plus", hi}});
    }
  }
  if (cfg.output.csv) write_file(dir / "dispersion.csv", csv);
  if (cfg.output.json_out) write_file(dir / "dispersion.json", rows.dump(2) + "\n");
  return 0;
}

int cmd_bounds(const CommonArgs& args, std::optional<double> epsilon) {
  const RunConfig cfg = load_config(args);
  const fs::path dir = ensure_out_dir(cfg);
  const PotentialMoments m = potential_moments(cfg.potential, cfg.quadrature);
  const CutoffConstants cc =
      cutoff_constants(CutoffProfile(cfg.bounds.cutoff_margin), cfg.delta);
  SweepTable table;
  table.delta = cfg.delta;
  const std::vector<double> grid =
      epsilon ? std::vector<double>{*epsilon} : cfg.epsilon_grid;
  for (double eps : grid) table.bounds_rows.push_back(evaluate_bounds(m, cfg.delta, eps, cc));
  if (cfg.output.csv) write_file(dir / "bounds.csv", bounds_csv(table));
  if (cfg.output.json_out) {
    json rows = json::array();
    for (const auto& b : table.bounds_rows) rows.push_back(bounds_report_to_json(b));
    write_file(dir / "bounds.json", rows.dump(2) + "\n");
  }
  for (const auto& b : table.bounds_rows) {
    std::cout << "eps = " << b.epsilon << ": I+ = " << b.i_plus << ", I- = " << b.i_minus
              << ", count >= " << b.eigenvalue_count_lower_bound;
    if (b.envelope_h) std::cout << ", h = " << *b.envelope_h;
    std::cout << "\n";
  }
  return 0;
}

int cmd_qform(const CommonArgs& args, double epsilon, const std::string& sign) {
  const RunConfig cfg = load_config(args);
  const fs::path dir = ensure_out_dir(cfg);
  const Model model(cfg.delta, epsilon, cfg.potential);
  const SpinorSign s = sign == "minus" ? SpinorSign::Minus : SpinorSign::Plus;
  const auto table = qform_convergence(model, CutoffProfile(cfg.bounds.cutoff_margin),
                                       cfg.bounds.n_grid, s, cfg.quadrature,
                                       cfg.bounds.annulus);
  write_file(dir / "qform.csv", qform_table_csv(table));
  std::cout << "qform convergence (" << sign << " branch, eps = " << epsilon
            << "): " << (table.pass ? "pass" : "FAIL") << "\n";
  return 0;
}

int cmd_solve(const CommonArgs& args, double epsilon, bool eigenfunctions) {
  RunConfig cfg = load_config(args);
  const fs::path dir = ensure_out_dir(cfg);
  const Model model(cfg.delta, epsilon, cfg.potential);
  const RbfBasis basis =
      make_basis(cfg.basis.box, cfg.basis.count, cfg.basis.method, cfg.basis.shape);
  const BlockSystem sys = assemble(model, basis, cfg.quadrature);
  const RawSolution raw = solve_pencil(sys, cfg.solver.truncation_tol);
  const SpectralResult spec = gap_filter(raw, sys, cfg.delta, cfg.solver.residual_tol);

  std::string csv = "epsilon,index,E,residual\n";
  int index = 0;
  for (const auto& pair : spec.gap_eigenvalues) {
    csv += g17(epsilon) + "," + std::to_string(index++) + "," + g17(pair.e) + "," +
           g17(pair.residual) + "\n";
  }
  if (cfg.output.csv) write_file(dir / "eigenvalues.csv", csv);
  if (cfg.output.json_out) {
    json out;
    out["epsilon"] = epsilon;
    out["gap_eigenvalues"] = json::array();
    for (const auto& pair : spec.gap_eigenvalues)
      out["gap_eigenvalues"].push_back({{"E", pair.e}, {"residual", pair.residual}});
    out["discarded_count"] = spec.discarded.size();
    out["diagnostics"] = {{"d_condition", spec.diagnostics.d_condition},
                          {"truncation_rank", spec.diagnostics.truncation_rank},
                          {"full_rank", spec.diagnostics.full_rank}};
    write_file(dir / "eigenvalues.json", out.dump(2) + "\n");
  }

  std::cout << spec.gap_eigenvalues.size() << " gap eigenvalue(s) at eps = " << epsilon
            << " (kept " << spec.diagnostics.truncation_rank << "/"
            << spec.diagnostics.full_rank << " whitened directions)\n";
  for (const auto& pair : spec.gap_eigenvalues)
    std::cout << "  E = " << g17(pair.e) << "  residual = " << pair.residual << "\n";

  if (eigenfunctions || cfg.output.eigenfunctions) {
    const int g = cfg.output.eigenfunction_grid;
    int idx = 0;
    for (const auto& pair : spec.gap_eigenvalues) {
      const FieldGrid grid = eigenfunction_magnitude(pair.coeffs, basis, cfg.basis.box, g, g);
      char name[64];
      std::snprintf(name, sizeof(name), "eigenfunction_%03d.csv", idx++);
      write_file(dir / name, field_grid_csv(grid));
    }
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const SweepTable table = run_sweep(cfg);
  for (const auto& path : write_outputs(table, cfg)) std::cout << "wrote " << path << "\n";
  std::cout << table.rows.size() << " eigenvalue rows over " << cfg.epsilon_grid.size()
            << " epsilon values";
  if (!table.failures.empty()) std::cout << " (" << table.failures.size() << " failed)";
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bound states and analytic bounds for perturbed semi-Dirac Hamiltonians"};
  app.require_subcommand(1);

  CommonArgs common;
  double kmax = 3.0, eps_qform = 2.5;
  int kcount = 61;
  std::optional<double> eps_bounds;
  double eps_solve = 0.0;
  bool eigenfunctions = false;
  std::string sign = "plus";

  auto add_common = [&common](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path, "JSON configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", common.out_dir, "output directory (overrides config)");
    cmd->add_option("--format", common.format, "csv or json (overrides config)");
  };

  CLI::App* validate = app.add_subcommand("validate", "check the config and potential");
  add_common(validate);

  CLI::App* disp = app.add_subcommand("dispersion", "unperturbed band values on a k-grid");
  add_common(disp);
  disp->add_option("--kmax", kmax, "half-width of the k grid");
  disp->add_option("--count", kcount, "points per axis");

  CLI::App* bounds = app.add_subcommand("bounds", "analytic bounds report");
  add_common(bounds);
  bounds->add_option("--epsilon", eps_bounds, "single coupling value (default: config grid)");

  CLI::App* qf = app.add_subcommand("qform", "test-function convergence table");
  add_common(qf);
  qf->add_option("--epsilon", eps_qform, "coupling value");
  qf->add_option("--sign", sign, "spinor branch: plus or minus")
      ->check(CLI::IsMember({"plus", "minus"}));

  CLI::App* solve = app.add_subcommand("solve", "gap spectrum at one coupling value");
  add_common(solve);
  solve->add_option("--epsilon", eps_solve, "coupling value")->required();
  solve->add_flag("--eigenfunctions", eigenfunctions, "write |psi| grids");

  CLI::App* sweep = app.add_subcommand("sweep", "full eigencurve + bounds sweep");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 1;
  }

  try {
    if (validate->parsed()) return cmd_validate(common);
    if (disp->parsed()) return cmd_dispersion(common, kmax, kcount);
    if (bounds->parsed()) return cmd_bounds(common, eps_bounds);
    if (qf->parsed()) return cmd_qform(common, eps_qform, sign);
    if (solve->parsed()) return cmd_solve(common, eps_solve, eigenfunctions);
    if (sweep->parsed()) return cmd_sweep(common);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
