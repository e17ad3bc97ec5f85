#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "semidirac/pipeline.hpp"

using namespace semidirac;
using Catch::Approx;

namespace {

const char* kMinimalConfig = R"JSON({
  "model": {
    "delta": 5,
    "potential": {
      "v12": {"type": "disk", "radius": 2, "amplitude": -1}
    }
  }
})JSON";

RunConfig tiny_sweep_config() {
  RunConfig cfg = parse_config(kMinimalConfig);
  cfg.epsilon_grid = {0.0, 2.5};
  cfg.basis.count = 64;
  cfg.basis.box = Rect::square(6.0);
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("minimal config materializes the documented defaults", "[pipeline]") {
  const RunConfig cfg = parse_config(kMinimalConfig);
  CHECK(cfg.delta == 5.0);
  CHECK(cfg.potential.v11.is_identically_zero());
  CHECK(cfg.potential.v22.is_identically_zero());
  CHECK(cfg.potential.v12.kind() == ScalarField2D::Kind::DiskIndicator);
  CHECK(cfg.potential.v12.radius() == 2.0);
  CHECK(cfg.potential.v12.amplitude() == cplx(-1.0));
  REQUIRE(cfg.epsilon_grid.size() == 21);
  CHECK(cfg.epsilon_grid.front() == 0.0);
  CHECK(cfg.epsilon_grid.back() == 5.0);
  CHECK(cfg.basis.count == 800);
  CHECK(cfg.basis.method == NodeLayout::Halton);
  CHECK(cfg.basis.box.xmin == -8.0);
  CHECK(cfg.quadrature.radial_order == 24);
  CHECK(cfg.quadrature.angular_count == 48);
  CHECK(cfg.solver.truncation_tol == 1e-10);
  CHECK(cfg.solver.residual_tol == 1e-6);
  CHECK(cfg.output.csv);
  CHECK(cfg.output.json_out);

  // The echo contains every materialized default.
  const json echo = config_to_json(cfg);
  CHECK(echo["basis"]["count"] == 800);
  CHECK(echo["epsilon_grid"].size() == 21);
}

TEST_CASE("config validation errors name the offending field", "[pipeline]") {
  CHECK_THROWS_WITH(parse_config(R"({"model": {"delta": -1}})"),
                    Catch::Matchers::ContainsSubstring("model.delta"));
  CHECK_THROWS_WITH(parse_config(R"({"model": {"delta": 5}, "unknown_key": 1})"),
                    Catch::Matchers::ContainsSubstring("unknown_key"));
  CHECK_THROWS_WITH(
      parse_config(R"({"model": {"delta": 5, "potential": {"v12": {"type": "cube"}}}})"),
      Catch::Matchers::ContainsSubstring("model.potential.v12"));
  CHECK_THROWS_WITH(
      parse_config(
          R"({"model": {"delta": 5}, "epsilon_grid": {"start": 2, "stop": 1, "count": 5}})"),
      Catch::Matchers::ContainsSubstring("epsilon_grid"));
  CHECK_THROWS_WITH(parse_config("{nope"), Catch::Matchers::ContainsSubstring("malformed"));
  CHECK_THROWS_WITH(
      parse_config(R"({"model": {"delta": 5}, "solver": {"residual_tol": 2.0}})"),
      Catch::Matchers::ContainsSubstring("solver.residual_tol"));
}

TEST_CASE("epsilon grid specifications", "[pipeline]") {
  RunConfig cfg = parse_config(
      R"({"model": {"delta": 5}, "epsilon_grid": {"start": 0, "stop": 5, "count": 21}})");
  REQUIRE(cfg.epsilon_grid.size() == 21);
  for (std::size_t i = 0; i < 21; ++i)
    CHECK(cfg.epsilon_grid[i] == Approx(0.25 * i).margin(1e-14));

  cfg = parse_config(R"({"model": {"delta": 5}, "epsilon_grid": [0, 1, 2.5]})");
  REQUIRE(cfg.epsilon_grid.size() == 3);
  CHECK(cfg.epsilon_grid[2] == 2.5);

  CHECK_THROWS_AS(parse_config(R"({"model": {"delta": 5}, "epsilon_grid": [1, 1]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"model": {"delta": 5}, "epsilon_grid": [-1, 1]})"),
                  std::invalid_argument);
}

TEST_CASE("17-digit CSV cells round-trip bit-for-bit", "[pipeline]") {
  SweepTable table;
  table.delta = 5.0;
  table.rows = {{0.1, 0, -4.9893071834712345, 1.25e-9},
                {2.5, 1, 2.9893000000000001, 3.5e-8},
                {2.5, 2, 4.8284271247461903, 7.7e-7}};
  const std::string csv = eigencurves_csv(table);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "epsilon,index,E,residual");
  for (const auto& row : table.rows) {
    std::string line;
    REQUIRE(std::getline(lines, line));
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1), c3 = line.find(',', c2 + 1);
    CHECK(std::strtod(line.substr(0, c1).c_str(), nullptr) == row.epsilon);
    CHECK(std::atoi(line.substr(c1 + 1, c2 - c1 - 1).c_str()) == row.index);
    CHECK(std::strtod(line.substr(c2 + 1, c3 - c2 - 1).c_str()) == row.e);
    CHECK(std::strtod(line.substr(c3 + 1).c_str()) == row.residual);
  }
}

TEST_CASE("empty sweep writes header-only CSVs and a valid manifest", "[pipeline]") {
  RunConfig cfg = parse_config(kMinimalConfig);
  const auto dir = std::filesystem::temp_directory_path() / "semidirac_empty_out";
  std::filesystem::remove_all(dir);
  cfg.output.directory = dir.string();

  SweepTable table;
  table.delta = cfg.delta;
  table.hash = config_hash(cfg);
  table.basis_report = {0, "halton", cfg.basis.box, 0.0, 0.0};
  const auto written = write_outputs(table, cfg);
  CHECK(written.size() >= 4);

  CHECK(slurp(dir / "eigencurves.csv") == "epsilon,index,E,residual\n");
  CHECK(slurp(dir / "bounds.csv") ==
        "epsilon,i_plus,i_minus,g_plus,g_minus,h,threshold_plus,threshold_minus\n");
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["config"]["model"]["delta"] == 5.0);
  CHECK(manifest["tool"] == "semidirac");
  const std::string plot = slurp(dir / "plot.py");
  CHECK(plot.find("eigencurves.csv") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("bounds CSV uses empty cells for absent values", "[pipeline]") {
  SweepTable table;
  table.delta = 5.0;
  BoundsReport b;
  b.epsilon = 0.0;
  b.i_plus = 0.0;
  b.i_minus = 0.0;  // nothing else defined at eps = 0
  table.bounds_rows.push_back(b);
  const std::string csv = bounds_csv(table);
  CHECK(csv.find("\n0,0,0,,,,,\n") != std::string::npos);
}

TEST_CASE("small sweep is deterministic and internally consistent", "[pipeline]") {
  const RunConfig cfg = tiny_sweep_config();
  const SweepTable a = run_sweep(cfg);
  const SweepTable b = run_sweep(cfg);
  CHECK(eigencurves_csv(a) == eigencurves_csv(b));
  CHECK(bounds_csv(a) == bounds_csv(b));
  CHECK(a.failures.empty());

  // Rows are sorted by (epsilon, E) and confined to the gap.
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const auto& row = a.rows[k];
    CHECK(std::abs(row.e) < cfg.delta);
    CHECK(row.residual <= cfg.solver.residual_tol);
    if (k > 0 && a.rows[k - 1].epsilon == row.epsilon)
      CHECK(row.e >= a.rows[k - 1].e);
  }
  // No eigenvalue rows at eps = 0 (unperturbed gap is empty).
  for (const auto& row : a.rows) CHECK(row.epsilon != 0.0);

  // First eigenvalue appearance happens below the weak-coupling threshold.
  REQUIRE_FALSE(a.bounds_rows.empty());
  const auto& bounds0 = a.bounds_rows.front();
  if (!a.rows.empty() && bounds0.threshold_plus)
    CHECK(a.rows.front().epsilon <= *bounds0.threshold_plus);

  // Bounds rows carry the closed-form I values.
  for (const auto& br : a.bounds_rows) {
    if (br.epsilon == 2.5) {
      CHECK(br.i_plus == Approx(-75.0 * M_PI).epsilon(1e-12));
      CHECK(br.i_minus == Approx(-75.0 * M_PI).epsilon(1e-12));
    }
  }
}

TEST_CASE("write_outputs emits the full artifact set", "[pipeline]") {
  RunConfig cfg = tiny_sweep_config();
  const auto dir = std::filesystem::temp_directory_path() / "semidirac_sweep_out";
  std::filesystem::remove_all(dir);
  cfg.output.directory = dir.string();
  const SweepTable table = run_sweep(cfg);
  write_outputs(table, cfg);
  CHECK(std::filesystem::exists(dir / "eigencurves.csv"));
  CHECK(std::filesystem::exists(dir / "bounds.csv"));
  CHECK(std::filesystem::exists(dir / "results.json"));
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  CHECK(std::filesystem::exists(dir / "plot.py"));
  const json results = json::parse(slurp(dir / "results.json"));
  CHECK(results["bounds"].size() == table.bounds_rows.size());
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["basis"]["count"] == cfg.basis.count);
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  std::filesystem::remove_all(dir);
}

TEST_CASE("field grid CSV has the documented columns", "[pipeline]") {
  FieldGrid grid;
  grid.xs = {0.0, 1.0};
  grid.ys = {0.0};
  grid.abs_psi = {0.5, 0.25};
  const std::string csv = field_grid_csv(grid);
  CHECK(csv == "x,y,abs_psi\n0,0,0.5\n1,0,0.25\n");
}
