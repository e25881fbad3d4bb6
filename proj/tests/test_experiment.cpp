#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pqbb/experiment.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;
using namespace pqbb;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = PQBB_SOURCE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    rows.push_back(cols);
  }
  return rows;
}

bool mentions(const ConfigValidation& v, const std::string& needle) {
  for (const auto& d : v.diagnostics)
    if (d.find(needle) != std::string::npos) return true;
  return false;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("pqbb_test_" + name);
  fs::remove_all(dir);
  return dir;
}

const char* kMinimal = R"(
[parameters]
p = 0.9
q = 0.8

[function]
kind = polynomial
coefficients = 1, 2, 3

[run]
n_list = 5, 10
outputs = curves, moments

[grid]
start = 0
stop = 2
points = 5
)";

}  // namespace

TEST_CASE("well-formed figure config validates and echoes") {
  const auto v = validate_config(kSource / "configs" / "figure1.ini");
  REQUIRE(v.ok());
  const auto& cfg = *v.config;
  CHECK(cfg.schedule.at(10) == PQPair(0.9, 0.8));
  CHECK(cfg.n_list == std::vector<std::int64_t>{10, 20, 50, 100});
  CHECK(cfg.grid.points == 101);
  const auto echo = format_config(cfg);
  CHECK_THAT(echo, ContainsSubstring("coefficients = 2015, -12, 18"));
  // the echo is itself a valid config describing the same experiment
  const auto again = validate_config_text(echo);
  REQUIRE(again.ok());
  CHECK(format_config(*again.config) == echo);
}

TEST_CASE("q >= p is rejected citing the regime") {
  const auto v = validate_config_text(kMinimal, {"parameters.p=0.8", "parameters.q=0.9"});
  CHECK_FALSE(v.ok());
  CHECK(mentions(v, "0 < q < p <= 1"));
}

TEST_CASE("n = 2 with moments requested is rejected citing n > 2") {
  const auto v = validate_config_text(kMinimal, {"run.n_list=2, 5"});
  CHECK_FALSE(v.ok());
  CHECK(mentions(v, "n > 2"));
}

TEST_CASE("further validation diagnostics") {
  CHECK(mentions(validate_config_text(kMinimal, {"run.n_list=10, 5"}), "strictly increasing"));
  CHECK(mentions(validate_config_text(kMinimal, {"run.outputs=curves", "run.n_list=2, 5"}), "must exceed 2"));
  CHECK(mentions(validate_config_text(kMinimal, {"function.kind=named", "function.name=nope"}), "nope"));
  CHECK(mentions(validate_config_text(kMinimal, {"grid.points=1"}), "[grid]"));
  CHECK(mentions(validate_config_text(kMinimal, {"run.outputs=curves, pictures"}), "pictures"));
  CHECK(mentions(validate_config_text(kMinimal, {"parameters.colour=blue"}), "unknown key 'colour'"));
  CHECK(mentions(validate_config_text(kMinimal, {"parameters.p=abc"}), "expected a real number"));
  CHECK(mentions(validate_config_text(kMinimal, {"run.outputs=bounds", "function.coefficients=0,0,0,1"}),
                 "growth_bound"));
  CHECK(mentions(validate_config_text(kMinimal, {"nonsense"}), "section.key=value"));
  // several problems are all reported
  const auto many = validate_config_text(kMinimal, {"parameters.q=0.95", "run.n_list=10, 5"});
  CHECK(many.diagnostics.size() >= 2);
}

TEST_CASE("parse failures carry a line number") {
  const auto v = validate_config_text("[parameters]\np = 0.9\nthis line has no equals sign\n");
  REQUIRE_FALSE(v.ok());
  CHECK_THAT(v.diagnostics.front(), ContainsSubstring("line 3"));
  const auto missing = validate_config("/nonexistent/config.ini");
  CHECK(mentions(missing, "cannot read"));
}

TEST_CASE("schedules and defaults from config") {
  const auto v = validate_config_text(
      "[parameters]\nschedule = q_ratio\n[function]\nkind = named\nname = sin\n[run]\noutputs = convergence\n");
  REQUIRE(v.ok());
  CHECK(v.config->n_list == std::vector<std::int64_t>{10, 20, 50, 100});
  CHECK(v.config->schedule.family() == ParameterSchedule::Family::q_ratio);
  const auto ab = validate_config_text(
      "[parameters]\nschedule = alpha_beta\nalpha = 0.5\nbeta = 1.5\n[function]\nkind = named\nname = e1\n"
      "[run]\nn_list = 1, 3\noutputs = curves\n");
  CHECK(mentions(ab, "n = 1"));
}

TEST_CASE("run_experiment writes the specified CSV schema") {
  const auto v = validate_config_text(kMinimal);
  REQUIRE(v.ok());
  const auto out = scratch("schema");
  const auto report = run_experiment(*v.config, out);
  CHECK(report.exit_code == exit_success);

  const auto curves = read_csv(out / "curves.csv");
  REQUIRE(curves.size() == 6);
  CHECK(curves[0] == std::vector<std::string>{"x", "f", "D_n=5", "D_n=10"});
  CHECK(curves[2][0] == "0.5");

  const auto moments = read_csv(out / "moments.csv");
  CHECK(moments[0] == std::vector<std::string>{"n", "x", "M0", "M1", "M2", "mu1", "mu2"});
  CHECK(moments.size() == 1 + 2 * 5);

  const auto text = slurp(out / "curves.csv");
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("moments.csv values are re-derivable from the library") {
  const auto v = validate_config_text(kMinimal);
  const auto out = scratch("roundtrip");
  REQUIRE(run_experiment(*v.config, out).exit_code == 0);
  const PQPair pair(0.9, 0.8);
  for (const auto& row : read_csv(out / "moments.csv")) {
    if (row[0] == "n") continue;
    const auto n = std::stoll(row[0]);
    const double x = std::stod(row[1]);
    CHECK(std::stod(row[3]) == moments_closed(pair, 1, n, x));
    CHECK(std::stod(row[4]) == moments_closed(pair, 2, n, x));
    CHECK(std::stod(row[6]) == central_moment(pair, 2, n, x));
  }
}

TEST_CASE("curves reproduce the closed-form quadratic image") {
  for (const auto& [name, pair, c0, c1, c2] :
       {std::tuple{"figure1", PQPair(0.9, 0.8), 2015.0, -12.0, 18.0},
        std::tuple{"figure2", PQPair(0.9, 0.75), 7.0, -2.0, 25.0}}) {
    const auto v = validate_config(kSource / "configs" / (std::string(name) + ".ini"));
    REQUIRE(v.ok());
    const auto out = scratch(name);
    REQUIRE(run_experiment(*v.config, out).exit_code == 0);
    const auto rows = read_csv(out / "curves.csv");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const double x = std::stod(rows[r][0]);
      for (std::size_t j = 0; j < v.config->n_list.size(); ++j) {
        const auto n = v.config->n_list[j];
        const double expected = c2 * moments_closed(pair, 2, n, x) + c1 * moments_closed(pair, 1, n, x) + c0;
        CHECK_THAT(std::stod(rows[r][j + 2]), WithinRel(expected, 1e-8));
      }
    }
    // golden files
    for (const char* csv : {"curves.csv", "moments.csv"})
      CHECK(slurp(out / csv) == slurp(kSource / "tests" / "golden" / name / csv));
  }
}

TEST_CASE("e0 gives identically one in every operator column") {
  const auto v = validate_config_text(kMinimal, {"function.kind=named", "function.name=e0", "run.outputs=curves"});
  REQUIRE(v.ok());
  const auto out = scratch("e0");
  REQUIRE(run_experiment(*v.config, out).exit_code == 0);
  for (const auto& row : read_csv(out / "curves.csv"))
    if (row[0] != "x")
      for (std::size_t j = 2; j < row.size(); ++j) CHECK_THAT(std::stod(row[j]), WithinRel(1.0, 1e-10));
}

TEST_CASE("output is byte-identical across runs") {
  const auto v = validate_config_text(kMinimal, {"run.outputs=curves, moments, convergence, bounds", "run.kappa=1"});
  REQUIRE(v.ok());
  const auto a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(run_experiment(*v.config, a).exit_code == 0);
  REQUIRE(run_experiment(*v.config, b).exit_code == 0);
  for (const char* csv : {"curves.csv", "moments.csv", "convergence.csv", "bounds.csv"})
    CHECK(slurp(a / csv) == slurp(b / csv));
  CHECK(read_csv(a / "convergence.csv")[0] ==
        std::vector<std::string>{"n", "p_n", "q_n", "sup_error", "weighted_error", "mu2_max"});
}

TEST_CASE("non-converged evaluations become NA with exit 2") {
  const auto v = validate_config_text(
      kMinimal, {"function.kind=named", "function.name=sin", "run.outputs=curves", "policy.max_terms=3"});
  REQUIRE(v.ok());
  const auto out = scratch("partial");
  const auto report = run_experiment(*v.config, out);
  CHECK(report.exit_code == exit_partial);
  CHECK(report.flagged_cells > 0);
  CHECK(slurp(out / "curves.csv").find("NA") != std::string::npos);
}

TEST_CASE("unwritable output path is exit 1") {
  const auto v = validate_config_text(kMinimal);
  const auto blocker = scratch("blocker");
  std::ofstream(blocker) << "file";
  const auto report = run_experiment(*v.config, blocker / "sub");
  CHECK(report.exit_code == exit_config_error);
  CHECK_FALSE(report.messages.empty());
  fs::remove(blocker);
}

TEST_CASE("plot script references the CSV") {
  const auto v = validate_config_text(kMinimal, {"run.plot=true"});
  const auto out = scratch("plot");
  REQUIRE(run_experiment(*v.config, out).exit_code == 0);
  CHECK_THAT(slurp(out / "plot_curves.py"), ContainsSubstring("curves.csv"));
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.05) == "0.05");
  CHECK(format_number(2015.0) == "2015");
  CHECK(format_number(std::nan("")) == "NA");
  CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}
