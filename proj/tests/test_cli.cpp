#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "macrobell/bell.hpp"
#include "macrobell/states.hpp"
#include "macrobell/version.hpp"

using namespace macrobell;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::path("cli_test_tmp");
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = std::string(MACROBELL_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

// First data row whose leading field equals key; fields split on ','.
std::vector<double> csv_row(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind(key + ",", 0) != 0) continue;
    std::vector<double> fields;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) fields.push_back(std::strtod(cell.c_str(), nullptr));
    return fields;
  }
  return {};
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("fig2 --help").exit_code == 0);
  CHECK(run_cli("fig2").exit_code == 2);
  CHECK(run_cli("fig3 --alpha 10").exit_code == 2);
  CHECK(run_cli("eval --mode bogus --sigma 0").exit_code == 2);
  CHECK(run_cli("eval --mode quadrature --sigma 0 --angles 0,1,2").exit_code == 2);
  CHECK(run_cli("eval --mode quadrature --sigma -1").exit_code == 2);
  CHECK(run_cli("eval --mode exact --sigma 0 --alpha 20").exit_code == 2);
  CHECK(run_cli("eval --mode exact --sigma 0 --alpha 3 --eta 0.9").exit_code == 2);
}

TEST_CASE("headers carry the run configuration") {
  RunResult r = run_cli("eval --mode quadrature --sigma 0");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("# macrobell ", 0) == 0);
  CHECK(r.out.find(kVersion) != std::string::npos);
  CHECK(r.out.find("mode=quadrature") != std::string::npos);
  CHECK(r.out.find("angles=") != std::string::npos);
  CHECK(r.out.find("jobs=") != std::string::npos);
}

TEST_CASE("reruns are byte identical") {
  const std::string args = "fig4 --n 1,2 --tol 1e-3";
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);

  RunResult c = run_cli("eval --mode exact --alpha 3 --sigma 0.5");
  RunResult d = run_cli("eval --mode exact --alpha 3 --sigma 0.5");
  REQUIRE(c.exit_code == 0);
  CHECK(c.out == d.out);
}

TEST_CASE("output lands in the requested file") {
  const fs::path dir = fs::path("cli_test_tmp");
  fs::create_directories(dir);
  const fs::path target = dir / "fig3.csv";
  RunResult r = run_cli("fig3 --alpha 4 --sigma 0.5,1 --out " + target.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  const std::string text = slurp(target);
  CHECK(text.find("sigma,S,S_quad") != std::string::npos);
  CHECK(!csv_row(text, "0.5").empty());
}

TEST_CASE("fig2 row matches the library pipeline") {
  RunResult r = run_cli("fig2 --alpha 3 --tol 1e-4");
  REQUIRE(r.exit_code == 0);
  std::vector<double> row = csv_row(r.out, "3");
  REQUIRE(row.size() == 4);

  SchmidtState st = pair_coherent_coeffs(1.1, 1e-10);
  st.alpha = st.beta = 3.0;
  ChSettings angles{0.0, -M_PI / 4.0, M_PI / 2.0, -3.0 * M_PI / 4.0};
  const double s = ch_ratio(exact_source(st), angles, NoiseModel{0.0, 1.0}).s;
  const double sc = sigma_cutoff(exact_source(st), angles, 1e-4);
  CHECK(row[1] == doctest::Approx(s).epsilon(1e-9));
  CHECK(std::abs(row[2] - (sc)) < 1e-9);
}

TEST_CASE("spin eval exposes the psi scan") {
  RunResult r = run_cli("eval --mode spin --n 1 --psi-scan --sigma 0");
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.out);
  std::string line;
  double psi = -1.0, s = -1.0;
  while (std::getline(in, line)) {
    if (line.rfind("psi_opt,", 0) == 0) psi = std::strtod(line.c_str() + 8, nullptr);
    if (line.rfind("S,", 0) == 0) s = std::strtod(line.c_str() + 2, nullptr);
  }
  CHECK(std::abs(psi - (M_PI / 4.0)) < 1e-4);
  CHECK(s == doctest::Approx(0.5 * (1.0 + std::sqrt(2.0))).epsilon(1e-7));
}
