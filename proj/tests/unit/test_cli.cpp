#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/oracles.hpp"
#include "svjd/cli.hpp"
#include "svjd/errors.hpp"

using namespace svjd;

namespace {

const std::string kReference = std::string(SVJD_SOURCE_DIR) + "/configs/reference.json";
const std::string kMargrabe = std::string(SVJD_SOURCE_DIR) + "/configs/margrabe.json";

struct Outcome {
  int code;
  std::string out, log;
};

Outcome run_cli(RunSpec spec) {
  std::ostringstream out, log;
  const int code = run(spec, out, log);
  return {code, out.str(), log.str()};
}

RunSpec spec_for(const std::string& command, std::vector<Override> ov = {}) {
  RunSpec s;
  s.command = command;
  s.config_path = kReference;
  s.overrides = std::move(ov);
  return s;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

const std::vector<Override> kSmallAmerican{{"american.dates", "10"},           {"american.steps_per_date", "2"},
                                           {"american.paths", "4000"},         {"american.training_paths", "4000"},
                                           {"american.boundary_paths", "1000"}, {"american.hermite_nodes", "4"}};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("price-eu-fourier on the reference config") {
    const Outcome o = run_cli(spec_for("price-eu-fourier"));
    REQUIRE(o.code == kExitOk);
    const auto rows = parse_csv(o.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == "method");
    CHECK(rows[1][0] == "fourier");
    CHECK(rows[1][1] == "Q");
    CHECK(rows[1][8] == "42");
    CHECK(rows[1][9].size() == 16);
    CHECK(o.log.find("price-eu-fourier:") == 0);
  }

  TEST_CASE("Feller violation exits 2 and names the condition") {
    const Outcome o = run_cli(spec_for("price-eu-fourier", {{"model.asset1.vol.xi", "1"},
                                                            {"model.asset1.vol.eta", "0.02"},
                                                            {"model.asset1.vol.sigma", "0.3"}}));
    CHECK(o.code == kExitValidation);
    CHECK(o.log.find("2*xi*eta >= sigma^2") != std::string::npos);
    CHECK(o.out.empty());
  }

  TEST_CASE("closed form refuses correlated volatility") {
    const Outcome o = run_cli(spec_for("price-eu-fourier", {{"model.corr.rho_w", "0.3"}}));
    CHECK(o.code == kExitValidation);
    CHECK(o.log.find("requires rho_w = 0") != std::string::npos);
  }

  TEST_CASE("usage and IO errors exit 1") {
    CHECK(run_cli(spec_for("price-everything")).code == kExitUsage);
    RunSpec s = spec_for("price-eu-fourier");
    s.config_path = "/nonexistent/config.json";
    CHECK(run_cli(s).code == kExitUsage);
    s.config_path.clear();
    CHECK(run_cli(s).code == kExitUsage);
    RunSpec c = spec_for("convergence");
    c.axis = "width";
    CHECK(run_cli(c).code == kExitUsage);
  }

  TEST_CASE("unknown override key exits 2") {
    CHECK(run_cli(spec_for("price-eu-fourier", {{"model.asset3.s0", "1"}})).code == kExitValidation);
  }

  TEST_CASE("identical single-threaded runs are byte-identical") {
    RunSpec s = spec_for("price-eu-mc", {{"mc.paths", "20000"}, {"mc.steps", "50"}});
    s.threads = 1;
    const Outcome a = run_cli(s), b = run_cli(s);
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    s.seed = 43;
    const Outcome c = run_cli(s);
    CHECK(c.out != a.out);
    CHECK(parse_csv(c.out)[1][8] == "43");
    s.threads = 0;
  }

  TEST_CASE("decomposition and spread commands") {
    const Outcome d = run_cli(spec_for("price-eu-decomp", {{"mc.paths", "20000"}, {"mc.steps", "50"}}));
    REQUIRE(d.code == kExitOk);
    const auto rows = parse_csv(d.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "decomposition");
    CHECK(rows[2][0] == "mc_decomposition");
    CHECK(!rows[1][2].empty());
    const Outcome s = run_cli(spec_for("price-spread", {{"contract.K", "10"}, {"mc.paths", "20000"}}));
    REQUIRE(s.code == kExitOk);
    CHECK(parse_csv(s.out).size() == 3);
  }

  TEST_CASE("American commands") {
    const Outcome a = run_cli(spec_for("price-am", kSmallAmerican));
    REQUIRE(a.code == kExitOk);
    const auto rows = parse_csv(a.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[1][0] == "eep");
    CHECK(rows[2][0] == "eep_premium_diffusive");
    CHECK(rows[3][0] == "eep_premium_jump1");
    CHECK(rows[4][0] == "eep_premium_jump2");
    CHECK(rows[5][0] == "lsm");
    const Outcome b = run_cli(spec_for("solve-boundary", kSmallAmerican));
    REQUIRE(b.code == kExitOk);
    const auto brows = parse_csv(b.out);
    REQUIRE(brows.size() == 12);
    CHECK(brows[0] == std::vector<std::string>{"t", "B", "residual"});
    CHECK(brows[11][0] == "1");
  }

  TEST_CASE("output directory variable") {
    const auto dir = std::filesystem::temp_directory_path() / "svjd_cli_test";
    std::filesystem::create_directories(dir);
    setenv("SVJD_OUTPUT_DIR", dir.c_str(), 1);
    RunSpec s = spec_for("price-eu-fourier");
    s.out_path = "eu.csv";
    const Outcome o = run_cli(s);
    unsetenv("SVJD_OUTPUT_DIR");
    CHECK(o.code == kExitOk);
    CHECK(std::filesystem::exists(dir / "eu.csv"));
    CHECK(o.out.empty());
  }

  TEST_CASE("nodes sweep converges") {
    RunSpec s = spec_for("convergence");
    s.axis = "nodes";
    const Outcome o = run_cli(s);
    REQUIRE(o.code == kExitOk);
    const auto rows = parse_csv(o.out);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == std::vector<std::string>{"axis_value", "price", "stderr_or_quaderr", "wall_ms", "seed",
                                              "config_hash"});
    const double a = std::stod(rows[5][1]), b = std::stod(rows[6][1]);
    CHECK(std::abs(a - b) / b < 1e-7);
  }

  TEST_CASE("paths sweep shows CLT scaling") {
    RunSpec s = spec_for("convergence", {{"mc.steps", "20"}});
    s.axis = "paths";
    const Outcome o = run_cli(s);
    REQUIRE(o.code == kExitOk);
    const auto rows = parse_csv(o.out);
    const int n = static_cast<int>(rows.size()) - 1;
    REQUIRE(n == 10);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 1; k <= n; ++k) {
      const double x = std::log(std::stod(rows[k][0])), y = std::log(std::stod(rows[k][2]));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope + 0.5) <= 0.1);
  }

  TEST_CASE("steps sweep is flat in the Margrabe limit") {
    RunSpec s = spec_for("convergence", {{"mc.paths", "50000"}, {"convergence.stop", "160"}});
    s.config_path = kMargrabe;
    s.axis = "steps";
    const Outcome o = run_cli(s);
    REQUIRE(o.code == kExitOk);
    const auto rows = parse_csv(o.out);
    REQUIRE(rows.size() == 6);
    const double ref = oracle::margrabe(100.0, 95.0, 0.02, 0.01, 0.13, 1.0);
    for (std::size_t k = 1; k < rows.size(); ++k) {
      CHECK(std::abs(std::stod(rows[k][1]) - ref) <= 3.0 * std::stod(rows[k][2]));
    }
  }

  TEST_CASE("check-suite needs a linked suite") {
    RunSpec s;
    s.command = "check-suite";
    CHECK(run_cli(s).code == kExitUsage);
    set_suite_runner([](std::ostream& table, std::ostream&) {
      table << "criterion,pass\n1,true\n";
      return 0;
    });
    const Outcome o = run_cli(s);
    CHECK(o.code == kExitOk);
    CHECK(o.out == "criterion,pass\n1,true\n");
    set_suite_runner(nullptr);
  }
}
