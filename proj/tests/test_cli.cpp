#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  fs::path dir = fs::temp_directory_path() / "ars2_cli_test";
  fs::create_directories(dir);
  fs::path out = dir / "out.txt", err = dir / "err.txt";
  std::string cmd = std::string(ARS2_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ostringstream so, se;
  so << std::ifstream(out).rdbuf();
  se << std::ifstream(err).rdbuf();
  r.out = so.str();
  r.err = se.str();
  return r;
}

}  // namespace

TEST_CASE("help exits cleanly") {
  RunResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("classify") != std::string::npos);
  CHECK(r.out.find("cutlocus") != std::string::npos);
}

TEST_CASE("classify emits machine-readable json") {
  RunResult r = run_cli("classify --f \"y - x^2*(1+x)\" --point 0,0");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["kind"] == "TangencyPlus");
  CHECK(j["witnesses"]["d2"].get<double>() > 0.0);
}

TEST_CASE("unknown flags are a configuration error") {
  RunResult r = run_cli("classify --f x --no-such-flag 1");
  CHECK(r.exit_code == 2);
  json j = json::parse(r.err);
  CHECK(j["kind"] == "config");
}

TEST_CASE("missing structure is a configuration error") {
  RunResult r = run_cli("classify --point 0,0");
  CHECK(r.exit_code == 2);
}

TEST_CASE("module failures exit with code 1") {
  // seed far from any singular set: the tracer cannot converge
  RunResult r = run_cli("singular --f 1 --seed 0,0");
  CHECK(r.exit_code == 1);
  json j = json::parse(r.err);
  CHECK(j["kind"] == "module");
}

TEST_CASE("config file values are read and overridden by flags") {
  fs::path dir = fs::temp_directory_path() / "ars2_cli_test";
  fs::create_directories(dir);
  fs::path cfg = dir / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "[classify]\n"
      << "f=\"x\"\n"
      << "point=0.5,0\n";
  }
  RunResult base = run_cli("--config " + cfg.string() + " classify");
  REQUIRE(base.exit_code == 0);
  CHECK(json::parse(base.out)["kind"] == "RiemannianR1");

  RunResult over = run_cli("--config " + cfg.string() + " classify --point 0,0.3");
  REQUIRE(over.exit_code == 0);
  CHECK(json::parse(over.out)["kind"] == "Grushin");
}

TEST_CASE("geodesic run reports conserved energy and writes csv") {
  fs::path dir = fs::temp_directory_path() / "ars2_cli_test";
  fs::create_directories(dir);
  fs::path csv = dir / "geo.csv";
  RunResult r = run_cli("geodesic --f x+1 --state 0,0,1,0 --time 0.4 --csv " + csv.string());
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["h_drift"].get<double>() < 1e-10);
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  CHECK(header.find("t") == 0);
  int rows = 0;
  for (std::string line; std::getline(f, line);) ++rows;
  CHECK(rows > 2);
}

TEST_CASE("repeated runs are byte-identical") {
  RunResult a = run_cli("curvature-map --f x --grid 9,9");
  RunResult b = run_cli("curvature-map --f x --grid 9,9");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  json j = json::parse(a.out);
  CHECK(j["k_max"].get<double>() <= -1.999);  // K = -2/x^2 on the domain
}

TEST_CASE("jets subcommand reproduces the elliptic constants") {
  RunResult r = run_cli("jets --gamma 1");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["K_agm"].get<double>() == doctest::Approx(1.854074677301372).epsilon(1e-12));
  CHECK(j["closed_form_max_err"].get<double>() < 1e-8);
}
