// Black-box contract tests for the mildlab CLI: exit codes, report shapes,
// CSV headers, machine-readable errors, and byte-identical determinism.
// The binary under test is named by the MILDLAB_BIN environment variable and
// runs from the repository root so fixture paths resolve.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const char* bin = std::getenv("MILDLAB_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "MILDLAB_BIN must name the CLI binary");
  const std::string cmd = env_prefix + "\"" + bin + "\" " + args + " 2>/dev/null";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
    result.out.append(buf, n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

nlohmann::json parse(const std::string& text) {
  return nlohmann::json::parse(text);
}

std::string error_invariant(const RunResult& r) {
  return parse(r.out).at("error").at("invariant").get<std::string>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("help output") {
  const RunResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("verify-faa") != std::string::npos);
  CHECK(r.out.find("build-charts") != std::string::npos);
  CHECK(r.out.find("count-points") != std::string::npos);
  CHECK(r.out.find("Exit codes") != std::string::npos);
}

TEST_CASE("no subcommand is an input error") {
  const RunResult r = run_cli("");
  CHECK(r.exit_code == 2);
  CHECK(error_invariant(r) == "cli-args");
  const RunResult bad = run_cli("frobnicate");
  CHECK(bad.exit_code == 2);
  CHECK(error_invariant(bad) == "cli-args");
}

TEST_CASE("verify-faa") {
  const RunResult r = run_cli("verify-faa --pairs 5 --seed 11");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = parse(r.out);
  CHECK(j.at("pairs").get<int>() == 5);
  CHECK(j.at("derivatives_compared").get<int>() > 0);
  CHECK(j.at("max_rel_err").get<double>() <= 1e-10);
  CHECK(j.at("pass").get<bool>());
}

TEST_CASE("verify-lemma-ab") {
  const RunResult r = run_cli("verify-lemma-ab --m 2 --nu-max 4");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = parse(r.out);
  CHECK(j.at("max_rel_dev").get<double>() <= 1e-9);
  CHECK(j.at("spot_values_ok").get<bool>());
  CHECK(j.at("pass").get<bool>());
}

TEST_CASE("mild-compose") {
  const RunResult r = run_cli("mild-compose --fixtures 5 --seed 3");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = parse(r.out);
  CHECK(j.at("fixtures").get<int>() == 5);
  CHECK(j.at("sum_failures").get<int>() == 0);
  CHECK(j.at("product_failures").get<int>() == 0);
  CHECK(j.at("compose_failures").get<int>() == 0);
  CHECK(j.at("pass").get<bool>());
}

TEST_CASE("verify-lemmas") {
  const RunResult r = run_cli("verify-lemmas");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = parse(r.out);
  CHECK(j.at("pass").get<bool>());
  const auto& fibers = j.at("fibers");
  REQUIRE(fibers.is_array());
  REQUIRE(!fibers.empty());
  const auto& fiber = fibers.at(0);
  CHECK(fiber.at("weak_mildness").is_array());
  CHECK(fiber.at("factor_xr").is_array());
  const auto& recursion = fiber.at("wall_recursion");
  REQUIRE(recursion.is_array());
  REQUIRE(!recursion.empty());
  for (const auto& entry : recursion) {
    CHECK(entry.at("pass").get<bool>());
    CHECK(entry.at("max_gap").get<double>() <=
          entry.at("tolerance").get<double>());
  }
  CHECK(fiber.at("smooth_substitution").is_array());
  CHECK(fiber.at("weak_mildness_flat").at("pass").get<bool>());
  CHECK(fiber.at("assembled_constants").at("A").get<double>() > 0.0);
  CHECK(fiber.at("flat_substitution").at("certificate").at("pass").get<bool>());
}

TEST_CASE("build-charts emits the chart CSV") {
  const RunResult r = run_cli("build-charts --r 3");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string header, row;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row));
  CHECK(header == "r,norm_mode,N,count,worst_norm,pass");
  CHECK(row.rfind("3,crnorm,9,81,", 0) == 0);
  CHECK(row.back() == '1');

  // Understating the rate must fail loudly: exit 1 and pass = 0 rows.
  const RunResult fail = run_cli("build-charts --r 3 --A 0.1");
  CHECK(fail.exit_code == 1);
  std::istringstream flines(fail.out);
  REQUIRE(std::getline(flines, header));
  REQUIRE(std::getline(flines, row));
  CHECK(row.back() == '0');
}

TEST_CASE("count-points emits the count CSV") {
  const RunResult r = run_cli("count-points --fixture parabola --height 10");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string header, row;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row));
  CHECK(header == "H,points,degree_d,cover_size,logH_pow_c2");
  CHECK(row == "10,3,2,1,28.1101236");

  const RunResult square = run_cli("count-points --fixture square --height 10");
  CHECK(square.exit_code == 0);
  std::istringstream slines(square.out);
  REQUIRE(std::getline(slines, header));
  REQUIRE(std::getline(slines, row));
  CHECK(row.rfind("10,961,", 0) == 0);
}

TEST_CASE("count-points input errors") {
  CHECK(error_invariant(run_cli("count-points --fixture parabola --height 2")) ==
        "height-min");
  CHECK(error_invariant(run_cli("count-points --fixture parabola --height 10 --sweep")) ==
        "cli-args");
  CHECK(error_invariant(run_cli("count-points --fixture circle --height 10")) ==
        "fixture-known");
  CHECK(error_invariant(run_cli("count-points --fixture square --height 50")) ==
        "enumeration-size");
  CHECK(error_invariant(run_cli("count-points --fixture square --height 10 --dim 1")) ==
        "ambient-dim-min");
  CHECK(run_cli("count-points --fixture parabola --height 2").exit_code == 2);
}

TEST_CASE("demo-counterexample") {
  const RunResult r = run_cli("demo-counterexample");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = parse(r.out);
  CHECK(j.at("growth_pass").get<bool>());
  CHECK(j.at("uniform_pass").get<bool>());
  CHECK(j.at("min_growth").get<double>() >= 3.0);
  REQUIRE(j.at("growth_factors").is_array());
  CHECK(j.at("growth_factors").size() == 2);
}

TEST_CASE("config invariant errors") {
  CHECK(error_invariant(run_cli("verify-lemmas --grid-density 2")) ==
        "grid-density-min");
  CHECK(error_invariant(run_cli("verify-lemmas --r-sweep 0,1")) ==
        "r-sweep-positive");
  CHECK(error_invariant(run_cli("verify-lemmas --kappa 0")) == "kappa-positive");
  CHECK(error_invariant(run_cli("verify-lemmas --order 0")) == "order-positive");
  CHECK(error_invariant(run_cli("verify-lemmas --scene fixtures/__none__.json")) ==
        "scene-file");
  CHECK(run_cli("verify-lemmas --grid-density 2").exit_code == 2);
}

TEST_CASE("output file matches stdout byte for byte") {
  const std::string path = "/tmp/mildlab_cli_contract_out.csv";
  std::remove(path.c_str());
  const RunResult direct = run_cli("build-charts --r 2");
  const RunResult filed = run_cli("build-charts --r 2 --output " + path);
  CHECK(direct.exit_code == 0);
  CHECK(filed.exit_code == 0);
  CHECK(read_file(path) == direct.out);
  std::remove(path.c_str());
}

TEST_CASE("byte-identical reruns") {
  const std::string args = "verify-faa --pairs 10 --seed 5";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  const RunResult pinned = run_cli(args, "MILDLAB_THREADS=1 ");
  CHECK(pinned.out == a.out);

  const RunResult lemmas_a = run_cli("verify-lemmas --grid-density 8");
  const RunResult lemmas_b = run_cli("verify-lemmas --grid-density 8");
  CHECK(lemmas_a.out == lemmas_b.out);
}
