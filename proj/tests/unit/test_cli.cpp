#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hypsing/cli.hpp"
#include "hypsing/json_io.hpp"

using namespace hypsing;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hypsing");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "cli_test_" + name;
  std::ofstream(path) << content;
  return path;
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("run configuration invariants") {
  RunConfig c;
  CHECK_NOTHROW(validate(c));
  c.order = 3;
  CHECK_THROWS_AS(validate(c), Error);
  c = {};
  c.samples = 96;
  CHECK_THROWS_AS(validate(c), Error);
  c.samples = 64;
  CHECK_THROWS_AS(validate(c), Error);
  c = {};
  c.radius = 1.0;
  CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("tolerance assignments") {
  RunConfig c;
  add_tolerance(c, "theta=1e-12");
  CHECK(c.tolerances.at("theta") == 1e-12);
  CHECK_THROWS_AS(add_tolerance(c, "theta"), Error);
  CHECK_THROWS_AS(add_tolerance(c, "theta=small"), Error);
}

TEST_CASE("grid specs") {
  CHECK(parse_grid("annulus:0.05:0.8:10:10").size() == 100);
  CHECK(parse_grid("annulus:0.1:0.2:2:3:0:1").size() == 6);
  CHECK(parse_grid("rect:0.1:0.2:1:0.1:0.2:1").size() == 1);
  CHECK_THROWS_AS(parse_grid("disk:1"), Error);
  CHECK_THROWS_AS(parse_grid("rect:0:1:2"), Error);
  CHECK_THROWS_AS(parse_grid("annulus:a:1:2:2"), Error);
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ErrorKind::Parse) == 1);
  CHECK(exit_code(ErrorKind::InvalidArgument) == 1);
  CHECK(exit_code(ErrorKind::HyperbolicMonodromy) == 2);
  CHECK(exit_code(ErrorKind::InconsistentInput) == 2);
  CHECK(exit_code(ErrorKind::Domain) == 2);
  CHECK(exit_code(ErrorKind::VerificationFailed) == 3);
}

TEST_CASE("classify subcommand") {
  const Run ok = run({"classify", write_temp("power.json", R"({"kind":"power","alpha":0.5})")});
  CHECK(ok.code == 0);
  const Json j = parse_json(ok.out);
  CHECK(j["kind"] == "conical");
  CHECK(std::abs(j["theta"].get<double>() - 0.5) < 1e-12);
  CHECK(j["k"] == 0);

  const Run log = run({"classify", write_temp("log.json", R"({"kind":"log"})"), "--order", "16", "--samples", "64"});
  CHECK(log.code == 0);
  CHECK(parse_json(log.out)["kind"] == "cusp");
  CHECK(parse_json(log.out)["xi"]["coeffs"].size() == 17);

  const Run bad = run({"classify", write_temp("bad.json", "{\"kind\":")});
  CHECK(bad.code == 1);
  CHECK(bad.out.empty());
  CHECK(!bad.err.empty());

  CHECK(run({"classify", "no_such_file.json"}).code == 1);
  CHECK(run({"classify", write_temp("p2.json", R"({"kind":"power","alpha":0.5})"), "--tol", "theta=1"}).code == 1);
  CHECK(run({"classify", write_temp("out.json", R"({"kind":"series","coeffs":[[0.9,0],[0.5,0]]})")}).code == 2);
}

TEST_CASE("output file") {
  const std::string path = "cli_test_report.json";
  std::remove(path.c_str());
  const Run r = run({"classify", write_temp("p3.json", R"({"kind":"power","alpha":0.25})"), "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(parse_json(ss.str())["kind"] == "conical");
}

TEST_CASE("determinism") {
  const std::string input = write_temp("p4.json", R"({"kind":"power","alpha":0.7})");
  CHECK(run({"classify", input}).out == run({"classify", input}).out);
}

TEST_CASE("verify subcommand exit codes") {
  const Run tight = run({"verify", "--tol", "theta=1e-15", "--tol", "fit=1e-15"});
  CHECK(tight.code == 3);
  const Json j = parse_json(tight.out);
  CHECK(j["all_pass"] == false);
  CHECK(run({"verify", "--tol", "bogus=1"}).code == 1);
  CHECK(run({"verify", "--samples", "100"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
}

TEST_CASE("sample a conical metric on an annulus") {
  const Run r = run({"sample", write_temp("conical.json", R"({"kind":"conical","theta":0.5})"), "--grid",
                     "annulus:0.05:0.8:10:10"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("re,im,u,density,curvature_residual\n", 0) == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 100);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 5);
    CHECK(row[4] <= 1e-3);
    CHECK(std::exp(2 * row[2]) == doctest::Approx(row[3]).epsilon(1e-13));
  }
}

TEST_CASE("sample the cusp and compare with its closed form") {
  const Run r = run({"sample", write_temp("cusp.json", R"({"kind":"cusp"})"), "--grid", "annulus:0.05:0.8:10:10"});
  REQUIRE(r.code == 0);
  for (const auto& row : csv_rows(r.out)) {
    const double rad = std::hypot(row[0], row[1]);
    const double expected = 1.0 / (rad * rad * std::log(rad) * std::log(rad));
    CHECK(row[3] == doctest::Approx(expected).epsilon(1e-14));
  }
  const Run one = run({"sample", "cli_test_cusp.json", "--grid", "rect:0.3:0.4:1:0.1:0.2:1"});
  CHECK(csv_rows(one.out).size() == 1);
}

TEST_CASE("sample guards") {
  const std::string cusp = write_temp("cusp2.json", R"({"kind":"cusp"})");
  CHECK(run({"sample", cusp, "--grid", "rect:-0.5:0.5:3:-0.5:0.5:3"}).code == 2);
  CHECK(run({"sample", cusp, "--grid", "annulus:0.5:1.0:2:2"}).code == 2);
  CHECK(run({"sample", cusp, "--grid", "hexagon"}).code == 1);
  CHECK(run({"sample", cusp}).code == 1);
}
