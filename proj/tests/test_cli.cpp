#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "qtwist/ncalg.hpp"
#include "qtwist/report.hpp"

using namespace qtwist;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qtwist");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(int n, std::vector<std::string> suites) {
  RunConfig c;
  c.n = n;
  c.suites = std::move(suites);
  return c;
}

}  // namespace

TEST_CASE("empty suite list") {
  Report rep = run(config(2, {}));
  CHECK(rep.checks.empty());
  CHECK(rep.exit_code() == 0);
  auto j = report_json(rep);
  CHECK(j["schema"] == "qtwist-report/1");
  CHECK(j["summary"]["total"] == 0);

  CliRun r = cli({"check", "--suite", "none"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["checks"].empty());
}

TEST_CASE("status and exit contract") {
  Report rep;
  run_check(rep, "t", "ok", "zero residual", CheckKind::Check, [] { return Outcome{true, ""}; });
  run_check(rep, "t", "control", "perturbed input", CheckKind::Control, [] { return Outcome{false, "nonzero"}; });
  run_check(rep, "t", "solved", "constants", CheckKind::Derived, [] { return Outcome{true, "unique"}; });
  CHECK(rep.checks[0].status == "pass");
  CHECK(rep.checks[1].status == "pass");
  CHECK(rep.checks[2].status == "derived");
  CHECK(rep.exit_code() == 0);
  CHECK(report_json(rep)["checks"][1]["outcome"] == "pass-as-control");

  SUBCASE("a failing check names its witness") {
    run_check(rep, "t", "bad", "zero residual", CheckKind::Check,
              [] { return Outcome{false, "nonzero at row (1,2) col (2,1): (1-a)/(1)"}; });
    CHECK(rep.exit_code() == 1);
    CHECK(rep.checks.back().status == "fail");
    CHECK(rep.checks.back().residual_summary.find("row (1,2)") != std::string::npos);
  }
  SUBCASE("a control that comes out zero is a failure") {
    run_check(rep, "t", "weak", "perturbed input", CheckKind::Control, [] { return Outcome{true, ""}; });
    CHECK(rep.checks.back().status == "fail");
    CHECK(report_json(rep)["checks"][3]["outcome"] == "control-did-not-fail");
    CHECK(rep.exit_code() == 1);
  }
  SUBCASE("budget exhaustion takes precedence") {
    run_check(rep, "t", "bad", "x", CheckKind::Check, [] { return Outcome{false, ""}; });
    run_check(rep, "t", "huge", "x", CheckKind::Check, []() -> Outcome { throw BudgetExceeded("rewrite steps"); });
    CHECK(rep.checks.back().budget_exceeded);
    CHECK(rep.checks.back().residual_summary.find("budget") != std::string::npos);
    CHECK(rep.exit_code() == 3);
  }
  SUBCASE("other exceptions fail the check") {
    run_check(rep, "t", "throws", "x", CheckKind::Control, []() -> Outcome { throw std::runtime_error("boom"); });
    CHECK(rep.checks.back().status == "fail");
    CHECK(rep.exit_code() == 1);
  }
}

TEST_CASE("json and text agree") {
  Report rep = run(config(2, {"matrix", "esoteric"}));
  CHECK(rep.exit_code() == 0);
  auto j = report_json(rep);
  std::string text = render(rep, "text");
  std::size_t pass_lines = 0, fail_lines = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("  PASS", 0) == 0) ++pass_lines;
    if (line.rfind("  FAIL", 0) == 0) ++fail_lines;
  }
  CHECK(pass_lines == j["summary"]["pass"].get<std::size_t>());
  CHECK(fail_lines == j["summary"]["fail"].get<std::size_t>());
  CHECK(j["checks"].size() == rep.checks.size());
  // every suite carries a negative control
  for (const std::string suite : {"matrix", "esoteric"}) {
    bool control = false;
    for (const auto& c : rep.checks) control = control || (c.suite == suite && c.kind == CheckKind::Control);
    CHECK(control);
  }
}

TEST_CASE("deterministic output") {
  RunConfig c = config(2, {"all"});
  std::string a = report_json(run(c), false).dump(), b = report_json(run(c), false).dump();
  CHECK(a == b);
  // suites run in dependency order whatever order they are given in
  Report rep = run(config(2, {"roots", "matrix"}));
  CHECK(rep.config.suites == std::vector<std::string>{"matrix", "roots"});
  CHECK(rep.checks.front().suite == "matrix");
}

TEST_CASE("config grammar") {
  RunConfig c = parse_config_text("# run\nn = 3\ndegree=5\nsuites = matrix, roots\nq12 = 3/2  # rational\na = root:3\n");
  CHECK(c.n == 3);
  CHECK(c.degree == 5);
  CHECK(c.suites == std::vector<std::string>{"matrix", "roots"});
  CHECK(c.params.at("q12") == "3/2");
  CHECK(c.params.at("a") == "root:3");
  CHECK_NOTHROW(validate(c));

  CHECK_THROWS(parse_config_text("n 3\n"));
  CHECK_THROWS(parse_config_text("n = three\n"));
  RunConfig bad = c;
  bad.params["q12"] = "root:2";
  CHECK_THROWS(validate(bad));
  bad = c;
  bad.params["q45"] = "2";
  CHECK_THROWS(validate(bad));
  bad = c;
  bad.n = 1;
  CHECK_THROWS(validate(bad));
  bad = c;
  bad.suites = {"matrix", "nonsense"};
  CHECK_THROWS(validate(bad));
}

TEST_CASE("rational parameters") {
  RunConfig c = config(2, {"matrix"});
  c.params["q12"] = "3/2";
  c.params["a"] = "5";
  Report rep = run(c);
  CHECK(rep.exit_code() == 0);
  // the perturbed Hecke residual is now a number
  for (const auto& r : rep.checks)
    if (r.check_id == "matrix.hecke-perturbed") {
      std::string value = r.residual_summary.substr(r.residual_summary.rfind(':') + 1);
      CHECK(value.find('a') == std::string::npos);
    }
}

TEST_CASE("command line") {
  SUBCASE("usage errors") {
    CHECK(cli({"check", "--n", "1"}).code == 2);
    CHECK(cli({"check", "--suite", "bogus"}).code == 2);
    CHECK(cli({"check", "--format", "xml"}).code == 2);
    CHECK(cli({"check", "--nope"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"check", "--params", "/nonexistent/file"}).code == 2);
  }
  SUBCASE("matrix suite from a params file") {
    std::string path = "test_cli_params.cfg";
    std::ofstream(path) << "n = 3\nsuites = matrix\n";
    CliRun r = cli({"check", "--params", path, "--format", "text"});
    CHECK(r.code == 0);
    CHECK(r.out.find("n=3") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
    // flags override the file
    r = cli({"check", "--params", path, "--n", "2"});
    CHECK(nlohmann::json::parse(r.out)["config"]["n"] == 2);
    std::remove(path.c_str());
  }
  SUBCASE("report written to a file") {
    std::string path = "test_cli_report.json";
    CHECK(cli({"check", "--suite", "sl-reduce", "--n", "3", "--out", path}).code == 0);
    std::ifstream in(path);
    auto j = nlohmann::json::parse(in);
    CHECK(j["schema"] == "qtwist-report/1");
    CHECK(j["summary"]["fail"] == 0);
    std::remove(path.c_str());
  }
  SUBCASE("esoteric with generic q13 marks the control") {
    CliRun r = cli({"check", "--n", "3", "--suite", "esoteric", "--q13", "generic"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["checks"].size() >= 1);
    CHECK(j["checks"][0]["check_id"] == "esoteric.generic-q13");
    CHECK(j["checks"][0]["outcome"] == "pass-as-control");
  }
  SUBCASE("derive prints the Serre constants") {
    CliRun r = cli({"derive", "--n", "3", "--degree", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("r_1=") != std::string::npos);
    CHECK(r.out.find("s_1=") != std::string::npos);
    CHECK(r.out.find("DERIVED") != std::string::npos);
  }
  SUBCASE("roots at a chosen order") {
    CliRun r = cli({"check", "--suite", "roots", "--root", "2"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    bool saw3 = false;
    for (const auto& c : j["checks"]) saw3 = saw3 || c["check_id"].get<std::string>().find("-3") != std::string::npos;
    CHECK_FALSE(saw3);
  }
}
