#include <catch2/catch_amalgamated.hpp>

#include "crosm/runner.hpp"

using namespace crosm;

TEST_CASE("TOML subset parsing") {
  const std::string text = R"(
# contact verification fixture
[space]
kind = "cpn"
n = 2

[run]
task = "verify"
mode = "exact"
format = "text"

[family]
type = "AI"
kappa = "1/2"
q_eps = 1
alpha = "0"   # orthogonal member
)";
  const auto kv = parse_toml_subset(text);
  REQUIRE(kv.at("space.kind") == "cpn");
  REQUIRE(kv.at("space.n") == "2");
  REQUIRE(kv.at("family.kappa") == "1/2");
  REQUIRE(kv.at("family.alpha") == "0");

  RunConfig cfg;
  apply_config_map(cfg, kv);
  REQUIRE(cfg.space == "cpn");
  REQUIRE(cfg.n == 2);
  REQUIRE(cfg.task == Task::verify);
  REQUIRE(cfg.format == OutFormat::text);
  REQUIRE(cfg.get("family.type") == "AI");

  REQUIRE_THROWS_AS(parse_toml_subset("[oops\nk = 1"), input_error);
  REQUIRE_THROWS_AS(parse_toml_subset("novalue\n"), input_error);
  // unknown keys are named in the diagnostic
  try {
    RunConfig c2;
    apply_config_map(c2, parse_toml_subset("[run]\nbogus = 1\n"));
    FAIL("expected input_error");
  } catch (const input_error& e) {
    REQUIRE(std::string(e.what()).find("run.bogus") != std::string::npos);
  }
}

TEST_CASE("rational parsing") {
  REQUIRE(parse_rational("3/4", "k") == Rational(3, 4));
  REQUIRE(parse_rational("-7", "k") == Rational(-7));
  REQUIRE(parse_rational("0.25", "k") == Rational(1, 4));
  REQUIRE_THROWS_AS(parse_rational("1/0", "k"), input_error);
  REQUIRE_THROWS_AS(parse_rational("abc", "k"), input_error);
  REQUIRE(parse_scalar<double>("1/2", "k") == 0.5);
}

TEST_CASE("verify task: classification agreement decides the exit code") {
  RunConfig cfg;
  cfg.space = "cpn";
  cfg.n = 2;
  cfg.task = Task::verify;
  cfg.params["family.type"] = "AI";
  cfg.params["family.kappa"] = "1";
  cfg.params["family.q_eps"] = "1";
  cfg.params["family.q_half"] = "1";
  const auto res = run(cfg);
  REQUIRE(res.exit_code == 0);
  REQUIRE(res.report.at("mode") == "exact");
  bool saw_kcontact_pass = false;
  for (const auto& c : res.report.at("checks"))
    if (c.at("name") == "kcontact" && c.at("verdict") == "pass")
      saw_kcontact_pass = true;
  REQUIRE(saw_kcontact_pass);

  // q_eps = 2: the member is not K-contact, which matches the
  // classification, so the run still verifies (exit 0) with verdicts shown.
  cfg.params["family.q_eps"] = "2";
  const auto res2 = run(cfg);
  REQUIRE(res2.exit_code == 0);
  bool saw_kcontact_fail = false;
  for (const auto& c : res2.report.at("checks"))
    if (c.at("name") == "kcontact" && c.at("verdict") == "fail")
      saw_kcontact_fail = true;
  REQUIRE(saw_kcontact_fail);
}

TEST_CASE("explicit metric blocks: raw checks gate the exit code") {
  RunConfig cfg;
  cfg.space = "sphere";
  cfg.n = 3;
  cfg.task = Task::verify;
  // round metric with xi = X is not contact: exit 2, report still built
  cfg.params["metric.a0"] = "1";
  cfg.params["metric.a_eps"] = "1";
  cfg.params["metric.b_eps"] = "1";
  const auto res = run(cfg);
  REQUIRE(res.exit_code == 2);
  REQUIRE(res.report.at("checks").at(0).at("name") == "contact");
  REQUIRE(res.report.at("checks").at(0).at("verdict") == "fail");

  // the contact member of the family, given as raw blocks, passes
  cfg.params["metric.b_eps"] = "1/4";  // (1, 1, 1/4) = (gc) at q_eps = 1/2
  REQUIRE(run(cfg).exit_code == 0);

  // both [family] and [metric] at once is malformed input
  cfg.params["family.type"] = "gc";
  REQUIRE_THROWS_AS(run(cfg), input_error);
}

TEST_CASE("input errors surface as exceptions (CLI exit 1)") {
  RunConfig cfg;
  cfg.space = "nowhere";
  REQUIRE_THROWS_AS(run(cfg), input_error);
  cfg.space = "cpn";
  cfg.n = 2;
  cfg.task = Task::verify;
  cfg.params["family.type"] = "Z9";
  REQUIRE_THROWS_AS(run(cfg), input_error);
  cfg.params["family.type"] = "AI";
  cfg.params["family.kappa"] = "-1";
  REQUIRE_THROWS_AS(run(cfg), input_error);
}

TEST_CASE("exact mode falls back to float for irrational coefficients") {
  RunConfig cfg;
  cfg.space = "cpn";
  cfg.n = 2;
  cfg.task = Task::verify;
  cfg.params["family.type"] = "BI";
  cfg.params["family.kappa"] = "1";
  cfg.params["family.q_eps"] = "2/3";  // sqrt(q_eps) irrational
  const auto res = run(cfg);
  REQUIRE(res.exit_code == 0);
  REQUIRE(res.report.at("mode") == "float");
  REQUIRE_FALSE(res.report.at("mode_notes").empty());
}

TEST_CASE("identical configs produce byte-identical reports") {
  for (const Task task : {Task::verify, Task::catalog, Task::einstein,
                          Task::full_suite}) {
    RunConfig cfg;
    cfg.space = "cpn";
    cfg.n = 1;
    cfg.task = task;
    const auto a = run(cfg);
    const auto b = run(cfg);
    REQUIRE(a.render(OutFormat::json) == b.render(OutFormat::json));
    REQUIRE(a.render(OutFormat::text) == b.render(OutFormat::text));
    REQUIRE(a.exit_code == b.exit_code);
  }
}

TEST_CASE("full-suite passes for every supported space, float included") {
  for (const char* space : {"sphere", "rpn", "cpn"}) {
    RunConfig cfg;
    cfg.space = space;
    cfg.n = 2;
    cfg.task = Task::full_suite;
    REQUIRE(run(cfg).exit_code == 0);
    cfg.mode = "float";
    REQUIRE(run(cfg).exit_code == 0);
  }
}

TEST_CASE("catalog emits the table CSV") {
  RunConfig cfg;
  cfg.space = "cpn";
  cfg.n = 2;
  cfg.task = Task::catalog;
  const auto res = run(cfg);
  REQUIRE(res.exit_code == 0);
  const std::string csv = res.report.at("table_csv").get<std::string>();
  REQUIRE(csv.find("AI,") != std::string::npos);
  REQUIRE(csv.find("kappa q_eps/2") != std::string::npos);
  REQUIRE(csv.rfind("type,xi,a0,a_eps,b_eps,a_half,b_half,kcontact", 0) == 0);
}

TEST_CASE("RP^n reports carry the component-group caveat") {
  RunConfig cfg;
  cfg.space = "rpn";
  cfg.n = 3;
  cfg.task = Task::verify;
  const auto res = run(cfg);
  bool caveat = false;
  for (const auto& c : res.report.at("checks"))
    for (const auto& cv : c.at("caveats"))
      if (cv == "component_group_unchecked") caveat = true;
  REQUIRE(caveat);
}
