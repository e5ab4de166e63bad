#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "commands.hpp"
#include "qclab/errors.hpp"
#include "qclab/report.hpp"

using namespace qclab;

TEST_CASE("config text") {
  RunConfig cfg = RunConfig::from_text("# comment\nschema_version = 1\nseed = 42\nN = 256   # trailing\nk = 0.2, 0.4\n");
  CHECK(cfg.seed == 42);
  CHECK(cfg.get_int("N", 512, 16, 4096) == 256);
  CHECK(cfg.get_doubles("k", {0.5}, 0.0, 0.99) == std::vector<double>{0.2, 0.4});
  CHECK(cfg.get_double("L", 4.0, 0.1, 100.0) == 4.0);
  CHECK_NOTHROW(cfg.reject_unknown());
  const auto echo = cfg.echo();
  CHECK(echo["values"]["L"] == "4");
  CHECK(echo["values"]["N"] == "256");
  CHECK(echo["seed"] == 42);

  CHECK_THROWS_AS(RunConfig::from_text("N = 1\nN = 2\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_text("just words\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_text("schema_version = 2\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_text("seed = -3\n"), ConfigError);

  RunConfig bad = RunConfig::from_text("N = 12x\nlevels = 3,,4\ntypo = 1\n");
  CHECK_THROWS_AS(bad.get_int("N", 1, 0, 100), ConfigError);
  CHECK_THROWS_AS(bad.get_doubles("levels", {}, 0, 10), ConfigError);
  try {
    bad.command = "solve";
    bad.reject_unknown();
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("typo") != std::string::npos);
  }

  RunConfig range;
  range.apply_override("N=8");
  CHECK_THROWS_AS(range.get_int("N", 512, 16, 4096), ConfigError);
  CHECK_THROWS_AS(range.apply_override("novalue"), ConfigError);
}

TEST_CASE("envelope round trip and version gate") {
  ReportEnvelope env;
  env.software_version = software_version();
  env.command = "packing";
  env.seed = 7;
  env.config = {{"t", "1"}};
  env.payload = {{"alpha", 0.5}, {"checks", {{"ok", true}}}};
  env.pass = true;
  env.wall_clock_seconds = 1.5;
  const nlohmann::json j = to_json(env);
  CHECK(j["schema_version"] == "1.0");
  const ReportEnvelope back = envelope_from_json(nlohmann::json::parse(j.dump()));
  CHECK(payload_text(back) == payload_text(env));
  CHECK(back.seed == 7);
  CHECK(back.pass);

  nlohmann::json newer = j;
  newer["schema_version"] = "1.4";
  CHECK(envelope_from_json(newer).schema_minor == 4);
  nlohmann::json major = j;
  major["schema_version"] = "2.0";
  CHECK_THROWS_AS(envelope_from_json(major), ConfigError);
  nlohmann::json missing = j;
  missing.erase("payload");
  CHECK_THROWS_AS(envelope_from_json(missing), ConfigError);
}

TEST_CASE("number formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23}) CHECK(std::stod(fmt(v)) == v);
  CHECK(fmt(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(fmt(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(fmt(std::int64_t{-12}) == "-12");
}

TEST_CASE("csv quoting") {
  CsvTable t({"name", "value"});
  t.row({"plain", "1"}).row({"a,b", "say \"hi\""});
  CHECK(t.text() == "name,value\nplain,1\n\"a,b\",\"say \"\"hi\"\"\"\n");
  CHECK(t.rows() == 2);
  CHECK_THROWS_AS(t.row({"short"}), DomainError);
}

TEST_CASE("svg plot") {
  PlotSeries s{"decay", {1, 10, 100}, {1, 0.1, 0.01}};
  PlotOptions o{"tail", "rho", "measure", true, true};
  const std::string svg = svg_plot({s}, o);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("decay") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
}

TEST_CASE("command dispatch") {
  CHECK(cli::canonical_command("weighted_norm") == "weighted-norm");
  CHECK_THROWS_AS(cli::canonical_command("bogus"), ConfigError);
  RunConfig cfg;
  cfg.command = "packing";
  cfg.apply_override("nonsense=1");
  CHECK_THROWS_AS(cli::run_command(cfg), ConfigError);
}

TEST_CASE("same seed, same payload") {
  auto run = [](std::uint64_t seed) {
    RunConfig cfg;
    cfg.command = "packing";
    cfg.seed = seed;
    cfg.apply_override("families=10");
    cfg.apply_override("weight_checks=50");
    return cli::run_envelope(cfg);
  };
  const ReportEnvelope a = run(7), b = run(7), c = run(8);
  CHECK(payload_text(a) == payload_text(b));
  CHECK(payload_text(a) != payload_text(c));
  CHECK(a.pass);
  CHECK(a.config["values"]["families"] == "10");
}
