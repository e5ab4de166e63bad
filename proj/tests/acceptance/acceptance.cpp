// Acceptance suite: one PASS/FAIL line per criterion.
//   qclab_acceptance [--criterion N] [--out DIR]
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "qclab/distortion.hpp"
#include "qclab/errors.hpp"
#include "qclab/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path out_root = "acceptance-out";

// Payload numbers are strings when not finite.
double value(const json& j) {
  if (j.is_number()) return j.get<double>();
  return std::stod(j.get<std::string>());
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

// Runs a command in-process with the given overrides and keeps its report.
qclab::ReportEnvelope run(const std::string& command, const std::vector<std::string>& overrides, int criterion) {
  qclab::RunConfig cfg;
  cfg.command = command;
  cfg.serial = true;
  for (const auto& o : overrides) cfg.apply_override(o);
  qclab::cli::CommandResult result;
  qclab::ReportEnvelope env = qclab::cli::run_envelope(cfg, &result);
  const fs::path dir = out_root / ("c" + std::to_string(criterion));
  fs::create_directories(dir);
  std::ofstream(dir / "report.json") << qclab::to_json(env).dump(2) << "\n";
  for (const auto& [name, text] : result.sidecars) std::ofstream(dir / name, std::ios::binary) << text;
  return env;
}

// All named checks must hold and the run must fit its time budget.
Outcome require_checks(const qclab::ReportEnvelope& env, const std::vector<std::string>& names, double budget) {
  Outcome o{true, ""};
  const json& checks = env.payload.at("checks");
  for (const auto& n : names) {
    const bool ok = checks.contains(n) && checks.at(n).get<bool>();
    o.pass = o.pass && ok;
    o.detail += n + (ok ? "=ok " : "=FAILED ");
  }
  const bool in_time = env.wall_clock_seconds < budget;
  o.pass = o.pass && in_time;
  o.detail += "runtime " + num(env.wall_clock_seconds) + " s";
  if (std::isfinite(budget)) o.detail += " (limit " + num(budget) + " s)";
  return o;
}

Outcome c1() {
  const auto env = run("transform-check", {}, 1);
  Outcome o = require_checks(env, {"disk_indicator_outside_rel_l2", "parseval_defect", "gaussian_bump_sup_error"}, 30);
  const json& m = env.payload;
  o.detail = "rel_l2 " + num(value(m["disk_indicator_outside_rel_l2"]["value"])) + ", parseval " +
             num(value(m["parseval_defect"]["value"])) + ", bump " +
             num(value(m["gaussian_bump_sup_error"]["value"])) + "; " + o.detail;
  return o;
}

Outcome c2() {
  const auto env = run("solve", {}, 2);
  Outcome o = require_checks(env, {"identity", "residual_ratio", "radial_stretch"}, 120);
  const json& p = env.payload;
  o.detail = "radial max rel error " + num(value(p["radial_max_rel_error"])) + ", identity error " +
             num(value(p["identity_max_error"])) + ", worst residual ratio " +
             num(value(p["max_residual_ratio"])) + "; " + o.detail;
  return o;
}

Outcome c3() {
  const auto env = run("smirnov", {"corollary_seeds=0", "outside_trials=0"}, 3);
  Outcome o = require_checks(env, {"smirnov"}, 1800);
  const json& p = env.payload;
  o.detail = std::to_string(p["smirnov_trials"].size()) + " trials, " +
             std::to_string(p["smirnov_failures"].get<int>()) + " failures, max ratio " +
             num(value(p["smirnov_max_ratio"])) + "; " + o.detail;
  return o;
}

Outcome c4() {
  double worst = 0.0;
  for (double k : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    worst = std::max(worst, std::abs(qclab::exponent_t_of_k(2.0, k) - 2.0));
    worst = std::max(worst, std::abs(qclab::exponent_t_of_k(1.0, k) - (1.0 + k * k)));
  }
  for (double t : {0.1, 0.5, 0.8, 1.0, 1.5, 1.9, 2.0}) worst = std::max(worst, std::abs(qclab::exponent_t_of_k(t, 0.0) - t));
  return {worst <= 1e-14, "max deviation " + num(worst) + " (limit 1e-14)"};
}

Outcome c5() {
  const auto env = run("packing", {}, 5);
  Outcome o = require_checks(env, {"alpha_matches_enumeration", "tau_matches_enumeration", "weight_bound"}, 60);
  const json& p = env.payload;
  o.detail = std::to_string(p["families"].size()) + " families, " + std::to_string(p["weight_checks"].get<long>()) +
             " weight checks, " + std::to_string(p["weight_violations"].get<long>()) + " violations; " + o.detail;
  return o;
}

Outcome c6() {
  const auto env = run("weighted-norm", {"levels=3,4,5,6"}, 6);
  Outcome o = require_checks(env, {"trend_within_limit", "single_square"}, INFINITY);
  const json& p = env.payload;
  o.detail = "trend ratio " + num(value(p["trend_ratio"])) + " (limit 2), single square " +
             num(value(p["single_square_estimate"])) + " (limit 1.05); " + o.detail;
  return o;
}

Outcome c7() {
  const auto env = run("hausdorff", {"k=0.2,0.4", "seeds=10", "M=10"}, 7);
  Outcome o = require_checks(env, {"upper_sums_bounded", "lower_sums_grow", "box_dimension"}, 1200);
  const json& p = env.payload;
  int deepest = 99, growing = 0;
  double max_dim = 0.0;
  for (const auto& r : p["runs"]) {
    deepest = std::min(deepest, r["generations_computed"].get<int>());
    const double g = value(r["growth_4_to_deepest"]);
    growing += std::isfinite(g) && g >= 1.5;
    max_dim = std::max(max_dim, value(r["box_dimension"]));
  }
  o.detail = "generations reached " + std::to_string(deepest) + " of 10, lower-sum growth >= 1.5 on " +
             std::to_string(growing) + " runs up to the reached depth, max box dimension " + num(max_dim) + "; " +
             o.detail;
  return o;
}

Outcome c8() {
  const auto env = run("riemann", {"k=0.3,0.5,0.7", "solver_seeds=0"}, 8);
  Outcome o = require_checks(env, {"tail_slope", "tail_constant", "area_distortion_stable", "layer_cake"}, 600);
  double slope = 0.0, constant = 0.0, spread = 0.0, cake = 0.0;
  for (const auto& r : env.payload["power_map"]) {
    slope = std::max(slope, std::abs(value(r["slope"]) - value(r["reference_slope"])));
    constant = std::max(constant, value(r["constant_rel_error"]));
    spread = std::max(spread, value(r["area_ratio_spread"]));
    for (const auto& c : r["layer_cake"]) cake = std::max(cake, value(c["discrepancy"]));
  }
  o.detail = "slope error " + num(slope) + ", constant error " + num(constant) + ", area spread " + num(spread) +
             ", layer cake " + num(cake) + "; " + o.detail;
  return o;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs the installed executable twice per command and compares payload bytes.
Outcome c9() {
  const std::vector<std::pair<std::string, std::string>> commands{
      {"transform-check", ""},
      {"solve", ""},
      {"packing", ""},
      {"weighted-norm", ""},
      {"smirnov", "k=0.4 t=0.5,1 seeds=2 corollary_seeds=1 corollary_levels=2,3 outside_trials=2"},
      {"hausdorff", "k=0.3 seeds=1 N=1024 growth_seeds=0"},
      {"riemann", "solver_seeds=1"},
  };
  const fs::path base = out_root / "c9";
  fs::create_directories(base);
  Outcome o{true, ""};
  for (const auto& [cmd, extra] : commands) {
    std::string payloads[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = base / (cmd + "-" + std::to_string(rep));
      fs::remove_all(dir);
      const std::string line = std::string("\"") + QCLAB_EXE + "\" " + cmd + " --seed 7 --serial --out \"" +
                               dir.string() + "\" " + extra + " > \"" + dir.string() + ".log\" 2>&1";
      const int status = std::system(line.c_str());
      if (status == -1 || !fs::exists(dir / "report.json")) {
        o.pass = false;
        o.detail += cmd + ": no report; ";
        break;
      }
      const json report = json::parse(read_file(dir / "report.json"));
      const qclab::ReportEnvelope env = qclab::envelope_from_json(report);
      payloads[rep] = report.at("payload").dump();
      if (qclab::payload_text(env) != payloads[rep]) {
        o.pass = false;
        o.detail += cmd + ": envelope round trip changed the payload; ";
      }
    }
    const bool same = !payloads[0].empty() && payloads[0] == payloads[1];
    o.pass = o.pass && same;
    o.detail += cmd + (same ? " identical (" + std::to_string(payloads[0].size()) + " bytes); " : " DIFFERS; ");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qclab acceptance suite"};
  int only = 0;
  std::string out;
  app.add_option("--criterion", only, "run one criterion (1-9)")->check(CLI::Range(1, 9));
  app.add_option("--out", out, "directory for the criterion reports");
  CLI11_PARSE(app, argc, argv);
  if (!out.empty()) out_root = out;
  qclab::set_warning_sink([](const std::string& w) { std::cerr << "warning: " << w << "\n"; });

  const std::vector<std::function<Outcome()>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9};
  bool all = true;
  for (int c = 1; c <= 9; ++c) {
    if (only && c != only) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << c << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << "  [" << num(secs)
              << " s]" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
