#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "qclab/errors.hpp"

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw qclab::Error("cannot write " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qclab: numerical experiments on quasiconformal distortion"};
  std::string command, config_file, out_dir;
  std::uint64_t seed = 0;
  bool serial = false;
  std::vector<std::string> overrides;

  std::string names;
  for (const auto& n : qclab::cli::command_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("command", command, "one of: " + names)->required();
  app.add_option("--config", config_file, "key = value configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out_dir, "output directory (default $QCLAB_OUT or ./qclab-out)");
  app.add_flag("--serial", serial, "deterministic serial execution");
  app.add_option("overrides", overrides, "key=value overrides");
  CLI11_PARSE(app, argc, argv);

  qclab::RunConfig cfg;
  try {
    if (!config_file.empty()) cfg = qclab::RunConfig::from_file(config_file);
    for (const auto& o : overrides) cfg.apply_override(o);
    if (*seed_opt) cfg.seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.serial = serial;
    cfg.command = qclab::cli::canonical_command(command);
  } catch (const qclab::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  if (cfg.out_dir.empty()) {
    const char* env = std::getenv("QCLAB_OUT");
    cfg.out_dir = env && *env ? env : "qclab-out";
  }

  qclab::cli::CommandResult result;
  qclab::ReportEnvelope env;
  try {
    env = qclab::cli::run_envelope(cfg, &result);
  } catch (const qclab::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  try {
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    write_file(dir / "report.json", qclab::to_json(env).dump(2) + "\n");
    for (const auto& [name, contents] : result.sidecars) write_file(dir / name, contents);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  std::cout << cfg.command << ": " << (env.pass ? "pass" : "FAIL") << " (" << env.wall_clock_seconds << " s), report in "
            << (fs::path(cfg.out_dir) / "report.json").string() << "\n";
  if (!env.pass) {
    for (const auto& [name, ok] : env.payload["checks"].items())
      if (!ok.get<bool>()) std::cout << "  failed check: " << name << "\n";
  }
  return env.pass ? 0 : 1;
}
