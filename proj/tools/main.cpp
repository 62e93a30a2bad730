// ptkr: run, re-fit and self-check coupled PT-symmetric kicked rotors.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ptkr/config.hpp"
#include "ptkr/errors.hpp"
#include "ptkr/runner.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

struct Common {
  std::string config_path;
  std::string out_dir;
  int workers = 0;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "key = value configuration file");
  cmd->add_option("--out", c.out_dir, "output directory (overrides output_dir)");
  cmd->add_option("--workers", c.workers, "worker threads (overrides workers)")->check(CLI::PositiveNumber);
  cmd->add_option("--set", c.sets, "override one key, key=value (repeatable)");
}

ptkr::RunConfig load(const Common& c) {
  std::string text;
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw ptkr::ValidationError("config", "cannot read " + c.config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto overrides = c.sets;
  if (!c.out_dir.empty()) overrides.push_back("output_dir=" + c.out_dir);
  if (c.workers > 0) overrides.push_back("workers=" + std::to_string(c.workers));
  return ptkr::parse_config(text, overrides);
}

// Machine-readable failure record, next to the outputs when possible.
void report_error(const std::string& kind, const std::string& message, int code, const fs::path& dir) {
  nlohmann::json rec = {{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << rec.dump() << '\n';
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / "error.json");
  if (out) out << rec.dump(1) << '\n';
}

int summarize(const ptkr::RunSummary& s) {
  for (const auto& f : s.files) std::cout << "wrote " << f.string() << '\n';
  for (const auto& r : s.results) {
    if (r.point.error) {
      std::cerr << "point lambda=" << r.point.lambda << " epsilon=" << r.point.epsilon
                << " failed: " << *r.point.error << '\n';
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled PT-symmetric quantum kicked rotors"};
  app.require_subcommand(1);

  Common run_opts, fit_opts;
  std::string fit_input;
  auto* run = app.add_subcommand("run", "evolve a single point or a (lambda, epsilon) sweep");
  add_common(run, run_opts);
  auto* fit = app.add_subcommand("fit", "re-fit trajectory files with new windows and thresholds");
  add_common(fit, fit_opts);
  fit->add_option("--in", fit_input, "directory holding trajectory_*.csv (default: the output directory)");
  auto* check = app.add_subcommand("check", "oracle-equivalence and property suite on a 16-mode lattice");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  if (check->parsed()) {
    bool ok = true;
    for (const auto& r : ptkr::self_check()) {
      std::printf("%s  %-48s deviation %.3e (tolerance %.0e)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                  r.deviation, r.tolerance);
      ok = ok && r.passed;
    }
    return ok ? kOk : kRuntimeError;
  }

  const Common& opts = run->parsed() ? run_opts : fit_opts;
  ptkr::RunConfig config;
  try {
    config = load(opts);
  } catch (const ptkr::ParseError& e) {
    report_error("ParseError", e.what(), kConfigError, {});
    return kConfigError;
  } catch (const ptkr::ValidationError& e) {
    report_error("ValidationError", e.what(), kConfigError, {});
    return kConfigError;
  }

  try {
    if (run->parsed()) return summarize(ptkr::execute_run(config));
    const fs::path input = fit_input.empty() ? config.output_dir : fs::path(fit_input);
    return summarize(ptkr::execute_fit(config, input));
  } catch (const std::exception& e) {
    report_error("RuntimeError", e.what(), kRuntimeError, config.output_dir);
    return kRuntimeError;
  }
}
