// cgo-forge: batch experiment runner.
//
//   cgo-forge <transport|cgo|dtn-gauge|elastic-h|identity> --config FILE [--out DIR]
//             [--quick] [--jobs N] [--seed U64]
//   cgo-forge report DIR
//   cgo-forge normalize --config FILE    (prints the normal form; hash on stderr)
//
// Output directory precedence: $CGO_FORGE_OUT, then --out, then output.dir.
// Exit codes: 0 all checks pass, 1 a check failed, 2 config/input error,
// 3 solver error, 4 I/O error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "cgoforge/experiments.hpp"

using namespace cgoforge;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kInput = 2, kSolver = 3, kIo = 4 };

void print_checks(const RunReport& r) {
  for (const Check& c : r.checks)
    std::printf("%-4s %s  value=%s %s %s%s\n", c.pass ? "PASS" : (c.blocking ? "FAIL" : "WARN"), c.name.c_str(),
                format_number(c.value).c_str(), c.relation.c_str(), format_number(c.threshold).c_str(),
                c.blocking ? "" : " (non-blocking)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex geometrical optics and elastic inverse-problem experiments"};
  app.set_version_flag("--version", artifact_version());
  app.require_subcommand(1);

  std::string config_path, out_dir, report_dir;
  bool quick = false;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  unsigned long long seed = 42;

  using Runner = RunReport (*)(const ExperimentConfig&, const RunOptions&);
  const std::vector<std::tuple<std::string, std::string, Runner>> subs = {
      {"transport", "solve the transport equation, report residuals and phase invariance", run_transport},
      {"cgo", "build CGO expansions over the tau sweep and fit decay slopes", run_cgo},
      {"dtn-gauge", "gauge invariance of the DtN map under refinement, with a negative control", run_dtn_gauge},
      {"elastic-h", "H-series fit, direct H2 cross-check, quartic H0 study and Green check", run_elastic_h},
      {"identity", "identity gap and its five theta components", run_identity},
  };
  std::vector<CLI::App*> apps;
  for (const auto& [name, help, fn] : subs) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", config_path, "experiment config file")->required();
    s->add_option("--out", out_dir, "output directory (default: output.dir from the config)");
    s->add_flag("--quick", quick, "smaller grids and tau sweeps");
    s->add_option("--jobs", jobs, "worker count")->check(CLI::PositiveNumber);
    s->add_option("--seed", seed, "random seed");
    apps.push_back(s);
  }
  CLI::App* rep = app.add_subcommand("report", "consolidate the reports in a directory");
  rep->add_option("dir", report_dir, "directory with run reports")->required();
  CLI::App* norm = app.add_subcommand("normalize", "print the normal form of a config");
  norm->add_option("--config", config_path, "experiment config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInput;
  }

  try {
    if (rep->parsed()) {
      const Summary s = write_summary(report_dir);
      std::printf("%d report(s), overall %s\n", s.reports, s.passed ? "PASS" : "FAIL");
      return s.passed ? kOk : kCheckFailed;
    }
    if (norm->parsed()) {
      const ExperimentConfig cfg = load_config(config_path);
      std::fputs(dump_config(cfg).c_str(), stdout);
      std::fprintf(stderr, "config hash %s\n", config_hash(cfg).c_str());
      return kOk;
    }
    for (size_t i = 0; i < subs.size(); ++i) {
      if (!apps[i]->parsed()) continue;
      const ExperimentConfig cfg = load_config(config_path);
      std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
      if (const char* env = std::getenv("CGO_FORGE_OUT"); env && *env) dir = env;
      RunOptions opt;
      opt.quick = quick;
      opt.jobs = jobs;
      opt.seed = seed;
      const auto t0 = std::chrono::steady_clock::now();
      const RunReport r = std::get<2>(subs[i])(cfg, opt);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_report(r, dir, wall);
      print_checks(r);
      std::printf("%s: %s (config %s, %.1f s) -> %s\n", r.subcommand.c_str(), r.passed() ? "PASS" : "FAIL",
                  r.config_hash.c_str(), wall, dir.c_str());
      return r.passed() ? kOk : kCheckFailed;
    }
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIo;
  } catch (const InputError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kInput;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s (last residual %s)\n", e.what(), format_number(e.last_residual()).c_str());
    return kSolver;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kSolver;
  }
  return kInput;
}
