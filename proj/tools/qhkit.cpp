#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qhkit/error.hpp"
#include "qhkit/experiments.hpp"
#include "qhkit/report.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfiguration = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(const qhkit::Error& e) {
  return e.code() == qhkit::ErrorCode::kConfiguration || e.code() == qhkit::ErrorCode::kIo ? kExitConfiguration
                                                                                          : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasihyperbolic geometry experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "json";
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run an experiment and write its report");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_path, "Report path")->required();
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  run->add_flag("-q,--quiet", quiet, "Suppress the summary line");

  auto* validate = app.add_subcommand("validate", "Parse and validate a config without running it");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  app.add_subcommand("list-experiments", "Print the known experiment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfiguration;
  }

  try {
    if (app.got_subcommand("list-experiments")) {
      for (const auto name : qhkit::kExperimentNames) std::cout << name << '\n';
      return kExitPass;
    }
    if (app.got_subcommand("validate")) {
      const qhkit::ExperimentConfig cfg = qhkit::load_config(config_path);
      std::cout << config_path << ": ok (" << cfg.name << ")\n";
      return kExitPass;
    }

    const qhkit::ReportFormat fmt = qhkit::parse_report_format(format);
    const qhkit::ExperimentConfig cfg = qhkit::load_config(config_path);
    const qhkit::ExperimentReport report = qhkit::run_experiment(cfg);
    qhkit::write_report(report, out_path, fmt);
    if (!quiet) {
      std::cout << report.experiment << ": " << report.rows.size() << " rows, " << report.violations()
                << " violations, " << report.skipped.size() << " skipped -> " << out_path << '\n';
    }
    return report.passed() ? kExitPass : kExitViolation;
  } catch (const qhkit::Error& e) {
    std::cerr << "qhkit: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "qhkit: internal error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
