// infogeo: config-driven checks of information-geometric identities and bounds.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "infogeo/cli/config.hpp"
#include "infogeo/cli/csv.hpp"
#include "infogeo/cli/runner.hpp"
#include "infogeo/errors.hpp"

namespace fs = std::filesystem;
using namespace infogeo::cli;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
};

void write_text(const Options& opt, const std::string& file, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(opt.out);
  const fs::path path = fs::path(opt.out) / file;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw infogeo::ConfigError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw infogeo::ConfigError("failed writing '" + path.string() + "'");
}

std::string render(const CsvTable& t) {
  std::ostringstream s;
  write_csv(t, s);
  return s.str();
}

std::string render(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

void emit_table(const Options& opt, const std::string& stem, const CsvTable& t) {
  if (opt.format == "csv") write_text(opt, stem + ".csv", render(t));
  else write_text(opt, stem + ".json", render(table_to_json(t)));
}

int run(const std::string& command, const Options& opt) {
  SuiteConfig cfg = load_config(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;

  if (command == "divergence") emit_table(opt, "divergence", divergence_table(cfg));
  else if (command == "metric") emit_table(opt, "metric", metric_table(cfg));
  else if (command == "bound") emit_table(opt, "bound", bound_table(cfg));
  else if (command == "sweep") {
    const auto t = run_sweep(cfg);
    if (opt.format == "json") write_text(opt, fs::path(cfg.csv_path).stem().string() + ".json", render(table_to_json(t)));
    else write_text(opt, cfg.csv_path, render(t));
  } else if (command == "verify") {
    const auto outcome = run_verify(cfg);
    if (opt.format == "csv") {
      write_text(opt, "checks.csv", render(outcome.checks));
    } else {
      write_text(opt, cfg.report_path, render(outcome.report));
      if (!opt.out.empty()) write_text(opt, "checks.csv", render(outcome.checks));
    }
    const auto& s = outcome.report["summary"];
    std::cerr << "verify: " << s["passed"] << " passed, " << s["failed"] << " failed, "
              << s["errors"] << " errors\n";
    for (const auto& r : outcome.report["records"])
      if (r["status"] == "error")
        std::cerr << "error in check " << r["name"].get<std::string>() << ": "
                  << r["error"].get<std::string>() << "\n";
    return outcome.exit_code;
  }
  return exit_pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"infogeo: information-geometric metrics, divergences and Cramer-Rao-type bounds"};
  app.set_version_flag("--version", tool_version);
  app.require_subcommand(1, 1);

  Options opt;
  app.add_option("--config", opt.config, "Suite config (.toml or .json)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", opt.out, "Output directory; stdout when omitted");
  app.add_option("--seed", opt.seed, "Override the config seed");
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  for (const char* name : {"divergence", "metric", "bound", "verify", "sweep"}) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();
  }
  app.get_subcommand("divergence")->description("KL, I_alpha and their Bayesian forms between theta and theta_prime");
  app.get_subcommand("metric")->description("Closed-form metric, Eguchi metric and Fisher metric per (theta, alpha)");
  app.get_subcommand("bound")->description("CRLB / alpha-CRLB against estimator covariances");
  app.get_subcommand("verify")->description("Run the configured checks; exit 0 pass, 1 violation, 2 error");
  app.get_subcommand("sweep")->description("Metric, bound and covariance table per (theta, alpha)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_infrastructure;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_infrastructure;
  }
}
