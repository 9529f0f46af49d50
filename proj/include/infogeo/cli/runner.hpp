#pragma once

// Command implementations behind the `infogeo` executable. Everything here is deterministic
// for a fixed (config, seed, version); cells are evaluated in config order.

#include <string>

#include <json.hpp>

#include "infogeo/cli/config.hpp"
#include "infogeo/cli/csv.hpp"

namespace infogeo::cli {

inline constexpr const char* tool_version = "0.1.0";

enum ExitCode : int { exit_pass = 0, exit_violation = 1, exit_infrastructure = 2 };

struct VerifyOutcome {
  nlohmann::ordered_json report;
  CsvTable checks;  // one row per record: name, inputs_digest, tolerance, passed
  int exit_code = exit_pass;
};

/// Runs every selected check over θ × α. A check that throws is recorded with status
/// "error" and turns the exit code into 2; a failed comparison gives 1.
VerifyOutcome run_verify(const SuiteConfig& cfg);

/// One row per (θ, α): theta, alpha, g_ij, bound_ij, cov_ij, psd_margin (i <= j, 1-based).
/// Covariance columns stay empty when the model has no unbiased estimator fixture.
CsvTable run_sweep(const SuiteConfig& cfg);

/// theta, theta_prime, alpha, kl, i_alpha[, bayesian_kl, bayesian_i_alpha]. Needs theta_prime.
CsvTable divergence_table(const SuiteConfig& cfg);
/// theta, alpha, metric_ij, eguchi_ij, fisher_ij, route_discrepancy
CsvTable metric_table(const SuiteConfig& cfg);
/// kind, theta, alpha, bound_ij, cov_ij, psd_margin, tolerance, verdict
CsvTable bound_table(const SuiteConfig& cfg);

/// Rows as objects; numeric cells become numbers, empty cells null.
nlohmann::ordered_json table_to_json(const CsvTable& table);

}  // namespace infogeo::cli
