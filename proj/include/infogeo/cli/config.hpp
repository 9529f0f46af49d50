#pragma once

// Suite configuration: one schema, read from TOML or JSON depending on the file extension.
// Every validation error carries the line of the offending key.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infogeo/divergence.hpp"
#include "infogeo/linalg.hpp"
#include "infogeo/manifold.hpp"

namespace infogeo::cli {

enum class ConfigFormat { toml, json };

struct ModelSpec {
  std::string name;  // bernoulli | binomial | categorical | logit_linear
  int n = 0;         // binomial trials
  int d = 0;         // categorical size
  Mat statistics;    // logit_linear, d×k
  std::optional<Box> box;
};

struct PriorSpec {
  std::string name;  // uniform | ramp | beta
  double a = 1.0;
  double b = 1.0;
};

struct EstimatorFixture {
  std::string name;
  Mat values;  // alphabet_size × k
  bool unbiased = false;  // claim checked by the `unbiasedness` check
};

/// Check names accepted in `checks`.
const std::vector<std::string>& known_checks();

/// A selected check with its α list (the suite-wide list unless overridden).
struct CheckSpec {
  std::string name;
  std::vector<double> alphas;
};

struct SuiteConfig {
  std::string source;  // path or "<string>"
  std::string digest;  // FNV-1a of the raw bytes, hex

  ModelSpec model_spec;
  ParametricModel model;
  std::vector<Vec> thetas;
  bool theta_from_grid = false;
  std::optional<Vec> theta_prime;
  std::vector<double> alphas{1.0};

  std::optional<PriorSpec> prior_spec;
  std::optional<PriorDensity> prior;
  int grid_points = 201;

  std::vector<CheckSpec> checks;
  std::vector<EstimatorFixture> estimators;
  DiffConfig diff;

  std::string report_path = "report.json";
  std::string csv_path = "sweep.csv";

  std::uint64_t seed = 0;
  long mc_samples = 20000;
  int divergence_samples = 500;
};

SuiteConfig load_config(const std::string& path);
SuiteConfig parse_config(const std::string& text, ConfigFormat format,
                         const std::string& source = "<string>");

std::string fnv1a_hex(const std::string& bytes);

}  // namespace infogeo::cli
