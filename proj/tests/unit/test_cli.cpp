#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "infogeo/cli/config.hpp"
#include "infogeo/cli/csv.hpp"
#include "infogeo/cli/runner.hpp"
#include "infogeo/errors.hpp"

using namespace infogeo;
using namespace infogeo::cli;

namespace {

const std::string config_dir = INFOGEO_CONFIG_DIR;

SuiteConfig toml(const std::string& text) { return parse_config(text, ConfigFormat::toml); }

template <class E>
std::string message_of(const std::string& text, ConfigFormat fmt = ConfigFormat::toml) {
  try {
    parse_config(text, fmt);
  } catch (const E& e) {
    return e.what();
  }
  ADD_FAILURE() << "no exception for:\n" << text;
  return {};
}

}  // namespace

TEST(Config, MinimalSuite) {
  const auto cfg = toml("model = \"bernoulli\"\ntheta = 0.5\nchecks = [\"crlb\"]\n");
  EXPECT_EQ(cfg.model.name, "bernoulli");
  ASSERT_EQ(cfg.thetas.size(), 1u);
  EXPECT_EQ(cfg.thetas[0][0], 0.5);
  ASSERT_EQ(cfg.checks.size(), 1u);
  EXPECT_EQ(cfg.checks[0].name, "crlb");
  EXPECT_EQ(cfg.checks[0].alphas, std::vector<double>{1.0});
  EXPECT_EQ(load_config(config_dir + "/minimal.json").checks[0].name, "crlb");
}

TEST(Config, ThetaOutsideDomainNamesTheta) {
  const auto msg = message_of<DomainError>("model = \"bernoulli\"\ntheta = 1.5\n");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("Theta = (0, 1)"), std::string::npos) << msg;

  const auto simplex = message_of<DomainError>(
      "model = { name = \"categorical\", d = 3 }\nthetas = [[0.2, 0.3], [0.6, 0.5]]\n");
  EXPECT_NE(simplex.find("line 2"), std::string::npos) << simplex;
  EXPECT_NE(simplex.find("sum(theta) < 1"), std::string::npos) << simplex;
}

TEST(Config, AlphaOneInIAlphaCheckPointsToKl) {
  const auto msg = message_of<DispatchError>(
      "model = \"bernoulli\"\ntheta = 0.5\nchecks = [{ name = \"i_alpha_eguchi\", alpha = [2.0, 1.0] }]\n");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("kl"), std::string::npos) << msg;
  // The suite-wide list applies when the check has none.
  EXPECT_THROW(toml("model = \"bernoulli\"\ntheta = 0.5\nchecks = [\"scale_relation\"]\n"), DispatchError);
}

TEST(Config, ErrorsAreLineAnchored) {
  struct Case {
    std::string text;
    std::string needle;
  };
  const std::vector<Case> cases{
      {"model = \"gamma\"\ntheta = 0.5\n", "line 1: model: unknown model 'gamma'"},
      {"model = \"bernoulli\"\n\ntheta = 0.5\nchecks = [\"crlb\", \"nope\"]\n", "line 4"},
      {"model = \"bernoulli\"\ntheta = 0.5\n[diff]\nh2 = -1.0\n", "line 3"},
      {"model = \"bernoulli\"\ntheta = [0.5\n", "TOML parse error"},
      {"model = \"bernoulli\"\ntheta = 0.5\nprior = \"ramp\"\ngrid_points = 3\n", "line 4"},
      {"model = \"bernoulli\"\ntheta = 0.5\nchecks = [\"bayesian_divergence\"]\n", "needs a `prior`"},
      {"model = \"bernoulli\"\ntheta = 0.5\n[[estimators]]\nvalues = [1.0, 2.0, 3.0]\n", "line 4"},
      {"model = \"bernoulli\"\ntheta = 0.5\ntypo = 1\n", "line 3: typo: unknown key"},
  };
  for (const auto& c : cases) {
    try {
      toml(c.text);
      ADD_FAILURE() << "accepted:\n" << c.text;
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find(c.needle), std::string::npos) << e.what();
    }
  }
}

TEST(Config, JsonErrorsAreLineAnchored) {
  const auto msg = message_of<ConfigError>("{\n  \"model\": \"bernoulli\",\n  \"theta\": 0.5,\n  \"seed\": -3\n}\n",
                                           ConfigFormat::json);
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  const auto parse = message_of<ConfigError>("{\n  \"model\": \"bernoulli\",\n  \"theta\": ,\n}\n",
                                             ConfigFormat::json);
  EXPECT_NE(parse.find("line 3"), std::string::npos) << parse;
}

TEST(Config, GridAndDefaults) {
  const auto cfg = toml(
      "model = \"bernoulli\"\ntheta_grid = { lower = 0.05, upper = 0.95, step = 0.05 }\nalpha = []\n");
  ASSERT_EQ(cfg.thetas.size(), 19u);
  EXPECT_EQ(cfg.thetas[9][0], 0.5);
  EXPECT_EQ(cfg.alphas, std::vector<double>{1.0});
  EXPECT_THROW(toml("model = \"bernoulli\"\ntheta_grid = { lower = 0.0, upper = 0.5, step = 0.1 }\n"),
               DomainError);
  const auto logit = parse_config(R"({"model": {"name": "logit_linear", "statistics": [[-1], [0], [2]]},
                                      "thetas": [-1.5, 2.0]})",
                                  ConfigFormat::json);
  EXPECT_EQ(logit.model.param_dim(), 1);
  EXPECT_EQ(logit.thetas.size(), 2u);
}

TEST(Csv, DoublesRoundTrip) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> exponent(-300.0, 300.0), mantissa(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = mantissa(rng) * std::pow(10.0, exponent(rng));
    EXPECT_EQ(*parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.25), "0.25");
  EXPECT_EQ(format_double(4.0), "4");
  EXPECT_FALSE(parse_double("").has_value());
  EXPECT_THROW(parse_double("1.5x"), ConfigError);
}

TEST(Sweep, BernoulliOracleRowsAndRoundTrip) {
  const auto cfg = load_config(config_dir + "/bernoulli_sweep.toml");
  const auto table = run_sweep(cfg);
  EXPECT_EQ(table.header, (std::vector<std::string>{"theta", "alpha", "g_11", "bound_11", "cov_11", "psd_margin"}));
  ASSERT_EQ(table.rows.size(), 38u);

  bool found = false;
  for (const auto& r : table.rows) {
    if (*parse_double(r[0]) == 0.5 && *parse_double(r[1]) == 1.0) {
      found = true;
      EXPECT_NEAR(*parse_double(r[2]), 4.0, 1e-12);
      EXPECT_NEAR(*parse_double(r[3]), 0.25, 1e-12);
    }
    EXPECT_GE(*parse_double(r[5]), -1e-9);
  }
  EXPECT_TRUE(found);

  std::stringstream io;
  write_csv(table, io);
  const auto back = read_csv(io);
  EXPECT_EQ(back.header, table.header);
  ASSERT_EQ(back.rows.size(), table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    for (std::size_t j = 0; j < table.header.size(); ++j)
      EXPECT_EQ(*parse_double(back.rows[i][j]), *parse_double(table.rows[i][j]));
}

TEST(Verify, ExitCodesAndDeterminism) {
  const auto good = run_verify(load_config(config_dir + "/default_suite.toml"));
  EXPECT_EQ(good.exit_code, exit_pass);
  EXPECT_EQ(good.report["summary"]["failed"], 0);
  EXPECT_GT(good.report["summary"]["total"].get<int>(), 100);
  for (const auto& r : good.report["records"])
    if (r["values"].contains("psd_margin"))
      EXPECT_GE(r["values"]["psd_margin"].get<double>(), -r["tolerance"].get<double>()) << r.dump();

  const auto again = run_verify(load_config(config_dir + "/default_suite.toml"));
  EXPECT_EQ(good.report.dump(2), again.report.dump(2));

  auto reseeded = load_config(config_dir + "/default_suite.toml");
  reseeded.seed += 1;
  EXPECT_NE(run_verify(reseeded).report.dump(), good.report.dump());

  const auto bad = run_verify(load_config(config_dir + "/negative_control.toml"));
  EXPECT_EQ(bad.exit_code, exit_violation);
  ASSERT_EQ(bad.report["records"].size(), 1u);
  EXPECT_EQ(bad.report["records"][0]["name"], "unbiasedness");
  EXPECT_EQ(bad.report["records"][0]["status"], "fail");
}

TEST(Verify, InfrastructureErrorsExitTwo) {
  // θ = 1e-3 is interior but inside the finite-difference margin.
  const auto cfg = toml("model = \"bernoulli\"\ntheta = 0.001\nchecks = [\"fisher_eguchi\", \"crlb\"]\n");
  const auto out = run_verify(cfg);
  EXPECT_EQ(out.exit_code, exit_infrastructure);
  EXPECT_EQ(out.report["records"][0]["status"], "error");
  EXPECT_EQ(out.report["records"][1]["status"], "pass");

  const auto logit = parse_config(R"({"model": {"name": "logit_linear", "statistics": [[-1], [0], [2]]},
                                      "theta": 0.5, "checks": ["crlb"]})",
                                  ConfigFormat::json);
  EXPECT_EQ(run_verify(logit).exit_code, exit_infrastructure);
}
