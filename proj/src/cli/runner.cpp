#include "infogeo/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infogeo/bounds.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/estimation.hpp"
#include "infogeo/geometry.hpp"
#include "infogeo/variants.hpp"

namespace infogeo::cli {

using ojson = nlohmann::ordered_json;

namespace {

ojson to_json(const Vec& v) {
  ojson out = ojson::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

ojson to_json(const Mat& m) {
  ojson out = ojson::array();
  for (int i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

double rel_frobenius(const Mat& a, const Mat& ref) {
  return (a - ref).norm() / std::max(ref.norm(), 1e-300);
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

struct Record {
  Record(std::string n, ojson in) : name(std::move(n)), inputs(std::move(in)) {}

  std::string name;
  ojson inputs;
  ojson values = ojson::object();
  double tolerance = 0.0;
  bool passed = false;
  std::vector<std::string> notes;
  std::string error;
};

/// The estimators a check should treat as unbiased: fixtures that claim it, else the
/// family's natural one. Empty for families without one (logit-linear) and no fixtures.
std::vector<EstimatorTable> unbiased_estimators(const SuiteConfig& cfg) {
  std::vector<EstimatorTable> out;
  for (const auto& fx : cfg.estimators)
    if (fx.unbiased) out.emplace_back(fx.name, fx.values);
  if (out.empty() && cfg.model.family != ModelFamily::logit_linear &&
      cfg.model.family != ModelFamily::custom) {
    auto e = natural_unbiased_estimator(cfg.model);
    e.name = "natural";
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<EstimatorTable> all_estimators(const SuiteConfig& cfg) {
  std::vector<EstimatorTable> out;
  for (const auto& fx : cfg.estimators) out.emplace_back(fx.name, fx.values);
  return out;
}

void require_estimators(const std::vector<EstimatorTable>& est, const std::string& check) {
  if (est.empty())
    throw ConfigError("check '" + check + "' needs an estimator fixture marked unbiased = true");
}

MetricMatrix metric_for(const SuiteConfig& cfg, const Vec& theta, double alpha) {
  return alpha == 1.0 ? fisher_metric(cfg.model, theta, cfg.diff)
                      : alpha_metric(cfg.model, theta, alpha, cfg.diff);
}

DivergenceHandle divergence_for(const SuiteConfig& cfg, double alpha) {
  return alpha == 1.0 ? kl_divergence(cfg.model) : i_alpha_divergence(cfg.model, alpha);
}

/// Covariance of the estimator that the α-bound speaks about: plain θ̂ at α = 1, the centered
/// escort transform θ + (p/p^(α))(θ̂ − θ) under p^(α) otherwise.
Mat bound_covariance(const SuiteConfig& cfg, const Vec& theta, double alpha, const EstimatorTable& est) {
  if (alpha == 1.0) return exact_moments(cfg.model, theta, est).covariance;
  const auto F = EscortMap::alpha(alpha);
  const auto e = escort_estimator(cfg.model, theta, est, F, EscortDirection::to_escort_centered);
  return exact_moments(cfg.model, theta, e, F).covariance;
}

ojson cell_inputs(const SuiteConfig& cfg, const Vec& theta, std::optional<double> alpha) {
  ojson in = ojson::object();
  in["model"] = cfg.model.name;
  in["theta"] = to_json(theta);
  if (alpha) in["alpha"] = *alpha;
  return in;
}

Box sampling_box(const SuiteConfig& cfg) {
  Box b = cfg.model.domain;
  if (cfg.prior) {
    b.lower = b.lower.cwiseMax(cfg.prior->support.lower);
    b.upper = b.upper.cwiseMin(cfg.prior->support.upper);
  }
  const Vec w = b.upper - b.lower;
  b.lower += 0.05 * w;
  b.upper -= 0.05 * w;
  return b;
}

ThetaGrid prior_grid(const SuiteConfig& cfg) {
  const int k = cfg.model.param_dim();
  const int per_axis = k == 1 ? cfg.grid_points
                              : std::max(8, static_cast<int>(std::lround(
                                                std::pow(cfg.grid_points, 1.0 / k))));
  return ThetaGrid::midpoint(cfg.prior->support, std::vector<int>(static_cast<std::size_t>(k), per_axis));
}

// ---- checks ---------------------------------------------------------------------------

void check_fisher_eguchi(const SuiteConfig& cfg, const CheckSpec&, std::vector<Record>& out) {
  for (const auto& t : cfg.thetas) {
    Record r{"fisher_eguchi", cell_inputs(cfg, t, std::nullopt)};
    const auto fd = eguchi_metric(kl_divergence(cfg.model), cfg.model, t, cfg.diff);
    const auto an = fisher_metric(cfg.model, t, cfg.diff);
    const double err = rel_frobenius(fd.entries, an.entries);
    r.values["eguchi"] = to_json(fd.entries);
    r.values["fisher"] = to_json(an.entries);
    r.values["rel_frobenius"] = err;
    r.tolerance = 1e-4;
    r.passed = err <= r.tolerance;
    out.push_back(std::move(r));
  }
}

void check_i_alpha_eguchi(const SuiteConfig& cfg, const CheckSpec& spec, std::vector<Record>& out) {
  for (const auto& t : cfg.thetas)
    for (double a : spec.alphas) {
      Record r{"i_alpha_eguchi", cell_inputs(cfg, t, a)};
      const auto fd = eguchi_metric(i_alpha_divergence(cfg.model, a), cfg.model, t, cfg.diff);
      const auto an = alpha_metric(cfg.model, t, a, cfg.diff);
      const double err = rel_frobenius(fd.entries, an.entries);
      r.values["eguchi"] = to_json(fd.entries);
      r.values["alpha_metric"] = to_json(an.entries);
      r.values["rel_frobenius"] = err;
      r.tolerance = 1e-4;
      r.passed = err <= r.tolerance;
      out.push_back(std::move(r));
    }
}

void check_scale_relation(const SuiteConfig& cfg, const CheckSpec& spec, std::vector<Record>& out) {
  for (const auto& t : cfg.thetas)
    for (double a : spec.alphas) {
      Record r{"scale_relation", cell_inputs(cfg, t, a)};
      const auto gen = gen_metric(cfg.model, t, kl_generator(), EscortMap::alpha(a), cfg.diff);
      const Mat scaled = a * a * alpha_metric(cfg.model, t, a, cfg.diff).entries;
      const double err = rel_frobenius(gen.entries, scaled);
      r.values["gen_metric"] = to_json(gen.entries);
      r.values["alpha_sq_alpha_metric"] = to_json(scaled);
      r.values["rel_frobenius"] = err;
      r.tolerance = 1e-8;
      r.passed = err <= r.tolerance;
      out.push_back(std::move(r));
    }
}

void check_duality(const SuiteConfig& cfg, const CheckSpec& spec, std::vector<Record>& out) {
  for (const auto& t : cfg.thetas)
    for (double a : spec.alphas) {
      Record r{"duality", cell_inputs(cfg, t, a)};
      const auto D = divergence_for(cfg, a);
      r.inputs["divergence"] = D.name;
      const double res = duality_residual(D, cfg.model, t, cfg.diff).max_abs();
      r.values["max_abs_residual"] = res;
      r.tolerance = 3e-3;
      r.passed = res <= r.tolerance;
      out.push_back(std::move(r));
    }
}

void check_differential(const SuiteConfig& cfg, const CheckSpec& spec, std::vector<Record>& out) {
  const int d = cfg.model.alphabet_size();
  const bool full_chart = cfg.model.param_dim() == d - 1;
  const CounterRng rng(cfg.seed);
  std::uint64_t draw = 0;
  for (const auto& t : cfg.thetas)
    for (double a : spec.alphas) {
      Record r{"differential", cell_inputs(cfg, t, a)};
      const auto G = metric_for(cfg, t, a);
      double worst = full_chart ? 0.0 : std::numeric_limits<double>::infinity();
      for (int rep = 0; rep < 5; ++rep) {
        Vec A(d);
        for (int x = 0; x < d; ++x) A[x] = 4.0 * rng.uniform(draw++) - 2.0;
        const double var = escort_centered_variance(cfg.model, t, A, a);
        const double norm = norm_of_differential(cfg.model, t, A, G, cfg.diff);
        const double gap = (var - norm) / (1.0 + std::abs(norm));
        worst = full_chart ? std::max(worst, std::abs(gap)) : std::min(worst, gap);
      }
      r.inputs["random_vectors"] = 5;
      r.values["mode"] = full_chart ? "equality" : "inequality";
      r.values[full_chart ? "max_rel_gap" : "min_rel_gap"] = worst;
      r.tolerance = 1e-8;
      r.passed = full_chart ? worst <= r.tolerance : worst >= -r.tolerance;
      out.push_back(std::move(r));
    }
}

void check_crlb(const SuiteConfig& cfg, const CheckSpec& spec, std::vector<Record>& out) {
  const auto ests = unbiased_estimators(cfg);
  require_estimators(ests, "crlb");
  for (const auto& est : ests)
    for (const auto& t : cfg.thetas)
      for (double a : spec.alphas) {
        Record r{"crlb", cell_inputs(cfg, t, a)};
        r.inputs["estimator"] = est.name;
        const Mat bound = inverse_metric_bound(metric_for(cfg, t, a));
        const auto rep = compare(a == 1.0 ? "crlb" : "alpha_crlb", bound, bound_covariance(cfg, t, a, est));
        r.values["bound"] = to_json(rep.bound);
        r.values["covariance"] = to_json(*rep.covariance);
        r.values["psd_margin"] = rep.psd_margin;
        r.tolerance = rep.tolerance;
        r.passed = rep.verdict == Verdict::holds;
        if (a != 1.0)
          r.notes.push_back("covariance of the centered escort transform, evaluated at the true theta");
        out.push_back(std::move(r));
      }
}

void check_unbiasedness(const SuiteConfig& cfg, const CheckSpec&, std::vector<Record>& out) {
  const auto ests = unbiased_estimators(cfg);
  require_estimators(ests, "unbiasedness");
  for (const auto& est : ests) {
    Record r{"unbiasedness", ojson::object()};
    r.inputs["model"] = cfg.model.name;
    r.inputs["estimator"] = est.name;
    ojson grid = ojson::array();
    for (const auto& t : cfg.thetas) grid.push_back(to_json(t));
    r.inputs["theta_grid"] = std::move(grid);
    const auto rep = unbiasedness_check(cfg.model, est, cfg.thetas);
    r.values["max_deviation"] = rep.max_deviation;
    r.values["worst_theta"] = to_json(rep.worst_theta);
    r.tolerance = 1e-9;
    r.passed = rep.passed;
    out.push_back(std::move(r));
  }
}

void check_biased_crlb(const SuiteConfig& cfg, const CheckSpec&, std::vector<Record>& out) {
  auto ests = all_estimators(cfg);
  if (ests.empty())
    ests.emplace_back("zero", Mat::Zero(cfg.model.alphabet_size(), cfg.model.param_dim()));
  for (const auto& est : ests)
    for (const auto& t : cfg.thetas) {
      Record r{"biased_crlb", cell_inputs(cfg, t, std::nullopt)};
      r.inputs["estimator"] = est.name;
      const auto bias = [&](const Vec& s) -> Vec { return exact_moments(cfg.model, s, est).mean - s; };
      const Mat bound = biased_cr_bound(cfg.model, t, bias, cfg.diff);
      const auto rep = compare("biased_crlb", bound, exact_mse(cfg.model, t, est));
      r.values["bound"] = to_json(rep.bound);
      r.values["mse"] = to_json(*rep.covariance);
      r.values["psd_margin"] = rep.psd_margin;
      r.tolerance = rep.tolerance;
      r.passed = rep.verdict == Verdict::holds;
      out.push_back(std::move(r));
    }
}

void check_barankin(const SuiteConfig& cfg, const CheckSpec&, std::vector<Record>& out) {
  const auto ests = unbiased_estimators(cfg);
  require_estimators(ests, "barankin");
  const double lo = cfg.model.domain.lower[0], hi = cfg.model.domain.upper[0];
  std::vector<double> candidates;
  for (int j = 1; j < 20; ++j) candidates.push_back(lo + (hi - lo) * j / 20.0);
  for (const auto& t : cfg.thetas) {
    Record r{"barankin", cell_inputs(cfg, t, std::nullopt)};
    r.inputs["candidates"] = candidates.size();
    r.inputs["max_points"] = 3;
    const auto search = barankin_search(cfg.model, t[0], candidates, 3);
    double min_var = std::numeric_limits<double>::infinity();
    for (const auto& est : ests)
      min_var = std::min(min_var, exact_moments(cfg.model, t, est).covariance(0, 0));
    const double crlb = 1.0 / fisher_metric(cfg.model, t, cfg.diff)(0, 0);
    r.values["search_value"] = search.value;
    ojson witness = ojson::array();
    for (double p : search.witness.points) witness.push_back(p);
    r.values["witness"] = std::move(witness);
    r.values["min_unbiased_variance"] = min_var;
    r.values["crlb"] = crlb;
    r.tolerance = 1e-9;
    bool ok = search.value <= min_var + r.tolerance;
    const double eps = 1e-3 * std::max(1.0, std::abs(t[0]));
    if (t[0] + eps < hi) {
      const double limit = barankin_bound(cfg.model, {t[0], {t[0], t[0] + eps}});
      const double rel = std::abs(limit - crlb) / crlb;
      r.values["epsilon_limit"] = limit;
      r.values["epsilon_limit_rel_error"] = rel;
      ok = ok && rel <= 1e-3;
    }
    r.passed = ok;
    out.push_back(std::move(r));
  }
}

void check_bayesian_crlb(const SuiteConfig& cfg, const CheckSpec& spec, std::vector<Record>& out) {
  const auto ests = unbiased_estimators(cfg);
  require_estimators(ests, "bayesian_crlb");
  const auto grid = prior_grid(cfg);
  for (const auto& est : ests)
    for (double a : spec.alphas) {
      Record r{"bayesian_crlb", ojson::object()};
      r.inputs["model"] = cfg.model.name;
      r.inputs["prior"] = cfg.prior->name;
      r.inputs["alpha"] = a;
      r.inputs["grid_nodes"] = grid.size();
      r.inputs["estimator"] = est.name;
      const auto bb = bayesian_bound(cfg.model, *cfg.prior, grid, a, std::nullopt, cfg.diff);
      const Mat cov = a == 1.0 ? prior_expected_covariance(cfg.model, *cfg.prior, grid, est)
                               : bayesian_alpha_error_covariance(cfg.model, *cfg.prior, grid, est, a);
      const auto rep = compare(a == 1.0 ? "bayesian_crlb" : "bayesian_alpha_crlb", bb.bound, cov, 1e-6);
      r.values["bound"] = to_json(bb.bound);
      r.values["information"] = to_json(bb.information);
      r.values["covariance"] = to_json(cov);
      r.values["psd_margin"] = rep.psd_margin;
      r.values["jensen_margin"] = bb.jensen_margin;
      r.tolerance = rep.tolerance;
      r.passed = rep.verdict == Verdict::holds && bb.jensen_margin >= -1e-12;
      out.push_back(std::move(r));
    }
}

void check_bayesian_divergence(const SuiteConfig& cfg, const CheckSpec&, std::vector<Record>& out) {
  const Box box = sampling_box(cfg);
  const int k = cfg.model.param_dim();
  const CounterRng rng(cfg.seed);
  std::uint64_t draw = 0;
  const auto sample = [&] {
    for (;;) {
      Vec t(k);
      for (int i = 0; i < k; ++i)
        t[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * rng.uniform(draw++);
      if (!cfg.model.slack || cfg.model.slack(t) > 0.05) return t;
    }
  };
  Record r{"bayesian_divergence", ojson::object()};
  r.inputs["model"] = cfg.model.name;
  r.inputs["prior"] = cfg.prior->name;
  r.inputs["samples"] = cfg.divergence_samples;
  double worst = std::numeric_limits<double>::infinity();
  ojson worst_at;
  for (int s = 0; s < cfg.divergence_samples; ++s) {
    const Vec t = sample(), tp = sample();
    double a = 0.1 + 2.9 * rng.uniform(draw++);
    if (std::abs(a - 1.0) < 1e-2) a = 1.0 + std::copysign(1e-2, a - 1.0);
    const double v = bayesian_i_alpha(cfg.model, *cfg.prior, t, tp, a);
    if (v < worst) {
      worst = v;
      worst_at = ojson{{"theta", to_json(t)}, {"theta_prime", to_json(tp)}, {"alpha", a}};
    }
  }
  double limit_err = 0.0;
  for (int s = 0; s < 10; ++s) {
    const Vec t = sample(), tp = sample();
    const double ref = bayesian_kl(unnormalized(cfg.model, *cfg.prior, t),
                                   unnormalized(cfg.model, *cfg.prior, tp));
    for (double a : {1.0 - 1e-3, 1.0 + 1e-3})
      limit_err = std::max(limit_err, std::abs(bayesian_i_alpha(cfg.model, *cfg.prior, t, tp, a) - ref));
  }
  r.values["min_value"] = worst;
  r.values["min_at"] = std::move(worst_at);
  r.values["alpha_to_1_max_error"] = limit_err;
  r.tolerance = 1e-12;
  r.passed = worst >= -1e-12 && limit_err <= 5e-3;
  r.notes.push_back("alpha -> 1 limit compared against the unnormalized KL with tolerance 5e-3");
  out.push_back(std::move(r));
}

void check_variants(const SuiteConfig& cfg, const CheckSpec& spec, std::vector<Record>& out) {
  for (const auto& t : cfg.thetas)
    for (double a : spec.alphas) {
      Record r{"variants", cell_inputs(cfg, t, a)};
      const auto v = compare_variants(cfg.model, t, a, cfg.diff);
      r.values["ours"] = to_json(v.ours);
      r.values["naudts"] = to_json(v.naudts);
      r.values["bercher"] = to_json(v.bercher);
      r.values["bercher_reweighted"] = to_json(v.bercher_reweighted);
      const double scale = 1.0 + max_abs(v.ours);
      if (a == 1.0) {
        const double gap = std::max({max_abs(v.naudts_minus_ours), max_abs(v.bercher_minus_ours),
                                     max_abs(v.bercher_reweighted - v.ours)});
        r.values["max_gap_to_fisher"] = gap;
        r.tolerance = 1e-12 * scale;
        r.passed = gap <= r.tolerance;
      } else {
        const double gap = max_abs(v.bercher_reweighted - v.ours);
        r.values["reweighted_gap"] = gap;
        r.tolerance = 1e-10 * scale;
        r.passed = gap <= r.tolerance;
        r.notes.push_back("naudts and bercher are reported, not compared; they differ from the alpha-metric away from alpha = 1");
      }
      out.push_back(std::move(r));
    }
}

void check_monte_carlo(const SuiteConfig& cfg, const CheckSpec&, std::vector<Record>& out) {
  const auto ests = unbiased_estimators(cfg);
  require_estimators(ests, "monte_carlo");
  const auto& est = ests.front();
  std::uint64_t cell = 0;
  for (const auto& t : cfg.thetas) {
    const std::uint64_t seed = cfg.seed + 0x9E3779B97F4A7C15ULL * cell++;
    Record r{"monte_carlo", cell_inputs(cfg, t, std::nullopt)};
    r.inputs["estimator"] = est.name;
    r.inputs["samples"] = cfg.mc_samples;
    r.inputs["seed"] = seed;
    const auto mc = monte_carlo_moments(cfg.model, t, est, cfg.mc_samples, seed);
    const auto ex = exact_moments(cfg.model, t, est);
    // Six standard errors per coordinate.
    double worst = 0.0;
    for (int i = 0; i < t.size(); ++i) {
      const double se = std::sqrt(ex.covariance(i, i) / static_cast<double>(cfg.mc_samples));
      worst = std::max(worst, std::abs(mc.mean[i] - ex.mean[i]) / (se + 1e-300));
    }
    r.values["sample_mean"] = to_json(mc.mean);
    r.values["exact_mean"] = to_json(ex.mean);
    r.values["sample_covariance"] = to_json(mc.covariance);
    r.values["max_standard_errors"] = worst;
    r.tolerance = 6.0;
    r.passed = worst <= r.tolerance;
    out.push_back(std::move(r));
  }
}

using CheckFn = void (*)(const SuiteConfig&, const CheckSpec&, std::vector<Record>&);

CheckFn check_fn(const std::string& name) {
  if (name == "fisher_eguchi") return check_fisher_eguchi;
  if (name == "i_alpha_eguchi") return check_i_alpha_eguchi;
  if (name == "scale_relation") return check_scale_relation;
  if (name == "duality") return check_duality;
  if (name == "differential") return check_differential;
  if (name == "crlb") return check_crlb;
  if (name == "unbiasedness") return check_unbiasedness;
  if (name == "biased_crlb") return check_biased_crlb;
  if (name == "barankin") return check_barankin;
  if (name == "bayesian_crlb") return check_bayesian_crlb;
  if (name == "bayesian_divergence") return check_bayesian_divergence;
  if (name == "variants") return check_variants;
  if (name == "monte_carlo") return check_monte_carlo;
  throw ConfigError("unknown check '" + name + "'");
}

ojson record_json(const Record& r) {
  ojson j = ojson::object();
  j["name"] = r.name;
  j["inputs"] = r.inputs;
  j["inputs_digest"] = fnv1a_hex(r.inputs.dump());
  j["status"] = !r.error.empty() ? "error" : r.passed ? "pass" : "fail";
  if (!r.error.empty()) {
    j["error"] = r.error;
  } else {
    j["values"] = r.values;
    j["tolerance"] = r.tolerance;
  }
  j["passed"] = r.error.empty() && r.passed;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

std::vector<std::string> indexed(const std::string& prefix, int k) {
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j)
      out.push_back(prefix + "_" + std::to_string(i + 1) + std::to_string(j + 1));
  return out;
}

std::vector<std::string> theta_columns(const std::string& prefix, int k) {
  if (k == 1) return {prefix};
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i) out.push_back(prefix + "_" + std::to_string(i + 1));
  return out;
}

void push_upper(std::vector<std::string>& row, const Mat& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j) row.push_back(format_double(m(i, j)));
}

void push_blank(std::vector<std::string>& row, int k) {
  for (int n = 0; n < k * (k + 1) / 2; ++n) row.emplace_back();
}

void push_vec(std::vector<std::string>& row, const Vec& v) {
  for (int i = 0; i < v.size(); ++i) row.push_back(format_double(v[i]));
}

template <class... Parts>
std::vector<std::string> concat(Parts&&... parts) {
  std::vector<std::string> out;
  (out.insert(out.end(), parts.begin(), parts.end()), ...);
  return out;
}

}  // namespace

VerifyOutcome run_verify(const SuiteConfig& cfg) {
  std::vector<Record> records;
  for (const auto& spec : cfg.checks) {
    const auto& name = spec.name;
    std::vector<Record> part;
    try {
      check_fn(name)(cfg, spec, part);
    } catch (const std::exception& e) {
      part.clear();
      Record r{name, ojson::object()};
      r.inputs["model"] = cfg.model.name;
      r.error = e.what();
      part.push_back(std::move(r));
    }
    for (auto& r : part) records.push_back(std::move(r));
  }

  VerifyOutcome outcome;
  int passed = 0, failed = 0, errors = 0;
  ojson recs = ojson::array();
  outcome.checks.header = {"name", "inputs_digest", "status", "tolerance", "passed"};
  for (const auto& r : records) {
    auto j = record_json(r);
    if (!r.error.empty()) ++errors;
    else if (r.passed) ++passed;
    else ++failed;
    outcome.checks.rows.push_back({r.name, j["inputs_digest"].get<std::string>(),
                                   j["status"].get<std::string>(),
                                   r.error.empty() ? format_double(r.tolerance) : "",
                                   j["passed"].get<bool>() ? "true" : "false"});
    recs.push_back(std::move(j));
  }

  ojson rep = ojson::object();
  rep["tool"] = "infogeo";
  rep["version"] = tool_version;
  rep["seed"] = cfg.seed;
  rep["config_digest"] = cfg.digest;
  rep["model"] = cfg.model.name;
  rep["records"] = std::move(recs);
  rep["summary"] = ojson{{"total", records.size()}, {"passed", passed}, {"failed", failed}, {"errors", errors}};
  outcome.report = std::move(rep);
  outcome.exit_code = errors ? exit_infrastructure : failed ? exit_violation : exit_pass;
  return outcome;
}

CsvTable run_sweep(const SuiteConfig& cfg) {
  const int k = cfg.model.param_dim();
  const auto ests = unbiased_estimators(cfg);
  CsvTable t;
  t.header = concat(theta_columns("theta", k), std::vector<std::string>{"alpha"}, indexed("g", k),
                    indexed("bound", k), indexed("cov", k), std::vector<std::string>{"psd_margin"});
  for (const auto& theta : cfg.thetas)
    for (double a : cfg.alphas) {
      std::vector<std::string> row;
      push_vec(row, theta);
      row.push_back(format_double(a));
      const auto G = metric_for(cfg, theta, a);
      const Mat bound = inverse_metric_bound(G);
      push_upper(row, G.entries);
      push_upper(row, bound);
      if (ests.empty()) {
        push_blank(row, k);
        row.emplace_back();
      } else {
        const auto rep = compare("crlb", bound, bound_covariance(cfg, theta, a, ests.front()));
        push_upper(row, *rep.covariance);
        row.push_back(format_double(rep.psd_margin));
      }
      t.rows.push_back(std::move(row));
    }
  return t;
}

CsvTable divergence_table(const SuiteConfig& cfg) {
  if (!cfg.theta_prime) throw ConfigError("the divergence command needs `theta_prime`");
  const int k = cfg.model.param_dim();
  CsvTable t;
  t.header = concat(theta_columns("theta", k), theta_columns("theta_prime", k),
                    std::vector<std::string>{"alpha", "kl", "i_alpha"});
  if (cfg.prior) {
    t.header.push_back("bayesian_kl");
    t.header.push_back("bayesian_i_alpha");
  }
  const auto q = cfg.model.eval(*cfg.theta_prime);
  for (const auto& theta : cfg.thetas)
    for (double a : cfg.alphas) {
      const auto p = cfg.model.eval(theta);
      std::vector<std::string> row;
      push_vec(row, theta);
      push_vec(row, *cfg.theta_prime);
      row.push_back(format_double(a));
      row.push_back(format_double(kl(p, q)));
      // I_α is undefined at α = 1; the kl column covers that case.
      row.push_back(a == 1.0 ? "" : format_double(i_alpha(p, q, a)));
      if (cfg.prior) {
        row.push_back(format_double(bayesian_kl(unnormalized(cfg.model, *cfg.prior, theta),
                                                unnormalized(cfg.model, *cfg.prior, *cfg.theta_prime))));
        row.push_back(a == 1.0 ? ""
                               : format_double(bayesian_i_alpha(cfg.model, *cfg.prior, theta,
                                                                *cfg.theta_prime, a)));
      }
      t.rows.push_back(std::move(row));
    }
  return t;
}

CsvTable metric_table(const SuiteConfig& cfg) {
  const int k = cfg.model.param_dim();
  CsvTable t;
  t.header = concat(theta_columns("theta", k), std::vector<std::string>{"alpha"}, indexed("metric", k),
                    indexed("eguchi", k), indexed("fisher", k),
                    std::vector<std::string>{"route_discrepancy"});
  for (const auto& theta : cfg.thetas)
    for (double a : cfg.alphas) {
      std::vector<std::string> row;
      push_vec(row, theta);
      row.push_back(format_double(a));
      const auto G = metric_for(cfg, theta, a);
      push_upper(row, G.entries);
      push_upper(row, eguchi_metric(divergence_for(cfg, a), cfg.model, theta, cfg.diff).entries);
      push_upper(row, fisher_metric(cfg.model, theta, cfg.diff).entries);
      row.push_back(G.route_discrepancy ? format_double(*G.route_discrepancy) : "");
      t.rows.push_back(std::move(row));
    }
  return t;
}

CsvTable bound_table(const SuiteConfig& cfg) {
  const int k = cfg.model.param_dim();
  const auto ests = unbiased_estimators(cfg);
  CsvTable t;
  t.header = concat(std::vector<std::string>{"kind", "estimator"}, theta_columns("theta", k),
                    std::vector<std::string>{"alpha"}, indexed("bound", k), indexed("cov", k),
                    std::vector<std::string>{"psd_margin", "tolerance", "verdict"});
  const auto emit = [&](const std::string& kind, const std::string& est_name, const Vec& theta,
                        double a, const BoundReport& rep) {
    std::vector<std::string> row{kind, est_name};
    push_vec(row, theta);
    row.push_back(format_double(a));
    push_upper(row, rep.bound);
    if (rep.covariance) push_upper(row, *rep.covariance);
    else push_blank(row, k);
    const bool compared = rep.verdict != Verdict::not_compared;
    row.push_back(compared ? format_double(rep.psd_margin) : "");
    row.push_back(compared ? format_double(rep.tolerance) : "");
    row.push_back(to_string(rep.verdict));
    t.rows.push_back(std::move(row));
  };
  for (const auto& theta : cfg.thetas)
    for (double a : cfg.alphas) {
      const Mat bound = inverse_metric_bound(metric_for(cfg, theta, a));
      const std::string kind = a == 1.0 ? "crlb" : "alpha_crlb";
      if (ests.empty()) emit(kind, "", theta, a, compare(kind, bound, std::nullopt));
      for (const auto& est : ests)
        emit(kind, est.name, theta, a, compare(kind, bound, bound_covariance(cfg, theta, a, est)));
    }
  return t;
}

ojson table_to_json(const CsvTable& table) {
  ojson rows = ojson::array();
  for (const auto& r : table.rows) {
    ojson obj = ojson::object();
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      const auto& cell = r[i];
      if (cell.empty()) {
        obj[table.header[i]] = nullptr;
        continue;
      }
      try {
        obj[table.header[i]] = *parse_double(cell);
      } catch (const ConfigError&) {
        obj[table.header[i]] = cell;
      }
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

}  // namespace infogeo::cli
