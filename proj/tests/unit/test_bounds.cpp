#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "infogeo/bounds.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/estimation.hpp"

using namespace infogeo;
using fixtures::scalar;

namespace {

// λ(θ) = 64 θ₁θ₂ on (0, 0.5)², inside the categorical(3) simplex.
PriorDensity product_prior() {
  PriorDensity p;
  p.name = "product-ramp";
  p.support = {Vec::Zero(2), Vec::Constant(2, 0.5)};
  p.density = [](const Vec& t) { return 64.0 * t[0] * t[1]; };
  p.grad_log = [](const Vec& t) { return Vec(t.cwiseInverse()); };
  return p;
}

}  // namespace

TEST(Compare, VerdictUsesScaledTolerance) {
  const Mat bound = Mat::Identity(2, 2);
  EXPECT_EQ(compare("x", bound, Mat(bound)).verdict, Verdict::holds);
  EXPECT_EQ(compare("x", bound, Mat(bound - 2e-9 * Mat::Identity(2, 2))).verdict, Verdict::holds);
  EXPECT_EQ(compare("x", bound, Mat(bound - 1e-8 * Mat::Identity(2, 2))).verdict, Verdict::violated);
  const auto none = compare("x", bound, std::nullopt);
  EXPECT_EQ(none.verdict, Verdict::not_compared);
  EXPECT_TRUE(std::isnan(none.psd_margin));
}

TEST(InverseMetric, OracleValues) {
  EXPECT_NEAR(inverse_metric_bound(fisher_metric(bernoulli(), scalar(0.5)))(0, 0), 0.25, 1e-15);
  Vec t(2);
  t << 1.0 / 3, 1.0 / 3;
  Mat expected(2, 2);
  expected << 2.0 / 9, -1.0 / 9, -1.0 / 9, 2.0 / 9;
  EXPECT_LE((inverse_metric_bound(fisher_metric(categorical(3), t)) - expected).cwiseAbs().maxCoeff(), 1e-14);
  const auto I = make_metric(Mat::Identity(3, 3), Vec::Zero(3), Provenance::analytic, "identity");
  EXPECT_EQ(inverse_metric_bound(I), Mat::Identity(3, 3));
}

TEST(BiasedBound, ReductionsAndZeroEstimator) {
  const auto m = bernoulli();
  EXPECT_NEAR(biased_cr_bound(m, scalar(0.3), [](const Vec&) { return Vec(Vec::Zero(1)); })(0, 0), 0.21, 1e-14);
  EXPECT_NEAR(biased_cr_bound(m, scalar(0.5), [](const Vec& t) { return Vec(0.1 * t); })(0, 0), 0.305, 1e-10);
  const EstimatorTable zero("zero", Mat::Zero(2, 1));
  for (double t : {0.05, 0.2, 0.5, 0.8, 0.95}) {
    const double bound = biased_cr_bound(m, scalar(t), [](const Vec& th) { return Vec(-th); })(0, 0);
    EXPECT_NEAR(bound, t * t, 1e-12);
    EXPECT_NEAR(exact_mse(m, scalar(t), zero)(0, 0), t * t, 1e-15);
  }
}

TEST(Grid, MidpointNodesAndCoarseness) {
  const auto g = ThetaGrid::midpoint(0.0, 1.0, 10);
  EXPECT_EQ(g.size(), 10u);
  EXPECT_DOUBLE_EQ(g.nodes.front()[0], 0.05);
  EXPECT_THROW(ThetaGrid::midpoint(0.0, 1.0, 7), ConfigError);
  const auto g2 = ThetaGrid::midpoint(Box{Vec::Zero(2), Vec::Ones(2)}, {8, 9});
  EXPECT_EQ(g2.size(), 72u);
}

TEST(BayesianBound, UniformPriorQuadratureOracle) {
  const auto m = bernoulli();
  const auto grid = ThetaGrid::midpoint(0.1, 0.9, 201);
  const auto r = bayesian_bound(m, uniform_prior({scalar(0.1), scalar(0.9)}), grid);
  const double oracle = 0.182047845325367479;
  EXPECT_LE(std::abs(r.bound(0, 0) - oracle) / oracle, 1e-3);
  EXPECT_GE(r.jensen_margin, -1e-9);
}

TEST(BayesianBound, RampPriorJensenGap) {
  const auto grid = ThetaGrid::midpoint(0.0, 1.0, 201);
  for (const auto& m : {bernoulli(), binomial(3)}) {
    for (double a : {1.0, 0.5, 2.0}) {
      EXPECT_GE(bayesian_bound(m, ramp_prior(), grid, a).jensen_margin, -1e-9);
    }
  }
}

TEST(BayesianBound, HybridMaskConsistency) {
  const auto m = bernoulli();
  const auto grid = ThetaGrid::midpoint(0.1, 0.9, 41);
  const auto flat = uniform_prior({scalar(0.1), scalar(0.9)});
  for (double a : {1.0, 2.0}) {
    const auto masked = bayesian_bound(m, flat, grid, a, HybridMask::all_deterministic(1));
    EXPECT_EQ(masked.bound, integrated_classical_bound(m, grid, a));
  }
  const auto ramp_grid = ThetaGrid::midpoint(0.0, 1.0, 41);
  EXPECT_EQ(bayesian_bound(m, ramp_prior(), ramp_grid, 1.0, HybridMask::all_random(1)).bound,
            bayesian_bound(m, ramp_prior(), ramp_grid).bound);

  const auto cat = categorical(3);
  const auto prior = product_prior();
  const auto g2 = ThetaGrid::midpoint(prior.support, {12, 12});
  const auto full = bayesian_bound(cat, prior, g2);
  const auto hybrid = bayesian_bound(cat, prior, g2, 1.0, HybridMask(2, {0}));
  const auto none = bayesian_bound(cat, prior, g2, 1.0, HybridMask::all_deterministic(2));
  EXPECT_EQ(hybrid.information(0, 0), none.information(0, 0));
  EXPECT_EQ(hybrid.information(0, 1), none.information(0, 1));
  EXPECT_GT(hybrid.information(1, 1), none.information(1, 1));
  EXPECT_GT(full.information(0, 0), hybrid.information(0, 0));

  Mat J = Mat::Ones(3, 3);
  const Mat masked = HybridMask(3, {1}).apply(J);
  EXPECT_EQ(masked.row(1).sum() + masked.col(1).sum(), 0.0);
  EXPECT_EQ(masked(0, 2), 1.0);
  EXPECT_EQ(HybridMask(3, {1}).random(), (std::vector<int>{0, 2}));
  EXPECT_THROW(HybridMask(2, {0, 0}), DomainError);
}

TEST(Barankin, TwoPointAndLimit) {
  const auto m = bernoulli();
  EXPECT_NEAR(barankin_bound(m, {0.5, {0.5, 0.6}}), 0.25, 1e-10);
  EXPECT_EQ(barankin_bound(m, {0.4, {0.4}}), 0.0);
  EXPECT_NEAR(barankin_bound(m, {0.5, {0.5, 0.6, 0.6 + 1e-14}}), 0.25, 1e-10);
  for (double t : {0.2, 0.5, 0.7}) {
    const double crlb = 1.0 / fisher_metric(m, scalar(t))(0, 0);
    EXPECT_LE(std::abs(barankin_bound(m, {t, {t, t + 1e-3}}) - crlb) / crlb, 1e-3);
  }
  EXPECT_THROW(barankin_bound(m, {0.5, {0.5, 0.5 + 1e-9}}), TestPointError);
  EXPECT_THROW(barankin_bound(binomial(3), {0.5, {}}), TestPointError);
}

TEST(Barankin, SearchIsBoundedAndMonotone) {
  std::vector<double> grid;
  for (int i = 1; i < 20; ++i) grid.push_back(0.05 * i);
  for (const auto& m : {bernoulli(), binomial(3)}) {
    const auto est = natural_unbiased_estimator(m);
    for (double t : {0.25, 0.5}) {
      const double var = exact_moments(m, scalar(t), est).covariance(0, 0);
      double previous = 0.0;
      for (int n = 1; n <= 3; ++n) {
        const auto r = barankin_search(m, t, grid, n);
        EXPECT_GE(r.value, previous);
        EXPECT_LE(r.value, var + 1e-9);
        previous = r.value;
      }
      const double crlb = 1.0 / fisher_metric(m, scalar(t))(0, 0);
      std::vector<double> near = grid;
      near.push_back(t + 1e-3);
      const auto r = barankin_search(m, t, near, 2);
      EXPECT_GE(r.value, barankin_bound(m, {t, {t, t + 1e-3}}));
      EXPECT_GE(r.value, crlb - 1e-6);
    }
  }
  EXPECT_EQ(barankin_search(bernoulli(), 0.5, {0.5}, 1).value, 0.0);
  EXPECT_THROW(barankin_search(bernoulli(), 0.5, {}, 1), DomainError);
}
