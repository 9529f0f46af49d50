#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/geometry.hpp"

using namespace infogeo;
using fixtures::scalar;

namespace {

double rel_frobenius(const Mat& a, const Mat& b) { return (a - b).norm() / b.norm(); }

DiffConfig richardson() {
  DiffConfig cfg;
  cfg.scheme = DiffConfig::Scheme::richardson;
  return cfg;
}

}  // namespace

TEST(MakeMetric, SymmetrizesWarnsAndRejects) {
  Mat raw(2, 2);
  raw << 2.0, 1.0, 1.0 + 1e-3, 2.0;
  const auto g = make_metric(raw, scalar(0.0), Provenance::analytic, "test");
  EXPECT_EQ(g.entries(0, 1), g.entries(1, 0));
  EXPECT_FALSE(g.warnings.empty());

  Mat bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  try {
    make_metric(bad, scalar(0.0), Provenance::eguchi_fd, "bad");
    FAIL() << "expected ExtractionFailure";
  } catch (const ExtractionFailure& e) {
    EXPECT_EQ(e.raw(), bad);
  }
  EXPECT_THROW(make_metric(Mat::Zero(1, 1), scalar(0.0), Provenance::analytic, "zero"), ExtractionFailure);
}

TEST(FisherMetric, OracleValues) {
  EXPECT_NEAR(fisher_metric(bernoulli(), scalar(0.5))(0, 0), 4.0, 1e-12);
  EXPECT_NEAR(fisher_metric(bernoulli(), scalar(0.2))(0, 0), 6.25, 1e-12);
  Vec t(2);
  t << 1.0 / 3, 1.0 / 3;
  Mat expected(2, 2);
  expected << 6, 3, 3, 6;
  EXPECT_LE((fisher_metric(categorical(3), t).entries - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EguchiMetric, KlMatchesFisher) {
  EXPECT_NEAR(eguchi_metric(kl_divergence(bernoulli()), bernoulli(), scalar(0.5))(0, 0), 4.0, 4e-4);
  EXPECT_NEAR(eguchi_metric(kl_divergence(bernoulli()), bernoulli(), scalar(0.2))(0, 0), 6.25, 6.25e-4);
  for (const auto& m : fixtures::builtins()) {
    const auto D = kl_divergence(m);
    for (const Vec& t : fixtures::grid_for(m)) {
      const auto g = eguchi_metric(D, m, t);
      EXPECT_EQ(g.provenance, Provenance::eguchi_fd);
      EXPECT_LE(rel_frobenius(g.entries, fisher_metric(m, t).entries), 1e-4) << m.name;
    }
  }
}

TEST(EguchiMetric, RejectsDivergenceThatDoesNotVanish) {
  const auto m = bernoulli();
  DivergenceHandle D{"offset", [](const Vec&, const Vec&) { return 1.0; }, {}, {}, {}};
  EXPECT_THROW(eguchi_metric(D, m, scalar(0.5)), DomainError);
  EXPECT_THROW(eguchi_metric(kl_divergence(m), m, scalar(0.001)), DomainError);
}

TEST(AlphaMetric, OracleRoutesAndLimit) {
  const auto g = alpha_metric(bernoulli(), scalar(0.2), 2.0);
  EXPECT_NEAR(g(0, 0), 2.16262975778546713, 1e-12);
  ASSERT_TRUE(g.route_discrepancy.has_value());
  EXPECT_LE(*g.route_discrepancy, 1e-8);
  for (double a : {0.5, 2.0, 7.0}) EXPECT_NEAR(alpha_metric(bernoulli(), scalar(0.5), a)(0, 0), 4.0, 1e-12);
  EXPECT_THROW(alpha_metric(bernoulli(), scalar(0.2), 1.0), DispatchError);

  for (const auto& m : fixtures::builtins()) {
    for (const Vec& t : fixtures::grid_for(m)) {
      const Mat f = fisher_metric(m, t).entries;
      for (double a : {0.999, 1.001}) EXPECT_LE(rel_frobenius(alpha_metric(m, t, a).entries, f), 5e-3);
      for (double a : {0.5, 0.9, 1.5, 2.0}) {
        const auto ga = alpha_metric(m, t, a);
        EXPECT_LE(*ga.route_discrepancy, 1e-8);
        EXPECT_LE(rel_frobenius(eguchi_metric(i_alpha_divergence(m, a), m, t).entries, ga.entries), 1e-4)
            << m.name << " alpha " << a;
      }
    }
  }
}

TEST(GenMetric, ReductionsScaleAndEguchi) {
  const auto custom = EscortMap::custom("mix(0.2)", [](const ProbVector& p) {
    return Vec(0.8 * p.weights().array() + 0.2 / p.size());
  });
  for (const auto& m : fixtures::builtins()) {
    for (const Vec& t : fixtures::grid_for(m)) {
      const Mat f = fisher_metric(m, t).entries;
      EXPECT_LE((gen_metric(m, t, kl_generator(), EscortMap::identity()).entries - f).cwiseAbs().maxCoeff(),
                1e-10);
      for (double a : {0.5, 0.9, 1.5, 2.0}) {
        const Mat lhs = gen_metric(m, t, kl_generator(), EscortMap::alpha(a)).entries;
        const Mat rhs = a * a * alpha_metric(m, t, a).entries;
        EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-8);
      }
      for (const auto& gen : {kl_generator(), chi_square_generator(), alpha_generator(2.0)}) {
        for (const auto& F : {EscortMap::identity(), EscortMap::alpha(2.0), custom}) {
          const auto extracted = eguchi_metric(generalized_f_divergence(m, gen, F), m, t);
          EXPECT_LE(rel_frobenius(extracted.entries, gen_metric(m, t, gen, F).entries), 1e-4)
              << m.name << " " << gen.name << " " << F.name();
        }
      }
    }
  }
}

TEST(BayesianMetric, PartsAndEguchiOracle) {
  const auto m = bernoulli();
  const auto flat = uniform_prior({scalar(0.0), scalar(1.0)});
  const auto u = bayesian_metric(m, flat, scalar(0.3));
  EXPECT_EQ(u.j_part(0, 0), 0.0);
  EXPECT_NEAR(u.total(0, 0), fisher_metric(m, scalar(0.3))(0, 0), 1e-12);

  const auto ramp = ramp_prior();
  EXPECT_NEAR(bayesian_metric(m, ramp, scalar(0.5)).j_part(0, 0), 4.0, 1e-12);
  for (const auto& model : {bernoulli(), binomial(3)}) {
    for (double t : {0.2, 0.5, 0.8}) {
      const auto analytic = bayesian_metric(model, ramp, scalar(t));
      const auto fd = eguchi_metric(bayesian_kl_divergence(model, ramp), model, scalar(t));
      EXPECT_LE(rel_frobenius(fd.entries, analytic.total.entries), 1e-3);
      for (double a : {0.5, 2.0}) {
        const auto ba = bayesian_metric(model, ramp, scalar(t), a);
        const auto fa = eguchi_metric(bayesian_i_alpha_divergence(model, ramp, a), model, scalar(t));
        EXPECT_LE(rel_frobenius(fa.entries, ba.total.entries), 1e-3);
      }
    }
  }
}

TEST(Connections, KlGivesMixtureAndExponential) {
  const auto [pm, pe] = eguchi_connections(kl_divergence(bernoulli()), bernoulli(), scalar(0.5));
  EXPECT_NEAR(pm.coeffs(0, 0, 0), 0.0, 3e-3);
  EXPECT_NEAR(pe.coeffs(0, 0, 0), 0.0, 3e-3);
  EXPECT_EQ(mixture_connection(bernoulli(), scalar(0.3)).coeffs(0, 0, 0), 0.0);
  EXPECT_NEAR(exponential_connection(bernoulli(), scalar(0.5)).coeffs(0, 0, 0), 0.0, 1e-9);

  for (const auto& m : fixtures::builtins()) {
    for (const Vec& t : fixtures::grid_for(m)) {
      const auto [primal, dual] = eguchi_connections(kl_divergence(m), m, t, richardson());
      const auto mix = mixture_connection(m, t);
      const auto expo = exponential_connection(m, t);
      const int k = m.param_dim();
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          for (int l = 0; l < k; ++l) {
            EXPECT_NEAR(primal.coeffs(i, j, l), mix.coeffs(i, j, l), 3e-3) << m.name;
            EXPECT_NEAR(dual.coeffs(i, j, l), expo.coeffs(i, j, l), 3e-3) << m.name;
          }
      EXPECT_LE(primal.symmetry_defect(), 3e-3);
      EXPECT_LE(dual.symmetry_defect(), 3e-3);
    }
  }
}

TEST(Duality, ResidualIsSmall) {
  for (const auto& m : fixtures::builtins()) {
    for (const Vec& t : fixtures::grid_for(m)) {
      if (m.family != ModelFamily::logit_linear && (t.minCoeff() < 0.2 || t.maxCoeff() > 0.8)) continue;
      for (const auto& D : {kl_divergence(m), i_alpha_divergence(m, 0.5), i_alpha_divergence(m, 2.0)}) {
        EXPECT_LE(duality_residual(D, m, t, richardson()).max_abs(), 3e-3) << m.name << " " << D.name;
      }
    }
  }
}

TEST(Duality, EvenDivergenceOnLinearFamily) {
  const auto m = bernoulli();
  DivergenceHandle D{"squared", [](const Vec& a, const Vec& b) { return (a - b).squaredNorm(); }, {}, {}, {}};
  EXPECT_LE(duality_residual(D, m, scalar(0.4)).max_abs(), 1e-6);
}

TEST(NormOfDifferential, EqualsVarianceOnFullChart) {
  const auto m = categorical(3);
  Vec t(2);
  t << 0.2, 0.5;
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 20; ++trial) {
    Vec A(3);
    for (int x = 0; x < 3; ++x) A[x] = n01(rng);
    EXPECT_NEAR(escort_centered_variance(m, t, A, 1.0), norm_of_differential(m, t, A, fisher_metric(m, t)), 1e-8);
    EXPECT_NEAR(escort_centered_variance(m, t, A, 2.0), norm_of_differential(m, t, A, alpha_metric(m, t, 2.0)), 1e-8);
  }
  EXPECT_NEAR(norm_of_differential(m, t, Vec::Constant(3, 2.5), fisher_metric(m, t)), 0.0, 1e-14);
}

TEST(NormOfDifferential, BoundsVarianceOnSubmanifold) {
  const auto m = binomial(2);
  std::mt19937_64 rng(22);
  std::normal_distribution<double> n01;
  for (double th : {0.2, 0.5, 0.7}) {
    for (int trial = 0; trial < 20; ++trial) {
      Vec A(3);
      for (int x = 0; x < 3; ++x) A[x] = n01(rng);
      for (double a : {1.0, 0.5, 2.0}) {
        const auto G = a == 1.0 ? fisher_metric(m, scalar(th)) : alpha_metric(m, scalar(th), a);
        EXPECT_GE(escort_centered_variance(m, scalar(th), A, a) - norm_of_differential(m, scalar(th), A, G), -1e-10);
      }
    }
  }
}
