#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/finite_difference.hpp"
#include "infogeo/manifold.hpp"

using namespace infogeo;
using fixtures::scalar;

TEST(Alphabet, RejectsDuplicatesAndSingletons) {
  EXPECT_THROW(Alphabet({"a", "a"}), DomainError);
  EXPECT_THROW(Alphabet({"a"}), DomainError);
  EXPECT_EQ(Alphabet::indexed(3, "a", true).labels().back(), "a3");
}

TEST(ProbVector, Validation) {
  EXPECT_THROW(ProbVector(Vec::Constant(2, 0.4)), DomainError);
  Vec w(2);
  w << 1.0, 0.0;
  EXPECT_THROW(ProbVector{w}, DomainError);
  w << 0.3, 0.7;
  EXPECT_NO_THROW(ProbVector{w});
}

TEST(Escort, FixedPointsAndKnownValue) {
  const auto u = ProbVector::uniform(2);
  EXPECT_NEAR(escort(u, 2.0)[0], 0.5, 1e-15);

  Vec w(2);
  w << 0.8, 0.2;
  const ProbVector p(w);
  EXPECT_EQ(escort(p, 1.0).weights(), p.weights());
  const auto e = escort(p, 2.0);
  EXPECT_NEAR(e[0], 0.941176470588235294, 1e-15);
  EXPECT_NEAR(e[1], 0.0588235294117647059, 1e-15);
  EXPECT_THROW(escort(p, 0.0), DomainError);
  EXPECT_THROW(escort(p, -1.0), DomainError);
}

TEST(Escort, NormalizationOnRandomInputs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = fixtures::random_prob(rng, 2 + trial % 6);
    for (double a : {0.3, 0.5, 2.0, 3.0}) EXPECT_NEAR(escort(p, a).weights().sum(), 1.0, 1e-12);
    EXPECT_EQ(escort(p, 1.0).weights(), p.weights());
  }
}

TEST(ApplyEscort, KindsAndRangeErrors) {
  Vec w(2);
  w << 0.8, 0.2;
  const ProbVector p(w);
  EXPECT_EQ(apply_escort(p, EscortMap::identity()).weights(), p.weights());
  EXPECT_NEAR(apply_escort(p, EscortMap::alpha(2.0))[1], 0.0588235294117647059, 1e-15);

  const auto negative = EscortMap::custom("neg", [](const ProbVector& q) {
    Vec out = q.weights();
    out[0] = -out[0];
    return out;
  });
  EXPECT_THROW(apply_escort(p, negative), EscortRangeError);
  const auto wrong_length = EscortMap::custom("short", [](const ProbVector&) { return Vec::Ones(1); });
  EXPECT_THROW(apply_escort(p, wrong_length), EscortRangeError);
  EXPECT_THROW(EscortMap::alpha(1.0), DispatchError);
}

TEST(DiffConfig, StepsMustFitInsideMargin) {
  DiffConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.h3 = 5e-3;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.h2 = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  EXPECT_DOUBLE_EQ(DiffConfig{}.step2(4.0), 2e-3);
  EXPECT_DOUBLE_EQ(DiffConfig{}.step2(0.3), 5e-4);
}

TEST(Models, BernoulliAndBinomialPartials) {
  const auto b = bernoulli();
  for (double t : {0.1, 0.5, 0.9}) {
    const Mat d = model_partials(b, scalar(t));
    EXPECT_EQ(d(0, 0), -1.0);
    EXPECT_EQ(d(1, 0), 1.0);
  }
  const Mat d = model_partials(binomial(2), scalar(0.5));
  EXPECT_NEAR(d(0, 0), -1.0, 1e-14);
  EXPECT_NEAR(d(1, 0), 0.0, 1e-14);
  EXPECT_NEAR(d(2, 0), 1.0, 1e-14);
}

TEST(Models, DomainChecks) {
  EXPECT_THROW(bernoulli().eval(scalar(1.5)), DomainError);
  EXPECT_THROW(bernoulli().eval(scalar(0.0)), DomainError);
  Vec t(2);
  t << 0.6, 0.5;
  EXPECT_THROW(categorical(3).eval(t), DomainError);

  auto fd_only = bernoulli();
  fd_only.partials = nullptr;
  EXPECT_THROW(model_partials(fd_only, scalar(0.003)), DomainError);
  EXPECT_NO_THROW(model_partials(fd_only, scalar(0.01)));
  try {
    bernoulli().eval(scalar(1.5));
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("(0, 1)"), std::string::npos);
  }
}

TEST(Models, ColumnsSumToZeroAndMatchFiniteDifferences) {
  for (const auto& m : fixtures::builtins()) {
    auto fd_only = m;
    fd_only.partials = nullptr;
    for (const Vec& t : fixtures::grid_for(m)) {
      const Mat a = model_partials(m, t);
      const Mat n = model_partials(fd_only, t);
      for (int i = 0; i < a.cols(); ++i) {
        EXPECT_NEAR(a.col(i).sum(), 0.0, 1e-10) << m.name;
        EXPECT_NEAR(n.col(i).sum(), 0.0, 1e-8) << m.name;
      }
      const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
      EXPECT_LE((a - n).cwiseAbs().maxCoeff() / scale, 1e-6) << m.name;
    }
  }
}

TEST(Models, RichardsonImprovesFiniteDifferences) {
  auto fd_only = binomial(4);
  fd_only.partials = nullptr;
  DiffConfig rich;
  rich.scheme = DiffConfig::Scheme::richardson;
  const Vec t = scalar(0.3);
  const Mat exact = model_partials(binomial(4), t);
  const double central = (model_partials(fd_only, t) - exact).cwiseAbs().maxCoeff();
  const double extrapolated = (model_partials(fd_only, t, rich) - exact).cwiseAbs().maxCoeff();
  EXPECT_LT(extrapolated, central);
}

TEST(AlphaRepresentation, KnownValuesAndZeroMean) {
  const auto b = bernoulli();
  for (double a : {0.5, 2.0, 3.0}) {
    const Vec r = alpha_representation(b, scalar(0.5), 0, a);
    EXPECT_NEAR(r[0], -2.0, 1e-12);
    EXPECT_NEAR(r[1], 2.0, 1e-12);
  }
  const Vec r = alpha_representation(b, scalar(0.2), 0, 2.0);
  EXPECT_NEAR(r[0], -0.432525951557093426, 1e-12);
  EXPECT_NEAR(r[1], 1.73010380622837370, 1e-12);
  EXPECT_THROW(alpha_representation(b, scalar(0.2), 0, 1.0), DispatchError);

  for (const auto& m : fixtures::builtins()) {
    for (const Vec& t : fixtures::grid_for(m)) {
      const Vec p = m.eval(t).weights();
      for (double a : {0.5, 0.9, 1.5, 2.0}) {
        for (int i = 0; i < m.param_dim(); ++i) {
          EXPECT_NEAR(p.dot(alpha_representation(m, t, i, a)), 0.0, 1e-10) << m.name;
        }
      }
    }
  }
}

TEST(EscortPartials, AlphaChainRuleMatchesFiniteDifferences) {
  const auto custom = EscortMap::custom("alpha-as-custom", [](const ProbVector& p) {
    return escort(p, 2.0).weights();
  });
  for (const auto& m : fixtures::builtins()) {
    for (const Vec& t : fixtures::grid_for(m)) {
      const Mat chain = escort_partials(m, t, EscortMap::alpha(2.0));
      const Mat fd = escort_partials(m, t, custom);
      EXPECT_LE((chain - fd).cwiseAbs().maxCoeff(), 1e-5) << m.name;
    }
  }
}

TEST(FiniteDifference, MixedPartialsOfSmoothField) {
  const fd::ScalarField f = [](const Vec& x) { return std::sin(x[0]) * std::exp(0.5 * x[1]); };
  Vec x(2);
  x << 0.4, -0.2;
  const Vec h = Vec::Constant(2, 1e-3);
  const std::array<int, 2> c01{0, 1};
  EXPECT_NEAR(fd::partial(f, x, c01, h), 0.5 * std::cos(0.4) * std::exp(-0.1), 1e-7);
  const std::array<int, 3> c001{0, 0, 1};
  EXPECT_NEAR(fd::partial(f, x, c001, h), -0.5 * std::sin(0.4) * std::exp(-0.1), 1e-5);
  const std::array<int, 3> c000{0, 0, 0};
  EXPECT_NEAR(fd::partial(f, x, c000, Vec::Constant(2, 1e-2)), -std::cos(0.4) * std::exp(-0.1), 1e-4);
  EXPECT_NEAR(fd::partial(f, x, c000, Vec::Constant(2, 1e-2), DiffConfig::Scheme::richardson),
              -std::cos(0.4) * std::exp(-0.1), 1e-7);
  EXPECT_EQ(fd::reach(c000), 2);
  EXPECT_EQ(fd::reach(c001), 1);
}
