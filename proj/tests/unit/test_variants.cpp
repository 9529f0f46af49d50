#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "infogeo/geometry.hpp"
#include "infogeo/variants.hpp"

using namespace infogeo;
using fixtures::scalar;

TEST(Naudts, OracleValues) {
  EXPECT_NEAR(naudts_fisher(bernoulli(), scalar(0.5), 2.0)(0, 0), 4.0, 1e-10);
  EXPECT_NEAR(naudts_fisher(bernoulli(), scalar(0.2), 2.0)(0, 0), 18.0625, 1e-10);
  const auto r = compare_variants(bernoulli(), scalar(0.2), 2.0);
  EXPECT_NEAR(r.ours(0, 0), 2.16262975778546713, 1e-12);
  EXPECT_NEAR(r.naudts_over_ours(0, 0), 18.0625 / 2.16262975778546713, 1e-10);
}

TEST(Variants, CoincideWithFisherAtOne) {
  for (const auto& m : fixtures::builtins()) {
    for (const Vec& t : fixtures::grid_for(m)) {
      const Mat f = fisher_metric(m, t).entries;
      EXPECT_LE((naudts_fisher(m, t, 1.0) - f).cwiseAbs().maxCoeff(), 1e-12) << m.name;
      EXPECT_LE((bercher_fisher(m, t, 1.0) - f).cwiseAbs().maxCoeff(), 1e-12) << m.name;
    }
  }
}

TEST(Bercher, SymmetricPointAndReweighting) {
  for (double q : {0.5, 2.0, 3.0}) {
    const double ratio = bercher_fisher(bernoulli(), scalar(0.5), q)(0, 0) /
                         (q * q * alpha_metric(bernoulli(), scalar(0.5), q)(0, 0));
    EXPECT_NEAR(ratio, 1.0, 1e-12);
  }
  for (const auto& m : fixtures::builtins()) {
    for (const Vec& t : fixtures::grid_for(m)) {
      for (double q : {0.5, 2.0}) {
        const Mat ga = alpha_metric(m, t, q).entries;
        EXPECT_LE((bercher_reweighted(m, t, q) - ga).cwiseAbs().maxCoeff(), 1e-10);
        for (const Mat& v : {naudts_fisher(m, t, q), bercher_fisher(m, t, q)}) {
          EXPECT_LE((v - v.transpose()).cwiseAbs().maxCoeff(), 0.0);
          EXPECT_GE(linalg::min_eigenvalue(v), -1e-12);
        }
      }
    }
  }
}
