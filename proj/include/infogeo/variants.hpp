#pragma once

// Other escort-based Fisher informations evaluated on the same discrete models, for
// side-by-side comparison with the α-metric.

#include "infogeo/linalg.hpp"
#include "infogeo/manifold.hpp"

namespace infogeo {

/// Σ_x ∂_k p ∂_l p / p^(α)
Mat naudts_fisher(const ParametricModel& m, const Vec& theta, double alpha,
                  const DiffConfig& cfg = {});

/// E_{p^(q)}[(p^(q)/p) ∂_k log p^(q) ∂_l log p^(q)]  (β = 2 specialization)
Mat bercher_fisher(const ParametricModel& m, const Vec& theta, double q,
                   const DiffConfig& cfg = {});

/// Bercher's integrand reweighted by p/(q² p^(q)); equals the α-metric at α = q.
Mat bercher_reweighted(const ParametricModel& m, const Vec& theta, double q,
                       const DiffConfig& cfg = {});

struct VariantReport {
  Vec theta;
  double alpha = 1.0;
  Mat ours;     // α-metric, or the Fisher metric at α = 1
  Mat naudts;
  Mat bercher;
  Mat bercher_reweighted;
  Mat naudts_minus_ours;
  Mat bercher_minus_ours;
  Mat naudts_over_ours;  // entrywise; NaN where ours is 0
};

VariantReport compare_variants(const ParametricModel& m, const Vec& theta, double alpha,
                               const DiffConfig& cfg = {});

}  // namespace infogeo
