#pragma once

// Single-observation estimators and their moments, escort transforms of estimators,
// and the dual-coordinate identities of exponential escort families.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "infogeo/bounds.hpp"
#include "infogeo/divergence.hpp"
#include "infogeo/linalg.hpp"
#include "infogeo/manifold.hpp"

namespace infogeo {

/// Row x holds θ̂(x).
struct EstimatorTable {
  std::string name;
  Mat values;

  EstimatorTable() = default;
  EstimatorTable(std::string name, Mat values);

  int alphabet_size() const noexcept { return static_cast<int>(values.rows()); }
  int param_dim() const noexcept { return static_cast<int>(values.cols()); }
};

struct MomentReport {
  Vec mean;
  Mat covariance;
  std::string weighting;  // "plain", "alpha(2)", ...
  std::string mode;       // "exact" or "monte-carlo"
  long samples = 0;
  std::optional<std::uint64_t> seed;
};

/// Mean and covariance of θ̂ under F(p_θ) (identity: plain expectation under p_θ).
MomentReport exact_moments(const ParametricModel& m, const Vec& theta, const EstimatorTable& est,
                           const EscortMap& weighting = EscortMap::identity());

/// E_θ[(θ̂ − θ)(θ̂ − θ)ᵀ]
Mat exact_mse(const ParametricModel& m, const Vec& theta, const EstimatorTable& est);

/// Counter-mode SplitMix64: draw i is mix(seed + (i + 1)·0x9E3779B97F4A7C15).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t bits(std::uint64_t i) const;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t i) const;

 private:
  std::uint64_t seed_;
};

/// Sample mean and 1/n covariance of θ̂ over n i.i.d. draws from p_θ.
MomentReport monte_carlo_moments(const ParametricModel& m, const Vec& theta,
                                 const EstimatorTable& est, long n_samples, std::uint64_t seed);

enum class EscortDirection {
  to_escort,             // (p/F(p)) θ̂
  from_escort,           // (F(p)/p) θ̂
  to_escort_centered,    // θ + (p/F(p)) (θ̂ − θ)
  from_escort_centered,  // θ + (F(p)/p) (θ̂ − θ)
};

/// The transform uses the true θ; the result is an analytical device, not an estimator
/// that can be computed from data alone.
EstimatorTable escort_estimator(const ParametricModel& m, const Vec& theta, const EstimatorTable& est,
                                const EscortMap& F, EscortDirection direction);

struct UnbiasednessReport {
  double max_deviation = 0.0;
  Vec worst_theta;
  bool passed = false;  // max_deviation <= 1e-9
};

using EstimatorProvider = std::function<EstimatorTable(const Vec& theta)>;

/// max over the grid of |E_weighting[θ̂] − θ|, with θ̂ allowed to depend on θ.
UnbiasednessReport unbiasedness_check(const ParametricModel& m, const EstimatorProvider& est,
                                      const std::vector<Vec>& grid,
                                      const EscortMap& weighting = EscortMap::identity());
UnbiasednessReport unbiasedness_check(const ParametricModel& m, const EstimatorTable& est,
                                      const std::vector<Vec>& grid,
                                      const EscortMap& weighting = EscortMap::identity());

/// The unbiased single-draw estimator of the built-in families: x, x/n or cell indicators.
EstimatorTable natural_unbiased_estimator(const ParametricModel& m);

/// log F(p_θ)(x) = c(x) + Σ θ_i h_i(x) − ψ(θ)
struct ExponentialEscortModel {
  ParametricModel base;
  Mat statistics;  // h, d×k
  Vec carrier;     // c
  std::function<double(const Vec&)> potential;  // ψ
  EscortMap escort;

  /// Largest deviation of the exponential form over `grid`; throws DomainError above 1e-10.
  double check(const std::vector<Vec>& grid) const;
};

/// Logit-linear base family with F = identity (statistic h) or F = alpha(a) (statistic a·h).
ExponentialEscortModel exponential_escort(const Mat& statistics, const EscortMap& F,
                                          std::optional<Box> domain = std::nullopt);

struct DualCoordinatesReport {
  double potential_gradient = 0.0;  // max |∂_i ψ − η_i|
  double eta_jacobian = 0.0;        // max |∂_i η_j − g_ij|
  double statistic_covariance = 0.0;  // max |Cov_F[h] − g|
  double log_hessian = 0.0;         // max |−E_F[∂_i∂_j log F] − g|
  bool passed = false;              // all four <= tolerance
};

DualCoordinatesReport dual_coordinates_check(const ExponentialEscortModel& em,
                                             const std::vector<Vec>& grid, double tolerance = 1e-6,
                                             const DiffConfig& cfg = {});

/// E_λ[Cov_θ(θ̂)] on the grid with renormalized prior weights.
Mat prior_expected_covariance(const ParametricModel& m, const PriorDensity& prior,
                              const ThetaGrid& grid, const EstimatorTable& est);

/// ∫ Var_{θ^(α)}[(λ(θ) p_θ/p_θ^(α))(θ̂ − θ)] dθ by the midpoint rule, λ renormalized on the grid.
Mat bayesian_alpha_error_covariance(const ParametricModel& m, const PriorDensity& prior,
                                    const ThetaGrid& grid, const EstimatorTable& est, double alpha);

}  // namespace infogeo
