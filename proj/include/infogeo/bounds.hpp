#pragma once

// Cramér-Rao-type lower bounds and the PSD comparison contract shared by all of them.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "infogeo/divergence.hpp"
#include "infogeo/geometry.hpp"
#include "infogeo/linalg.hpp"
#include "infogeo/manifold.hpp"

namespace infogeo {

enum class Verdict { holds, violated, not_compared };

std::string to_string(Verdict v);

struct BoundReport {
  std::string kind;
  Mat bound;
  std::optional<Mat> covariance;
  /// Smallest eigenvalue of covariance − bound; NaN when not compared.
  double psd_margin = 0.0;
  /// The margin must be at least −tolerance.
  double tolerance = 0.0;
  Verdict verdict = Verdict::not_compared;
  std::map<std::string, std::string> metadata;
};

/// Verdict holds iff λ_min(covariance − bound) >= −rel_tol·(1 + trace(bound)).
BoundReport compare(std::string kind, const Mat& bound, std::optional<Mat> covariance,
                    double rel_tol = 1e-9);

/// Scalar-parameter test points for the Barankin bound.
struct TestPointSet {
  double base = 0.0;
  std::vector<double> points;
};

/// Splits parameter indices into deterministic and random components.
class HybridMask {
 public:
  HybridMask(int k, std::vector<int> deterministic);

  static HybridMask all_random(int k) { return HybridMask(k, {}); }
  static HybridMask all_deterministic(int k);

  int dim() const noexcept { return k_; }
  const std::vector<int>& deterministic() const noexcept { return det_; }
  std::vector<int> random() const;
  bool is_deterministic(int i) const;

  /// Zeroes every row and column of J belonging to a deterministic index.
  Mat apply(const Mat& J) const;

 private:
  int k_;
  std::vector<int> det_;
};

/// Midpoint rule on a uniform tensor grid over a box.
struct ThetaGrid {
  Box box;
  std::vector<int> counts;
  std::vector<Vec> nodes;
  double cell_volume = 0.0;

  /// Requires at least 8 nodes per axis (ConfigError otherwise).
  static ThetaGrid midpoint(const Box& box, std::vector<int> counts);
  static ThetaGrid midpoint(double lower, double upper, int n);

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Midpoint weights proportional to λ, normalized to sum to 1 over the grid.
std::vector<double> prior_weights(const ThetaGrid& grid, const PriorDensity& prior);

/// G⁻¹ by linear solves.
Mat inverse_metric_bound(const MetricMatrix& G);

/// (1 + B')[G^(e)]⁻¹(1 + B') + b bᵀ with (1 + B') = diag(1 + ∂_i b_i).
Mat biased_cr_bound(const ParametricModel& m, const Vec& theta,
                    const std::function<Vec(const Vec&)>& bias, const DiffConfig& cfg = {});

struct BayesianBound {
  Mat bound;        // {E_λ[G + J]}⁻¹
  Mat information;  // E_λ[G + J]
  /// E_λ[(G + J)⁻¹] − {E_λ[G + J]}⁻¹; PSD by matrix convexity of the inverse.
  Mat jensen_gap;
  double jensen_margin = 0.0;
};

/// α = 1 uses G^(e), otherwise G^(α). J is masked when a hybrid mask is given.
BayesianBound bayesian_bound(const ParametricModel& m, const PriorDensity& prior,
                             const ThetaGrid& grid, double alpha = 1.0,
                             const std::optional<HybridMask>& mask = std::nullopt,
                             const DiffConfig& cfg = {});

/// {Σ w G(θ)}⁻¹ with uniform midpoint weights; the Bayesian path with constant λ and J masked
/// out evaluates exactly the same floating-point operations.
Mat integrated_classical_bound(const ParametricModel& m, const ThetaGrid& grid, double alpha = 1.0,
                               const DiffConfig& cfg = {});

/// ΔᵀB⁻¹Δ with Δ_l = θ^(l) − θ and B_lm = Σ L_l L_m p_θ, L_l = p_{θ^(l)}/p_θ.
/// Points closer than 1e-12 are merged; a singular B throws TestPointError.
double barankin_bound(const ParametricModel& m, const TestPointSet& pts);

struct BarankinSearch {
  double value = 0.0;
  TestPointSet witness;
};

/// Exhaustive search over subsets of at most `max_points` candidates, θ always included.
BarankinSearch barankin_search(const ParametricModel& m, double theta,
                               const std::vector<double>& candidates, int max_points);

}  // namespace infogeo
