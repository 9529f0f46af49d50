#pragma once

// Metrics and connections: Eguchi extraction from a divergence by finite differences,
// closed forms by exact enumeration, the duality identity and ‖df‖².

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "infogeo/divergence.hpp"
#include "infogeo/linalg.hpp"
#include "infogeo/manifold.hpp"

namespace infogeo {

enum class Provenance { eguchi_fd, analytic };

std::string to_string(Provenance p);

/// Symmetric positive definite k×k metric at θ.
struct MetricMatrix {
  Mat entries;
  Vec theta;
  Provenance provenance = Provenance::analytic;
  std::string source;
  /// Relative asymmetry of the raw matrix before symmetrization.
  double asymmetry = 0.0;
  /// max-abs difference between two independent evaluation routes, when computed.
  std::optional<double> route_discrepancy;
  std::vector<std::string> warnings;

  int dim() const noexcept { return static_cast<int>(entries.rows()); }
  double operator()(int i, int j) const { return entries(i, j); }
};

/// Symmetrizes `raw`, notes asymmetry above 1e-6 and requires a Cholesky factorization
/// (one jitter retry). Throws ExtractionFailure otherwise.
MetricMatrix make_metric(const Mat& raw, Vec theta, Provenance provenance, std::string source);

/// Dense k×k×k array indexed (a, b, c).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int k) : k_(k), v_(static_cast<std::size_t>(k) * k * k, 0.0) {}

  int dim() const noexcept { return k_; }
  double& operator()(int a, int b, int c) { return v_[(a * k_ + b) * k_ + c]; }
  double operator()(int a, int b, int c) const { return v_[(a * k_ + b) * k_ + c]; }
  double max_abs() const;

 private:
  int k_ = 0;
  std::vector<double> v_;
};

/// Γ_{ij,k}, stored as coeffs(i, j, k).
struct ConnectionTensor {
  enum class Which { primal, dual };

  Tensor3 coeffs;
  Vec theta;
  Which which = Which::primal;
  std::string source;

  /// max |Γ_{ij,k} − Γ_{ji,k}|
  double symmetry_defect() const;
};

/// D(θ, θ') on a parameter space.
struct DivergenceHandle {
  std::string name;
  std::function<double(const Vec&, const Vec&)> evaluate;
  std::optional<double> alpha;
  std::string generator;  // (f, F) payload for generalized divergences
  std::string escort;

  /// Throws DomainError unless |D(θ, θ)| <= 1e-12.
  void check_vanishes(const Vec& theta) const;
};

DivergenceHandle kl_divergence(const ParametricModel& m);
DivergenceHandle i_alpha_divergence(const ParametricModel& m, double alpha);
DivergenceHandle generalized_f_divergence(const ParametricModel& m, const ConvexGenerator& f,
                                          const EscortMap& F);
DivergenceHandle bayesian_kl_divergence(const ParametricModel& m, const PriorDensity& prior);
DivergenceHandle bayesian_i_alpha_divergence(const ParametricModel& m, const PriorDensity& prior,
                                             double alpha,
                                             BayesianAlphaForm form = BayesianAlphaForm::consistent);

/// g_ij = −∂_{θ_i} ∂_{θ'_j} D |_{θ'=θ}
MetricMatrix eguchi_metric(const DivergenceHandle& D, const ParametricModel& m, const Vec& theta,
                           const DiffConfig& cfg = {});

/// Primal −∂_i∂_j∂'_k D and dual −∂_k∂'_i∂'_j D at θ' = θ.
std::pair<ConnectionTensor, ConnectionTensor> eguchi_connections(const DivergenceHandle& D,
                                                                 const ParametricModel& m,
                                                                 const Vec& theta,
                                                                 const DiffConfig& cfg = {});

/// Γ^(m)_{ij,k} = Σ ∂_i∂_j p · ∂_k log p
ConnectionTensor mixture_connection(const ParametricModel& m, const Vec& theta,
                                    const DiffConfig& cfg = {});
/// Γ^(e)_{ij,k} = Σ ∂_k p · ∂_i∂_j log p
ConnectionTensor exponential_connection(const ParametricModel& m, const Vec& theta,
                                        const DiffConfig& cfg = {});

/// Cov_θ[∂ log p_θ]
MetricMatrix fisher_metric(const ParametricModel& m, const Vec& theta, const DiffConfig& cfg = {});

/// Cov_{θ^(α)}[∂ log p_θ]. Also evaluated as (1/α²)Cov_{θ^(α)}[∂ log p^(α)_θ]; the gap
/// between the two is kept in `route_discrepancy`. α = 1 throws DispatchError.
MetricMatrix alpha_metric(const ParametricModel& m, const Vec& theta, double alpha,
                          const DiffConfig& cfg = {});

/// Σ F(p_θ) ∂_i log F(p_θ) ∂_j log F(p_θ). Independent of f once D is scaled by 1/f''(1).
MetricMatrix gen_metric(const ParametricModel& m, const Vec& theta, const ConvexGenerator& f,
                        const EscortMap& F, const DiffConfig& cfg = {});

struct BayesianMetric {
  MetricMatrix total;   // λ(θ)(G + J)
  MetricMatrix g_part;  // G^(e) at α = 1, G^(α) otherwise
  Mat j_part;           // ∇log λ ∇log λᵀ
  double lambda = 0.0;
};

BayesianMetric bayesian_metric(const ParametricModel& m, const PriorDensity& prior,
                               const Vec& theta, double alpha = 1.0, const DiffConfig& cfg = {});

/// residual(k, i, j) = ∂_k g_ij − Γ_{ki,j} − Γ*_{kj,i}
Tensor3 duality_residual(const DivergenceHandle& D, const ParametricModel& m, const Vec& theta,
                         const DiffConfig& cfg = {});

/// ∇fᵀ G⁻¹ ∇f for f(θ) = E_{p_θ}[A].
double norm_of_differential(const ParametricModel& m, const Vec& theta, const Vec& A,
                            const MetricMatrix& G, const DiffConfig& cfg = {});

/// Var_{p^(α)}[(p/p^(α))(A − E_p A)]; α = 1 gives Var_p[A].
double escort_centered_variance(const ParametricModel& m, const Vec& theta, const Vec& A,
                                double alpha);

/// d-vectors ∂_i∂_j p_θ(x), flattened as result[i * k + j]. Central differences of the
/// analytic (or FD) first partials.
std::vector<Vec> model_second_partials(const ParametricModel& m, const Vec& theta,
                                       const DiffConfig& cfg = {});

}  // namespace infogeo
