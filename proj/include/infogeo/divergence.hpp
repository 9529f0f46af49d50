#pragma once

// Divergences and entropies on normalized and unnormalized measures. All logs are natural.

#include <functional>
#include <string>

#include "infogeo/linalg.hpp"
#include "infogeo/manifold.hpp"

namespace infogeo {

/// Strictly convex f on (0, ∞) with f(1) = 0, together with its first two derivatives.
struct ConvexGenerator {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;

  /// Checks f(1) = 0, f''(1) != 0 and f'' > 0 on a log-spaced grid over [1e-3, 1e3].
  void validate() const;
};

ConvexGenerator kl_generator();                 // u log u
ConvexGenerator reverse_kl_generator();         // −log u
ConvexGenerator chi_square_generator();         // (u − 1)²
ConvexGenerator squared_hellinger_generator();  // (√u − 1)²
/// sgn(1−α)(u^{1/α} − 1); links Iα to the Csiszár divergence of escorts.
ConvexGenerator alpha_generator(double alpha);

/// Positive weights with no normalization constraint.
class UnnormalizedMeasure {
 public:
  explicit UnnormalizedMeasure(Vec weights);
  UnnormalizedMeasure(double scale, const ProbVector& p);

  int size() const noexcept { return static_cast<int>(w_.size()); }
  const Vec& weights() const noexcept { return w_; }
  double mass() const noexcept { return mass_; }

 private:
  Vec w_;
  double mass_;
};

/// Prior density λ on a box inside Θ.
struct PriorDensity {
  std::string name;
  Box support;
  std::function<double(const Vec&)> density;
  /// Optional analytic ∇ log λ; central differences otherwise.
  std::function<Vec(const Vec&)> grad_log;

  /// λ(θ); throws DomainError when θ is outside the support or λ(θ) <= 0.
  double operator()(const Vec& theta) const;
  Vec grad_log_at(const Vec& theta, const DiffConfig& cfg = {}) const;
};

PriorDensity uniform_prior(Box support);
/// λ(θ) = 2θ on (0, 1).
PriorDensity ramp_prior();
PriorDensity beta_prior(double a, double b);

double kl(const ProbVector& p, const ProbVector& q);

/// Rényi entropy of order α >= 0; Shannon entropy at α = 1.
double entropy(const ProbVector& p, double alpha);

/// Relative α-entropy
///   1/(1−α) log Σ p q^{α−1} + (1/α) log Σ q^α − 1/(α(1−α)) log Σ p^α.
/// α = 1 throws DispatchError: use kl.
double i_alpha(const ProbVector& p, const ProbVector& q, double alpha);

/// Σ q f(p/q).
double csiszar(const ProbVector& p, const ProbVector& q, const ConvexGenerator& f);

/// (1/f''(1)) Σ F(q) f(F(p)/F(q)).
double generalized_f(const ProbVector& p, const ProbVector& q, const ConvexGenerator& f,
                     const EscortMap& F);

/// Σ p B_f(q/p, 1) with B_f(u, 1) = f(u) − f'(1)(u − 1).
double bregman_sum(const ProbVector& p, const ProbVector& q, const ConvexGenerator& f);

/// Σ p̃ log(p̃/q̃) − Σ p̃ + Σ q̃.
double bayesian_kl(const UnnormalizedMeasure& pt, const UnnormalizedMeasure& qt);

/// p̃_θ = λ(θ)·p_θ.
UnnormalizedMeasure unnormalized(const ParametricModel& m, const PriorDensity& prior,
                                 const Vec& theta);

/// Which bracket of the Bayesian Iα definition to use.
///   consistent:   −λ[L/(α(1−α)) − {log λ − 1} − L'/α], vanishes at θ = θ'
///   displayed:    −λ[L/(α(1−α)) − {1 + log λ} − L'/α], equals 2λ at θ = θ'
///   proof_scaled: displayed, with the first log term multiplied by α
/// where L = log Σ p_θ^α and L' = log Σ p_θ'^α.
enum class BayesianAlphaForm { consistent, displayed, proof_scaled };

double bayesian_i_alpha(const ParametricModel& m, const PriorDensity& prior, const Vec& theta,
                        const Vec& theta_prime, double alpha,
                        BayesianAlphaForm form = BayesianAlphaForm::consistent);

}  // namespace infogeo
