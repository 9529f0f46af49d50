#pragma once

// Finite-alphabet probability objects, parametric families and escort maps.

#include <functional>
#include <string>
#include <vector>

#include "infogeo/linalg.hpp"

namespace infogeo {

/// Finite state space {a_1, ..., a_d}, d >= 2, distinct labels.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> labels);

  /// Labels `prefix0 ... prefix{d-1}`, or `prefix1 ... prefix{d}` when `one_based`.
  static Alphabet indexed(int d, const std::string& prefix = "", bool one_based = false);

  int size() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<std::string> labels_;
};

/// Strictly positive probability vector; weights sum to 1 within 1e-12.
class ProbVector {
 public:
  explicit ProbVector(Vec weights);

  static ProbVector uniform(int d);

  int size() const noexcept { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[i]; }
  const Vec& weights() const noexcept { return w_; }

  /// Validation shared by every constructor; returns a message or empty string.
  static std::string check(const Vec& w);

 private:
  Vec w_;
};

/// Open axis-aligned box.
struct Box {
  Vec lower;
  Vec upper;

  int dim() const noexcept { return static_cast<int>(lower.size()); }
  bool contains(const Vec& theta) const;
  std::string describe() const;
};

/// Step sizes for the finite-difference engine. Steps and margin scale with max(1, |θ_i|).
struct DiffConfig {
  enum class Scheme { central, richardson };

  Scheme scheme = Scheme::central;
  double h2 = 5e-4;      // mixed second-order partials and model partials
  double h3 = 2e-3;      // third-order partials and ∂_k of a metric
  double margin = 5e-3;  // minimum distance to a face of Θ

  void validate() const;
  double step2(double x) const;
  double step3(double x) const;
};

enum class ModelFamily { bernoulli, binomial, categorical, logit_linear, custom };

/// k-parameter family θ ↦ p_θ on a finite alphabet.
struct ParametricModel {
  std::string name;
  ModelFamily family = ModelFamily::custom;
  int trials = 0;  // binomial only
  Alphabet alphabet;
  Box domain;

  /// Raw weights p_θ(x); wrapped by `eval`, which validates them.
  std::function<Vec(const Vec&)> weights;
  /// Optional analytic d×k matrix of ∂_i p_θ(x).
  std::function<Mat(const Vec&)> partials;
  /// Optional constraint beyond the box, positive inside Θ (categorical: 1 - Σθ).
  std::function<double(const Vec&)> slack;

  int param_dim() const noexcept { return domain.dim(); }
  int alphabet_size() const noexcept { return alphabet.size(); }

  ProbVector eval(const Vec& theta) const;

  /// Throws DomainError unless θ lies strictly inside Θ.
  void require_interior(const Vec& theta) const;
  /// Throws DomainError unless θ is at least `cfg.margin` (scaled) away from every face.
  void require_margin(const Vec& theta, const DiffConfig& cfg) const;
};

ParametricModel bernoulli();
/// Number of successes in `n` Bernoulli trials, x = 0..n.
ParametricModel binomial(int n);
/// Full simplex chart: θ are the first d-1 cell probabilities.
ParametricModel categorical(int d);
/// p_θ(x) ∝ exp(Σ_i θ_i h_i(x)); `statistics` is d×k.
ParametricModel logit_linear(const Mat& statistics, Box domain);
ParametricModel logit_linear(const Mat& statistics);

/// Maps a distribution to another distribution: identity, α-escort or a user function.
class EscortMap {
 public:
  enum class Kind { identity, alpha, custom };
  using Fn = std::function<Vec(const ProbVector&)>;

  static EscortMap identity();
  static EscortMap alpha(double a);
  static EscortMap custom(std::string name, Fn fn);

  Kind kind() const noexcept { return kind_; }
  double alpha_value() const noexcept { return alpha_; }
  const Fn& fn() const noexcept { return fn_; }
  std::string name() const;

 private:
  Kind kind_ = Kind::identity;
  double alpha_ = 1.0;
  std::string name_;
  Fn fn_;
};

/// x ↦ p(x)^α / Σ_y p(y)^α. α must be positive; α = 1 returns p.
ProbVector escort(const ProbVector& p, double alpha);

ProbVector apply_escort(const ProbVector& p, const EscortMap& F);

/// d×k matrix of ∂_i p_θ(x): analytic when available, else central differences.
Mat model_partials(const ParametricModel& m, const Vec& theta, const DiffConfig& cfg = {});

/// d×k matrix of scores ∂_i log p_θ(x).
Mat model_scores(const ParametricModel& m, const Vec& theta, const DiffConfig& cfg = {});

/// d×k matrix of ∂_i F(p_θ)(x). Chain rule for identity/α; finite differences for custom F.
Mat escort_partials(const ParametricModel& m, const Vec& theta, const EscortMap& F,
                    const DiffConfig& cfg = {});

/// α-representation of ∂_i at p_θ:
///   (p^(α)(x)/p(x)) · (∂_i log p(x) − E_{p^(α)}[∂_i log p]).
/// Throws DispatchError at α = 1 (use the plain score there).
Vec alpha_representation(const ParametricModel& m, const Vec& theta, int i, double alpha,
                         const DiffConfig& cfg = {});

}  // namespace infogeo
