#include "infogeo/divergence.hpp"

#include <cmath>
#include <string>

#include "infogeo/errors.hpp"

namespace infogeo {
namespace {

void same_size(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": alphabet sizes " + std::to_string(a) + " and " +
                         std::to_string(b) + " differ");
  }
}

double log_sum_pow(const Vec& p, double a) { return std::log(p.array().pow(a).sum()); }

void require_alpha(double alpha, const char* kl_name) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (alpha == 1.0) {
    throw DispatchError(std::string("alpha = 1 is singular here; use ") + kl_name + " instead");
  }
}

}  // namespace

void ConvexGenerator::validate() const {
  if (!f || !df || !d2f) throw DomainError(name + ": generator is missing f, f' or f''");
  if (std::abs(f(1.0)) > 1e-12) throw DomainError(name + ": f(1) must be 0");
  if (d2f(1.0) == 0.0) throw DomainError(name + ": f''(1) must be nonzero");
  for (int i = 0; i <= 60; ++i) {
    const double u = std::pow(10.0, -3.0 + 0.1 * i);
    if (!(d2f(u) > 0.0)) throw DomainError(name + ": f'' is not positive at u = " + std::to_string(u));
  }
}

ConvexGenerator kl_generator() {
  return {"kl", [](double u) { return u * std::log(u); }, [](double u) { return std::log(u) + 1.0; },
          [](double u) { return 1.0 / u; }};
}

ConvexGenerator reverse_kl_generator() {
  return {"reverse_kl", [](double u) { return -std::log(u); }, [](double u) { return -1.0 / u; },
          [](double u) { return 1.0 / (u * u); }};
}

ConvexGenerator chi_square_generator() {
  return {"chi_square", [](double u) { return (u - 1.0) * (u - 1.0); },
          [](double u) { return 2.0 * (u - 1.0); }, [](double) { return 2.0; }};
}

ConvexGenerator squared_hellinger_generator() {
  return {"squared_hellinger", [](double u) { return (std::sqrt(u) - 1.0) * (std::sqrt(u) - 1.0); },
          [](double u) { return 1.0 - 1.0 / std::sqrt(u); },
          [](double u) { return 0.5 * std::pow(u, -1.5); }};
}

ConvexGenerator alpha_generator(double alpha) {
  require_alpha(alpha, "kl_generator");
  const double s = alpha < 1.0 ? 1.0 : -1.0;
  const double r = 1.0 / alpha;
  return {"f_alpha(" + std::to_string(alpha) + ")",
          [s, r](double u) { return s * (std::pow(u, r) - 1.0); },
          [s, r](double u) { return s * r * std::pow(u, r - 1.0); },
          [s, r](double u) { return s * r * (r - 1.0) * std::pow(u, r - 2.0); }};
}

UnnormalizedMeasure::UnnormalizedMeasure(Vec weights) : w_(std::move(weights)) {
  if (w_.size() < 2) throw DomainError("measure needs at least 2 entries");
  for (int i = 0; i < w_.size(); ++i) {
    if (!(w_[i] > 0.0) || !std::isfinite(w_[i])) {
      throw DomainError("measure weight " + std::to_string(i) + " is not strictly positive");
    }
  }
  mass_ = w_.sum();
}

UnnormalizedMeasure::UnnormalizedMeasure(double scale, const ProbVector& p)
    : UnnormalizedMeasure(Vec(scale * p.weights())) {}

double PriorDensity::operator()(const Vec& theta) const {
  if (!support.contains(theta)) throw DomainError(name + ": theta outside prior support " + support.describe());
  const double v = density(theta);
  if (!(v > 0.0)) throw DomainError(name + ": prior density is not positive at theta");
  return v;
}

Vec PriorDensity::grad_log_at(const Vec& theta, const DiffConfig& cfg) const {
  (*this)(theta);
  if (grad_log) return grad_log(theta);
  Vec g(theta.size());
  for (int i = 0; i < theta.size(); ++i) {
    const double h = cfg.step2(theta[i]);
    Vec up = theta, dn = theta;
    up[i] += h;
    dn[i] -= h;
    if (!support.contains(up) || !support.contains(dn)) {
      throw DomainError(name + ": finite-difference stencil leaves the prior support");
    }
    g[i] = (std::log((*this)(up)) - std::log((*this)(dn))) / (2.0 * h);
  }
  return g;
}

PriorDensity uniform_prior(Box support) {
  double vol = 1.0;
  for (int i = 0; i < support.dim(); ++i) {
    if (!(support.upper[i] > support.lower[i])) throw DomainError("uniform prior: empty support");
    vol *= support.upper[i] - support.lower[i];
  }
  const auto k = support.dim();
  PriorDensity p;
  p.name = "uniform";
  p.support = std::move(support);
  p.density = [vol](const Vec&) { return 1.0 / vol; };
  p.grad_log = [k](const Vec&) { return Vec(Vec::Zero(k)); };
  return p;
}

PriorDensity ramp_prior() {
  PriorDensity p;
  p.name = "ramp";
  p.support = {Vec::Constant(1, 0.0), Vec::Constant(1, 1.0)};
  p.density = [](const Vec& t) { return 2.0 * t[0]; };
  p.grad_log = [](const Vec& t) { return Vec(Vec::Constant(1, 1.0 / t[0])); };
  return p;
}

PriorDensity beta_prior(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta prior: shape parameters must be positive");
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  PriorDensity p;
  p.name = "beta(" + std::to_string(a) + ", " + std::to_string(b) + ")";
  p.support = {Vec::Constant(1, 0.0), Vec::Constant(1, 1.0)};
  p.density = [a, b, log_norm](const Vec& t) {
    return std::exp(log_norm + (a - 1.0) * std::log(t[0]) + (b - 1.0) * std::log1p(-t[0]));
  };
  p.grad_log = [a, b](const Vec& t) {
    return Vec(Vec::Constant(1, (a - 1.0) / t[0] - (b - 1.0) / (1.0 - t[0])));
  };
  return p;
}

double kl(const ProbVector& p, const ProbVector& q) {
  same_size(p.size(), q.size(), "kl");
  const Vec& a = p.weights();
  const Vec& b = q.weights();
  return (a.array() * (a.array() / b.array()).log()).sum();
}

double entropy(const ProbVector& p, double alpha) {
  if (alpha < 0.0 || std::isnan(alpha)) throw DomainError("entropy order must be non-negative");
  const Vec& w = p.weights();
  if (alpha == 1.0) return -(w.array() * w.array().log()).sum();
  if (alpha == 0.0) return std::log(static_cast<double>(w.size()));
  return log_sum_pow(w, alpha) / (1.0 - alpha);
}

double i_alpha(const ProbVector& p, const ProbVector& q, double alpha) {
  same_size(p.size(), q.size(), "i_alpha");
  require_alpha(alpha, "kl");
  const Vec& a = p.weights();
  const Vec& b = q.weights();
  const double cross = std::log((a.array() * b.array().pow(alpha - 1.0)).sum());
  return cross / (1.0 - alpha) + log_sum_pow(b, alpha) / alpha -
         log_sum_pow(a, alpha) / (alpha * (1.0 - alpha));
}

double csiszar(const ProbVector& p, const ProbVector& q, const ConvexGenerator& f) {
  same_size(p.size(), q.size(), "csiszar");
  double s = 0.0;
  for (int x = 0; x < p.size(); ++x) s += q[x] * f.f(p[x] / q[x]);
  return s;
}

double generalized_f(const ProbVector& p, const ProbVector& q, const ConvexGenerator& f,
                     const EscortMap& F) {
  same_size(p.size(), q.size(), "generalized_f");
  return csiszar(apply_escort(p, F), apply_escort(q, F), f) / f.d2f(1.0);
}

double bregman_sum(const ProbVector& p, const ProbVector& q, const ConvexGenerator& f) {
  same_size(p.size(), q.size(), "bregman_sum");
  const double slope = f.df(1.0);
  double s = 0.0;
  for (int x = 0; x < p.size(); ++x) {
    const double u = q[x] / p[x];
    s += p[x] * (f.f(u) - slope * (u - 1.0));
  }
  return s;
}

double bayesian_kl(const UnnormalizedMeasure& pt, const UnnormalizedMeasure& qt) {
  same_size(pt.size(), qt.size(), "bayesian_kl");
  const Vec& a = pt.weights();
  const Vec& b = qt.weights();
  return (a.array() * (a.array() / b.array()).log()).sum() - pt.mass() + qt.mass();
}

UnnormalizedMeasure unnormalized(const ParametricModel& m, const PriorDensity& prior,
                                 const Vec& theta) {
  return UnnormalizedMeasure(prior(theta), m.eval(theta));
}

double bayesian_i_alpha(const ParametricModel& m, const PriorDensity& prior, const Vec& theta,
                        const Vec& theta_prime, double alpha, BayesianAlphaForm form) {
  require_alpha(alpha, "bayesian_kl");
  const Vec p = m.eval(theta).weights();
  const Vec q = m.eval(theta_prime).weights();
  const double lam = prior(theta);
  const double lam_q = prior(theta_prime);

  double first = lam / (1.0 - alpha) *
                 std::log((p.array() * (lam_q * q.array()).pow(alpha - 1.0)).sum());
  if (form == BayesianAlphaForm::proof_scaled) first *= alpha;
  const double constant = form == BayesianAlphaForm::consistent ? std::log(lam) - 1.0
                                                                : 1.0 + std::log(lam);
  const double bracket =
      log_sum_pow(p, alpha) / (alpha * (1.0 - alpha)) - constant - log_sum_pow(q, alpha) / alpha;
  return first + lam_q - lam * bracket;
}

}  // namespace infogeo
