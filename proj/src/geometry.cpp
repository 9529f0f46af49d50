#include "infogeo/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "infogeo/errors.hpp"
#include "infogeo/finite_difference.hpp"

namespace infogeo {
namespace {

// Stencil over the concatenated point (θ, θ').
struct PairField {
  const DivergenceHandle& D;
  int k;

  double operator()(const Vec& z) const { return D.evaluate(z.head(k), z.tail(k)); }
};

Vec pair_point(const Vec& theta) {
  Vec z(2 * theta.size());
  z << theta, theta;
  return z;
}

Vec pair_steps(const Vec& theta, double h) {
  Vec s(2 * theta.size());
  for (int i = 0; i < theta.size(); ++i) s[i] = s[theta.size() + i] = h * std::max(1.0, std::abs(theta[i]));
  return s;
}

Mat raw_eguchi(const DivergenceHandle& D, const Vec& theta, const DiffConfig& cfg) {
  const int k = static_cast<int>(theta.size());
  const PairField field{D, k};
  const Vec z = pair_point(theta);
  const Vec steps = pair_steps(theta, cfg.h2);
  Mat g(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const std::array<int, 2> c{i, k + j};
      g(i, j) = -fd::partial(field, z, c, steps, cfg.scheme);
    }
  }
  return g;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(Provenance p) { return p == Provenance::analytic ? "analytic" : "eguchi-fd"; }

MetricMatrix make_metric(const Mat& raw, Vec theta, Provenance provenance, std::string source) {
  MetricMatrix g;
  g.theta = std::move(theta);
  g.provenance = provenance;
  g.source = std::move(source);
  if (raw.rows() != raw.cols()) throw DimensionError("metric must be square");
  if (!raw.allFinite()) throw ExtractionFailure(g.source + ": metric has non-finite entries", raw);
  g.asymmetry = linalg::relative_asymmetry(raw);
  if (g.asymmetry > 1e-6) {
    g.warnings.push_back("asymmetry " + fmt(g.asymmetry) + " before symmetrization");
  }
  g.entries = linalg::symmetrize(raw);
  Eigen::LLT<Mat> llt;
  if (!linalg::cholesky_with_jitter(g.entries, llt) || linalg::min_eigenvalue(g.entries) <= 0.0) {
    throw ExtractionFailure(g.source + ": metric is not positive definite", raw);
  }
  return g;
}

double Tensor3::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double ConnectionTensor::symmetry_defect() const {
  const int k = coeffs.dim();
  double m = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) m = std::max(m, std::abs(coeffs(i, j, l) - coeffs(j, i, l)));
  return m;
}

void DivergenceHandle::check_vanishes(const Vec& theta) const {
  const double v = evaluate(theta, theta);
  if (!(std::abs(v) <= 1e-12)) {
    throw DomainError(name + ": D(theta, theta) = " + fmt(v) + " does not vanish");
  }
}

DivergenceHandle kl_divergence(const ParametricModel& m) {
  return {"kl", [m](const Vec& a, const Vec& b) { return kl(m.eval(a), m.eval(b)); }, {}, {}, {}};
}

DivergenceHandle i_alpha_divergence(const ParametricModel& m, double alpha) {
  i_alpha(ProbVector::uniform(2), ProbVector::uniform(2), alpha);  // dispatch check up front
  return {"i_alpha(" + fmt(alpha) + ")",
          [m, alpha](const Vec& a, const Vec& b) { return i_alpha(m.eval(a), m.eval(b), alpha); },
          alpha, {}, {}};
}

DivergenceHandle generalized_f_divergence(const ParametricModel& m, const ConvexGenerator& f,
                                          const EscortMap& F) {
  f.validate();
  return {"generalized_f(" + f.name + ", " + F.name() + ")",
          [m, f, F](const Vec& a, const Vec& b) { return generalized_f(m.eval(a), m.eval(b), f, F); },
          F.kind() == EscortMap::Kind::alpha ? std::optional<double>(F.alpha_value()) : std::nullopt,
          f.name, F.name()};
}

DivergenceHandle bayesian_kl_divergence(const ParametricModel& m, const PriorDensity& prior) {
  return {"bayesian_kl(" + prior.name + ")",
          [m, prior](const Vec& a, const Vec& b) {
            return bayesian_kl(unnormalized(m, prior, a), unnormalized(m, prior, b));
          },
          {}, {}, {}};
}

DivergenceHandle bayesian_i_alpha_divergence(const ParametricModel& m, const PriorDensity& prior,
                                             double alpha, BayesianAlphaForm form) {
  i_alpha(ProbVector::uniform(2), ProbVector::uniform(2), alpha);
  return {"bayesian_i_alpha(" + prior.name + ", " + fmt(alpha) + ")",
          [m, prior, alpha, form](const Vec& a, const Vec& b) {
            return bayesian_i_alpha(m, prior, a, b, alpha, form);
          },
          alpha, {}, {}};
}

MetricMatrix eguchi_metric(const DivergenceHandle& D, const ParametricModel& m, const Vec& theta,
                           const DiffConfig& cfg) {
  cfg.validate();
  m.require_margin(theta, cfg);
  D.check_vanishes(theta);
  return make_metric(raw_eguchi(D, theta, cfg), theta, Provenance::eguchi_fd, D.name);
}

std::pair<ConnectionTensor, ConnectionTensor> eguchi_connections(const DivergenceHandle& D,
                                                                 const ParametricModel& m,
                                                                 const Vec& theta,
                                                                 const DiffConfig& cfg) {
  cfg.validate();
  m.require_margin(theta, cfg);
  D.check_vanishes(theta);
  const int k = m.param_dim();
  const PairField field{D, k};
  const Vec z = pair_point(theta);
  const Vec steps = pair_steps(theta, cfg.h3);

  ConnectionTensor primal{Tensor3(k), theta, ConnectionTensor::Which::primal, D.name};
  ConnectionTensor dual{Tensor3(k), theta, ConnectionTensor::Which::dual, D.name + "*"};
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) {
        const std::array<int, 3> p{i, j, k + l};
        const std::array<int, 3> d{l, k + i, k + j};
        primal.coeffs(i, j, l) = -fd::partial(field, z, p, steps, cfg.scheme);
        dual.coeffs(i, j, l) = -fd::partial(field, z, d, steps, cfg.scheme);
      }
    }
  }
  return {std::move(primal), std::move(dual)};
}

std::vector<Vec> model_second_partials(const ParametricModel& m, const Vec& theta,
                                       const DiffConfig& cfg) {
  cfg.validate();
  m.require_margin(theta, cfg);
  const int k = m.param_dim();
  std::vector<Vec> out(static_cast<std::size_t>(k * k));
  for (int j = 0; j < k; ++j) {
    auto diff = [&](double h) {
      Vec up = theta, dn = theta;
      up[j] += h;
      dn[j] -= h;
      return Mat((model_partials(m, up, cfg) - model_partials(m, dn, cfg)) / (2.0 * h));
    };
    const double h = cfg.step2(theta[j]);
    Mat col = diff(h);
    if (cfg.scheme == DiffConfig::Scheme::richardson) col = (4.0 * diff(0.5 * h) - col) / 3.0;
    for (int i = 0; i < k; ++i) out[i * k + j] = col.col(i);
  }
  // ∂_i∂_j = ∂_j∂_i; average away the FD asymmetry.
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const Vec avg = 0.5 * (out[i * k + j] + out[j * k + i]);
      out[i * k + j] = out[j * k + i] = avg;
    }
  }
  return out;
}

ConnectionTensor mixture_connection(const ParametricModel& m, const Vec& theta,
                                    const DiffConfig& cfg) {
  const int k = m.param_dim();
  const auto second = model_second_partials(m, theta, cfg);
  const Mat s = model_scores(m, theta, cfg);
  ConnectionTensor g{Tensor3(k), theta, ConnectionTensor::Which::primal, "mixture"};
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) g.coeffs(i, j, l) = second[i * k + j].dot(s.col(l));
  return g;
}

ConnectionTensor exponential_connection(const ParametricModel& m, const Vec& theta,
                                        const DiffConfig& cfg) {
  const int k = m.param_dim();
  const Vec p = m.eval(theta).weights();
  const auto second = model_second_partials(m, theta, cfg);
  const Mat dp = model_partials(m, theta, cfg);
  ConnectionTensor g{Tensor3(k), theta, ConnectionTensor::Which::dual, "exponential"};
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const Vec d2log = (second[i * k + j].array() / p.array() -
                         dp.col(i).array() * dp.col(j).array() / p.array().square())
                            .matrix();
      for (int l = 0; l < k; ++l) g.coeffs(i, j, l) = dp.col(l).dot(d2log);
    }
  }
  return g;
}

MetricMatrix fisher_metric(const ParametricModel& m, const Vec& theta, const DiffConfig& cfg) {
  const Vec p = m.eval(theta).weights();
  return make_metric(linalg::weighted_covariance(model_scores(m, theta, cfg), p), theta,
                     Provenance::analytic, "fisher");
}

MetricMatrix alpha_metric(const ParametricModel& m, const Vec& theta, double alpha,
                          const DiffConfig& cfg) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (alpha == 1.0) throw DispatchError("alpha = 1: use fisher_metric");
  const ProbVector p = m.eval(theta);
  const Vec pa = escort(p, alpha).weights();
  const Mat s = model_scores(m, theta, cfg);
  const Mat score_cov = linalg::weighted_covariance(s, pa);

  // ∂ log p^(α) = α ∂ log p − ∂ log Σ p^α
  const Vec pow_a = p.weights().array().pow(alpha);
  const Eigen::RowVectorXd dlog_norm =
      alpha * (pow_a.transpose() * s) / pow_a.sum();
  const Mat escort_scores = (alpha * s).rowwise() - dlog_norm;
  const Mat escort_cov = linalg::weighted_covariance(escort_scores, pa) / (alpha * alpha);

  MetricMatrix g = make_metric(score_cov, theta, Provenance::analytic, "alpha(" + fmt(alpha) + ")");
  g.route_discrepancy = (score_cov - escort_cov).cwiseAbs().maxCoeff();
  return g;
}

MetricMatrix gen_metric(const ParametricModel& m, const Vec& theta, const ConvexGenerator& f,
                        const EscortMap& F, const DiffConfig& cfg) {
  const Vec Fp = apply_escort(m.eval(theta), F).weights();
  const Mat dF = escort_partials(m, theta, F, cfg);
  const Mat g = dF.transpose() * Fp.cwiseInverse().asDiagonal() * dF;
  return make_metric(g, theta, Provenance::analytic, "gen(" + f.name + ", " + F.name() + ")");
}

BayesianMetric bayesian_metric(const ParametricModel& m, const PriorDensity& prior,
                               const Vec& theta, double alpha, const DiffConfig& cfg) {
  BayesianMetric out;
  out.lambda = prior(theta);
  const Vec gl = prior.grad_log_at(theta, cfg);
  out.j_part = gl * gl.transpose();
  out.g_part = alpha == 1.0 ? fisher_metric(m, theta, cfg) : alpha_metric(m, theta, alpha, cfg);
  out.total = make_metric(out.lambda * (out.g_part.entries + out.j_part), theta,
                          Provenance::analytic, "bayesian(" + prior.name + ", " + fmt(alpha) + ")");
  return out;
}

Tensor3 duality_residual(const DivergenceHandle& D, const ParametricModel& m, const Vec& theta,
                         const DiffConfig& cfg) {
  const auto [primal, dual] = eguchi_connections(D, m, theta, cfg);
  const int k = m.param_dim();
  Tensor3 r(k);
  for (int l = 0; l < k; ++l) {
    auto diff = [&](double h) {
      Vec up = theta, dn = theta;
      up[l] += h;
      dn[l] -= h;
      return Mat((raw_eguchi(D, up, cfg) - raw_eguchi(D, dn, cfg)) / (2.0 * h));
    };
    const double h = cfg.step3(theta[l]);
    Mat dg = diff(h);
    if (cfg.scheme == DiffConfig::Scheme::richardson) dg = (4.0 * diff(0.5 * h) - dg) / 3.0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) r(l, i, j) = dg(i, j) - primal.coeffs(l, i, j) - dual.coeffs(l, j, i);
  }
  return r;
}

double norm_of_differential(const ParametricModel& m, const Vec& theta, const Vec& A,
                            const MetricMatrix& G, const DiffConfig& cfg) {
  if (A.size() != m.alphabet_size()) throw DimensionError("A must have one entry per symbol");
  if (G.dim() != m.param_dim()) throw DimensionError("metric dimension does not match the model");
  const Vec grad = model_partials(m, theta, cfg).transpose() * A;
  return grad.dot(linalg::solve_spd(G.entries, grad).col(0));
}

double escort_centered_variance(const ParametricModel& m, const Vec& theta, const Vec& A,
                                double alpha) {
  if (A.size() != m.alphabet_size()) throw DimensionError("A must have one entry per symbol");
  const ProbVector p = m.eval(theta);
  const Vec pa = escort(p, alpha).weights();
  const double mean = p.weights().dot(A);
  const Vec v = p.weights().cwiseQuotient(pa).cwiseProduct(Vec(A.array() - mean));
  return linalg::weighted_covariance(v, pa)(0, 0);
}

}  // namespace infogeo
