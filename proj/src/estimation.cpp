#include "infogeo/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "infogeo/errors.hpp"
#include "infogeo/finite_difference.hpp"
#include "infogeo/geometry.hpp"

namespace infogeo {
namespace {

void require_shape(const ParametricModel& m, const EstimatorTable& est) {
  if (est.alphabet_size() != m.alphabet_size()) {
    throw DimensionError(est.name + ": estimator has " + std::to_string(est.alphabet_size()) +
                         " rows, alphabet has " + std::to_string(m.alphabet_size()));
  }
}

Vec weights_under(const ParametricModel& m, const Vec& theta, const EscortMap& F) {
  return apply_escort(m.eval(theta), F).weights();
}

}  // namespace

EstimatorTable::EstimatorTable(std::string n, Mat v) : name(std::move(n)), values(std::move(v)) {
  if (!values.allFinite()) throw DomainError(name + ": estimator table has non-finite entries");
}

MomentReport exact_moments(const ParametricModel& m, const Vec& theta, const EstimatorTable& est,
                           const EscortMap& weighting) {
  require_shape(m, est);
  const Vec w = weights_under(m, theta, weighting);
  MomentReport r;
  r.mean = linalg::weighted_mean(est.values, w);
  r.covariance = linalg::weighted_covariance(est.values, w);
  r.weighting = weighting.kind() == EscortMap::Kind::identity ? "plain" : weighting.name();
  r.mode = "exact";
  return r;
}

Mat exact_mse(const ParametricModel& m, const Vec& theta, const EstimatorTable& est) {
  require_shape(m, est);
  const Vec p = m.eval(theta).weights();
  const Mat err = est.values.rowwise() - theta.transpose();
  return linalg::symmetrize(err.transpose() * p.asDiagonal() * err);
}

std::uint64_t CounterRng::bits(std::uint64_t i) const {
  std::uint64_t z = seed_ + (i + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t i) const {
  return static_cast<double>(bits(i) >> 11) * 0x1.0p-53;
}

MomentReport monte_carlo_moments(const ParametricModel& m, const Vec& theta,
                                 const EstimatorTable& est, long n_samples, std::uint64_t seed) {
  require_shape(m, est);
  if (n_samples < 1) throw DomainError("monte_carlo_moments needs at least one sample");
  const Vec p = m.eval(theta).weights();
  std::vector<double> cdf(static_cast<std::size_t>(p.size()));
  double acc = 0.0;
  for (int x = 0; x < p.size(); ++x) cdf[x] = (acc += p[x]);
  cdf.back() = 1.0;

  std::vector<long> counts(cdf.size(), 0);
  const CounterRng rng(seed);
  for (long i = 0; i < n_samples; ++i) {
    const double u = rng.uniform(static_cast<std::uint64_t>(i));
    const auto x = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    ++counts[static_cast<std::size_t>(std::min<std::ptrdiff_t>(x, p.size() - 1))];
  }
  // Moments of the empirical distribution equal the 1/n sample moments.
  Vec freq(p.size());
  for (int x = 0; x < p.size(); ++x) freq[x] = static_cast<double>(counts[x]) / n_samples;

  MomentReport r;
  r.mean = linalg::weighted_mean(est.values, freq);
  r.covariance = linalg::weighted_covariance(est.values, freq);
  r.weighting = "plain";
  r.mode = "monte-carlo";
  r.samples = n_samples;
  r.seed = seed;
  return r;
}

EstimatorTable escort_estimator(const ParametricModel& m, const Vec& theta, const EstimatorTable& est,
                                const EscortMap& F, EscortDirection direction) {
  require_shape(m, est);
  if (est.param_dim() != m.param_dim()) throw DimensionError("estimator and model dimensions differ");
  const ProbVector p = m.eval(theta);
  const Vec Fp = apply_escort(p, F).weights();
  const bool to = direction == EscortDirection::to_escort ||
                  direction == EscortDirection::to_escort_centered;
  const Vec ratio = to ? p.weights().cwiseQuotient(Fp) : Fp.cwiseQuotient(p.weights());

  Mat out;
  std::string tag;
  switch (direction) {
    case EscortDirection::to_escort:
    case EscortDirection::from_escort:
      out = ratio.asDiagonal() * est.values;
      tag = to ? "to-escort" : "from-escort";
      break;
    case EscortDirection::to_escort_centered:
    case EscortDirection::from_escort_centered: {
      const Mat err = est.values.rowwise() - theta.transpose();
      out = Mat(ratio.asDiagonal() * err).rowwise() + theta.transpose();
      tag = to ? "to-escort-centered" : "from-escort-centered";
      break;
    }
  }
  return EstimatorTable(est.name + " [" + tag + " " + F.name() + "]", std::move(out));
}

UnbiasednessReport unbiasedness_check(const ParametricModel& m, const EstimatorProvider& est,
                                      const std::vector<Vec>& grid, const EscortMap& weighting) {
  UnbiasednessReport r;
  for (const Vec& t : grid) {
    const Vec mean = exact_moments(m, t, est(t), weighting).mean;
    const double dev = (mean - t).cwiseAbs().maxCoeff();
    if (r.worst_theta.size() == 0 || dev > r.max_deviation) {
      r.max_deviation = dev;
      r.worst_theta = t;
    }
  }
  r.passed = r.max_deviation <= 1e-9;
  return r;
}

UnbiasednessReport unbiasedness_check(const ParametricModel& m, const EstimatorTable& est,
                                      const std::vector<Vec>& grid, const EscortMap& weighting) {
  return unbiasedness_check(m, [&est](const Vec&) { return est; }, grid, weighting);
}

EstimatorTable natural_unbiased_estimator(const ParametricModel& m) {
  const int d = m.alphabet_size();
  switch (m.family) {
    case ModelFamily::bernoulli: {
      Mat v(2, 1);
      v << 0.0, 1.0;
      return EstimatorTable("x", v);
    }
    case ModelFamily::binomial: {
      Mat v(d, 1);
      for (int x = 0; x < d; ++x) v(x, 0) = static_cast<double>(x) / m.trials;
      return EstimatorTable("x/n", v);
    }
    case ModelFamily::categorical: {
      Mat v = Mat::Zero(d, d - 1);
      v.topRows(d - 1).setIdentity();
      return EstimatorTable("indicators", v);
    }
    default:
      throw DomainError(m.name + ": no built-in unbiased estimator for this family");
  }
}

double ExponentialEscortModel::check(const std::vector<Vec>& grid) const {
  double worst = 0.0;
  for (const Vec& t : grid) {
    const Vec logF = weights_under(base, t, escort).array().log();
    const Vec form = (carrier + statistics * t).array() - potential(t);
    worst = std::max(worst, (logF - form).cwiseAbs().maxCoeff());
  }
  if (worst > 1e-10) {
    throw DomainError("escort family is not exponential in the given coordinates (deviation " +
                      std::to_string(worst) + ")");
  }
  return worst;
}

ExponentialEscortModel exponential_escort(const Mat& statistics, const EscortMap& F,
                                          std::optional<Box> domain) {
  double scale = 1.0;
  switch (F.kind()) {
    case EscortMap::Kind::identity: break;
    case EscortMap::Kind::alpha: scale = F.alpha_value(); break;
    case EscortMap::Kind::custom:
      throw DomainError("exponential escort form is only known for identity and alpha escorts");
  }
  ExponentialEscortModel em;
  em.base = domain ? logit_linear(statistics, *domain) : logit_linear(statistics);
  em.statistics = scale * statistics;
  em.carrier = Vec::Zero(statistics.rows());
  em.potential = [h = em.statistics](const Vec& t) {
    const Vec s = h * t;
    const double top = s.maxCoeff();
    return top + std::log((s.array() - top).exp().sum());
  };
  em.escort = F;
  return em;
}

DualCoordinatesReport dual_coordinates_check(const ExponentialEscortModel& em,
                                             const std::vector<Vec>& grid, double tolerance,
                                             const DiffConfig& cfg) {
  em.check(grid);
  cfg.validate();
  const int k = em.base.param_dim();
  auto eta = [&](const Vec& t) {
    return Vec(em.statistics.transpose() * weights_under(em.base, t, em.escort));
  };
  auto log_escort = [&](const Vec& t) { return Vec(weights_under(em.base, t, em.escort).array().log()); };

  DualCoordinatesReport r;
  for (const Vec& t : grid) {
    em.base.require_margin(t, cfg);
    const Vec Fp = weights_under(em.base, t, em.escort);
    const Mat g = gen_metric(em.base, t, kl_generator(), em.escort, cfg).entries;
    const Vec e = eta(t);

    Vec steps(k);
    for (int i = 0; i < k; ++i) steps[i] = cfg.step2(t[i]);
    // E_F[∂_i∂_j log F] = ∂_i∂_j of s ↦ Σ_x F_θ(x) log F_s(x), with the weights frozen at θ.
    const fd::ScalarField frozen = [&](const Vec& s) { return Fp.dot(log_escort(s)); };

    Mat hess = Mat::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      const int di[] = {i};
      const double dpsi = fd::partial(em.potential, t, di, steps, cfg.scheme);
      r.potential_gradient = std::max(r.potential_gradient, std::abs(dpsi - e[i]));

      for (int j = 0; j < k; ++j) {
        const fd::ScalarField eta_j = [&](const Vec& s) { return eta(s)[j]; };
        const double deta = fd::partial(eta_j, t, di, steps, cfg.scheme);
        r.eta_jacobian = std::max(r.eta_jacobian, std::abs(deta - g(i, j)));
        const int dij[] = {i, j};
        hess(i, j) = -fd::partial(frozen, t, dij, steps, cfg.scheme);
      }
    }
    const Mat cov = linalg::weighted_covariance(em.statistics, Fp);
    r.statistic_covariance = std::max(r.statistic_covariance, (cov - g).cwiseAbs().maxCoeff());
    r.log_hessian = std::max(r.log_hessian, (hess - g).cwiseAbs().maxCoeff());
  }
  r.passed = r.potential_gradient <= tolerance && r.eta_jacobian <= tolerance &&
             r.statistic_covariance <= tolerance && r.log_hessian <= tolerance;
  return r;
}

Mat prior_expected_covariance(const ParametricModel& m, const PriorDensity& prior,
                              const ThetaGrid& grid, const EstimatorTable& est) {
  const auto w = prior_weights(grid, prior);
  Mat acc = Mat::Zero(est.param_dim(), est.param_dim());
  for (std::size_t n = 0; n < grid.size(); ++n) {
    acc += w[n] * exact_moments(m, grid.nodes[n], est).covariance;
  }
  return acc;
}

Mat bayesian_alpha_error_covariance(const ParametricModel& m, const PriorDensity& prior,
                                    const ThetaGrid& grid, const EstimatorTable& est, double alpha) {
  require_shape(m, est);
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  // prior_weights gives λ·vol/Σλ·vol, i.e. the renormalized density times the cell volume.
  const auto w = prior_weights(grid, prior);
  Mat acc = Mat::Zero(est.param_dim(), est.param_dim());
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Vec& t = grid.nodes[n];
    const double lam = w[n] / grid.cell_volume;
    const ProbVector p = m.eval(t);
    const Vec pa = escort(p, alpha).weights();
    const Vec ratio = lam * p.weights().cwiseQuotient(pa);
    const Mat err = ratio.asDiagonal() * Mat(est.values.rowwise() - t.transpose());
    acc += grid.cell_volume * linalg::weighted_covariance(err, pa);
  }
  return acc;
}

}  // namespace infogeo
