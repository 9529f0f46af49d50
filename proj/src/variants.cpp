#include "infogeo/variants.hpp"

#include <limits>

#include "infogeo/errors.hpp"
#include "infogeo/geometry.hpp"

namespace infogeo {
namespace {

void require_positive(double a) {
  if (!(a > 0.0)) throw DomainError("escort order must be positive");
}

// ∂ log p^(q) = q (s − E_q s)
Mat escort_scores(const Mat& s, const Vec& pq, double q) {
  const Eigen::RowVectorXd mean = pq.transpose() * s;
  return q * Mat(s.rowwise() - mean);
}

}  // namespace

Mat naudts_fisher(const ParametricModel& m, const Vec& theta, double alpha, const DiffConfig& cfg) {
  require_positive(alpha);
  const Vec pa = escort(m.eval(theta), alpha).weights();
  const Mat dp = model_partials(m, theta, cfg);
  return linalg::symmetrize(dp.transpose() * pa.cwiseInverse().asDiagonal() * dp);
}

Mat bercher_fisher(const ParametricModel& m, const Vec& theta, double q, const DiffConfig& cfg) {
  require_positive(q);
  const ProbVector p = m.eval(theta);
  const Vec pq = escort(p, q).weights();
  const Mat t = escort_scores(model_scores(m, theta, cfg), pq, q);
  const Vec w = pq.cwiseProduct(pq.cwiseQuotient(p.weights()));
  return linalg::symmetrize(t.transpose() * w.asDiagonal() * t);
}

Mat bercher_reweighted(const ParametricModel& m, const Vec& theta, double q, const DiffConfig& cfg) {
  require_positive(q);
  const ProbVector p = m.eval(theta);
  const Vec pq = escort(p, q).weights();
  const Mat t = escort_scores(model_scores(m, theta, cfg), pq, q);
  const Vec factor = p.weights().cwiseQuotient(q * q * pq);
  const Vec w = pq.cwiseProduct(pq.cwiseQuotient(p.weights())).cwiseProduct(factor);
  return linalg::symmetrize(t.transpose() * w.asDiagonal() * t);
}

VariantReport compare_variants(const ParametricModel& m, const Vec& theta, double alpha,
                               const DiffConfig& cfg) {
  VariantReport r;
  r.theta = theta;
  r.alpha = alpha;
  r.ours = alpha == 1.0 ? fisher_metric(m, theta, cfg).entries
                        : alpha_metric(m, theta, alpha, cfg).entries;
  r.naudts = naudts_fisher(m, theta, alpha, cfg);
  r.bercher = bercher_fisher(m, theta, alpha, cfg);
  r.bercher_reweighted = bercher_reweighted(m, theta, alpha, cfg);
  r.naudts_minus_ours = r.naudts - r.ours;
  r.bercher_minus_ours = r.bercher - r.ours;
  r.naudts_over_ours = r.naudts.binaryExpr(r.ours, [](double a, double b) {
    return b == 0.0 ? std::numeric_limits<double>::quiet_NaN() : a / b;
  });
  return r;
}

}  // namespace infogeo
