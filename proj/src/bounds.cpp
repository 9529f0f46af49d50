#include "infogeo/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "infogeo/errors.hpp"

namespace infogeo {
namespace {

std::vector<double> normalized_weights(const ThetaGrid& grid, std::vector<double> lam) {
  // Dividing by the largest value first makes any constant density produce exactly 1.0 here,
  // so a flat prior yields the same bits as the unweighted rule.
  const double top = *std::max_element(lam.begin(), lam.end());
  double total = 0.0;
  for (double& v : lam) {
    v = (v / top) * grid.cell_volume;
    total += v;
  }
  for (double& v : lam) v /= total;
  return lam;
}

Mat metric_part(const ParametricModel& m, const Vec& theta, double alpha, const DiffConfig& cfg) {
  return alpha == 1.0 ? fisher_metric(m, theta, cfg).entries
                      : alpha_metric(m, theta, alpha, cfg).entries;
}

Mat likelihood_gram(const ParametricModel& m, double theta, const std::vector<double>& pts) {
  const Vec p = m.eval(Vec::Constant(1, theta)).weights();
  const int n = static_cast<int>(pts.size());
  Mat L(p.size(), n);
  for (int l = 0; l < n; ++l) L.col(l) = m.eval(Vec::Constant(1, pts[l])).weights().cwiseQuotient(p);
  return L.transpose() * p.asDiagonal() * L;
}

std::vector<double> dedupe(std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double x : pts) {
    if (out.empty() || std::abs(x - out.back()) > 1e-12) out.push_back(x);
  }
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::not_compared: return "not-compared";
  }
  return {};
}

BoundReport compare(std::string kind, const Mat& bound, std::optional<Mat> covariance,
                    double rel_tol) {
  BoundReport r;
  r.kind = std::move(kind);
  r.bound = bound;
  r.tolerance = rel_tol * (1.0 + std::abs(bound.trace()));
  if (!covariance) {
    r.psd_margin = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  if (covariance->rows() != bound.rows() || covariance->cols() != bound.cols()) {
    throw DimensionError(r.kind + ": covariance and bound shapes differ");
  }
  r.covariance = std::move(covariance);
  r.psd_margin = linalg::min_eigenvalue(*r.covariance - bound);
  r.verdict = r.psd_margin >= -r.tolerance ? Verdict::holds : Verdict::violated;
  return r;
}

HybridMask::HybridMask(int k, std::vector<int> deterministic) : k_(k), det_(std::move(deterministic)) {
  std::sort(det_.begin(), det_.end());
  if (std::adjacent_find(det_.begin(), det_.end()) != det_.end()) {
    throw DomainError("hybrid mask lists an index twice");
  }
  for (int i : det_) {
    if (i < 0 || i >= k_) throw DimensionError("hybrid mask index out of range");
  }
}

HybridMask HybridMask::all_deterministic(int k) {
  std::vector<int> all(static_cast<std::size_t>(k));
  std::iota(all.begin(), all.end(), 0);
  return HybridMask(k, std::move(all));
}

std::vector<int> HybridMask::random() const {
  std::vector<int> out;
  for (int i = 0; i < k_; ++i) {
    if (!is_deterministic(i)) out.push_back(i);
  }
  return out;
}

bool HybridMask::is_deterministic(int i) const {
  return std::binary_search(det_.begin(), det_.end(), i);
}

Mat HybridMask::apply(const Mat& J) const {
  if (J.rows() != k_ || J.cols() != k_) throw DimensionError("hybrid mask and J differ in size");
  Mat out = J;
  for (int i : det_) {
    out.row(i).setZero();
    out.col(i).setZero();
  }
  return out;
}

ThetaGrid ThetaGrid::midpoint(const Box& box, std::vector<int> counts) {
  if (static_cast<int>(counts.size()) != box.dim()) {
    throw ConfigError("grid needs one node count per parameter");
  }
  ThetaGrid g;
  g.box = box;
  g.counts = counts;
  g.cell_volume = 1.0;
  std::vector<double> step(counts.size());
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a] < 8) {
      throw ConfigError("grid too coarse: " + std::to_string(counts[a]) +
                        " points on axis " + std::to_string(a) + ", need at least 8");
    }
    if (!(box.upper[a] > box.lower[a])) throw ConfigError("grid box is empty");
    step[a] = (box.upper[a] - box.lower[a]) / counts[a];
    g.cell_volume *= step[a];
  }
  std::vector<int> idx(counts.size(), 0);
  for (;;) {
    Vec node(box.dim());
    for (std::size_t a = 0; a < counts.size(); ++a) node[a] = box.lower[a] + (idx[a] + 0.5) * step[a];
    g.nodes.push_back(node);
    std::size_t a = 0;
    while (a < counts.size() && ++idx[a] == counts[a]) idx[a++] = 0;
    if (a == counts.size()) break;
  }
  return g;
}

ThetaGrid ThetaGrid::midpoint(double lower, double upper, int n) {
  return midpoint(Box{Vec::Constant(1, lower), Vec::Constant(1, upper)}, {n});
}

std::vector<double> prior_weights(const ThetaGrid& grid, const PriorDensity& prior) {
  std::vector<double> lam;
  lam.reserve(grid.size());
  for (const Vec& t : grid.nodes) lam.push_back(prior(t));
  return normalized_weights(grid, std::move(lam));
}

Mat inverse_metric_bound(const MetricMatrix& G) { return linalg::spd_inverse(G.entries); }

Mat biased_cr_bound(const ParametricModel& m, const Vec& theta,
                    const std::function<Vec(const Vec&)>& bias, const DiffConfig& cfg) {
  cfg.validate();
  m.require_margin(theta, cfg);
  const int k = m.param_dim();
  const Vec b = bias(theta);
  if (b.size() != k) throw DimensionError("bias must have one component per parameter");
  Vec diag(k);
  for (int i = 0; i < k; ++i) {
    auto diff = [&](double h) {
      Vec up = theta, dn = theta;
      up[i] += h;
      dn[i] -= h;
      return (bias(up)[i] - bias(dn)[i]) / (2.0 * h);
    };
    const double h = cfg.step2(theta[i]);
    double d = diff(h);
    if (cfg.scheme == DiffConfig::Scheme::richardson) d = (4.0 * diff(0.5 * h) - d) / 3.0;
    diag[i] = 1.0 + d;
  }
  const Mat ginv = inverse_metric_bound(fisher_metric(m, theta, cfg));
  return diag.asDiagonal() * ginv * diag.asDiagonal() + b * b.transpose();
}

BayesianBound bayesian_bound(const ParametricModel& m, const PriorDensity& prior,
                             const ThetaGrid& grid, double alpha,
                             const std::optional<HybridMask>& mask, const DiffConfig& cfg) {
  const int k = m.param_dim();
  if (grid.box.dim() != k) throw DimensionError("grid and model dimensions differ");
  if (mask && mask->dim() != k) throw DimensionError("hybrid mask and model dimensions differ");
  const auto w = prior_weights(grid, prior);
  Mat info = Mat::Zero(k, k);
  Mat mean_inverse = Mat::Zero(k, k);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Vec& t = grid.nodes[n];
    const Vec gl = prior.grad_log_at(t, cfg);
    Mat J = gl * gl.transpose();
    if (mask) J = mask->apply(J);
    const Mat local = metric_part(m, t, alpha, cfg) + J;
    info += w[n] * local;
    mean_inverse += w[n] * linalg::spd_inverse(local);
  }
  BayesianBound out;
  out.information = info;
  out.bound = linalg::spd_inverse(info);
  out.jensen_gap = linalg::symmetrize(mean_inverse - out.bound);
  out.jensen_margin = linalg::min_eigenvalue(out.jensen_gap);
  return out;
}

Mat integrated_classical_bound(const ParametricModel& m, const ThetaGrid& grid, double alpha,
                               const DiffConfig& cfg) {
  const int k = m.param_dim();
  if (grid.box.dim() != k) throw DimensionError("grid and model dimensions differ");
  const auto w = normalized_weights(grid, std::vector<double>(grid.size(), 1.0));
  Mat info = Mat::Zero(k, k);
  for (std::size_t n = 0; n < grid.size(); ++n) info += w[n] * metric_part(m, grid.nodes[n], alpha, cfg);
  return linalg::spd_inverse(info);
}

double barankin_bound(const ParametricModel& m, const TestPointSet& pts) {
  if (m.param_dim() != 1) throw DimensionError("the Barankin bound is implemented for scalar parameters");
  m.require_interior(Vec::Constant(1, pts.base));
  if (pts.points.empty()) throw TestPointError("no test points");
  const auto points = dedupe(pts.points);
  for (double x : points) m.require_interior(Vec::Constant(1, x));

  const Mat B = likelihood_gram(m, pts.base, points);
  Vec delta(points.size());
  for (std::size_t l = 0; l < points.size(); ++l) delta[l] = points[l] - pts.base;

  Eigen::SelfAdjointEigenSolver<Mat> es(B, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  if (!(es.eigenvalues().minCoeff() > 1e-14 * top)) {
    throw TestPointError("likelihood-ratio Gram matrix is singular for these test points");
  }
  Eigen::LLT<Mat> llt(B);
  if (llt.info() != Eigen::Success) throw TestPointError("likelihood-ratio Gram matrix is not positive definite");
  return delta.dot(llt.solve(delta));
}

BarankinSearch barankin_search(const ParametricModel& m, double theta,
                               const std::vector<double>& candidates, int max_points) {
  if (candidates.empty()) throw DomainError("barankin_search: empty candidate grid");
  if (max_points < 1 || max_points > 4) throw DomainError("barankin_search: max_points must be in 1..4");
  std::vector<double> pool;
  for (double c : dedupe(candidates)) {
    if (std::abs(c - theta) > 1e-12) pool.push_back(c);
  }

  BarankinSearch best{0.0, {theta, {theta}}};
  const int n = static_cast<int>(pool.size());
  std::vector<int> pick;
  // Lexicographic enumeration of index subsets of size 1..max_points.
  for (int size = 1; size <= std::min(max_points, n); ++size) {
    pick.resize(static_cast<std::size_t>(size));
    std::iota(pick.begin(), pick.end(), 0);
    for (;;) {
      TestPointSet set{theta, {theta}};
      for (int i : pick) set.points.push_back(pool[i]);
      try {
        const double v = barankin_bound(m, set);
        if (v > best.value) best = {v, set};
      } catch (const TestPointError&) {
      }
      int i = size - 1;
      while (i >= 0 && pick[i] == n - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return best;
}

}  // namespace infogeo
