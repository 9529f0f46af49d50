#include "infogeo/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "infogeo/errors.hpp"

namespace infogeo::linalg {

Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

double relative_asymmetry(const Mat& m) {
  if (m.size() == 0) return 0.0;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

double min_eigenvalue(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool cholesky_with_jitter(const Mat& m, Eigen::LLT<Mat>& out) {
  out.compute(m);
  if (out.info() == Eigen::Success) return true;
  const double jitter = 1e-10 * std::abs(m.trace());
  if (!(jitter > 0.0)) return false;
  out.compute(m + jitter * Mat::Identity(m.rows(), m.cols()));
  return out.info() == Eigen::Success;
}

Mat solve_spd(const Mat& m, const Mat& rhs) {
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) {
    throw DomainError("matrix is not positive definite; cannot solve");
  }
  return llt.solve(rhs);
}

Mat spd_inverse(const Mat& m) {
  return symmetrize(solve_spd(m, Mat::Identity(m.rows(), m.cols())));
}

Vec weighted_mean(const Mat& values, const Vec& w) { return values.transpose() * w; }

Mat weighted_covariance(const Mat& values, const Vec& w) {
  const Eigen::RowVectorXd mu = weighted_mean(values, w).transpose();
  const Mat centered = values.rowwise() - mu;
  return symmetrize(centered.transpose() * w.asDiagonal() * centered);
}

}  // namespace infogeo::linalg
