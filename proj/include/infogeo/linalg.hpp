#pragma once

#include <Eigen/Dense>

namespace infogeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace linalg {

Mat symmetrize(const Mat& m);

/// max |m - mᵀ| / max(1, max |m|)
double relative_asymmetry(const Mat& m);

/// Smallest eigenvalue of the symmetric part of `m`.
double min_eigenvalue(const Mat& m);

/// Cholesky of a symmetric matrix with a single retry at `m + 1e-10·trace(m)·I`.
/// Returns false when both attempts fail.
bool cholesky_with_jitter(const Mat& m, Eigen::LLT<Mat>& out);

/// Solves `m x = rhs` for symmetric positive definite `m`. Throws DomainError when singular.
Mat solve_spd(const Mat& m, const Mat& rhs);

/// `m⁻¹` obtained column by column from linear solves.
Mat spd_inverse(const Mat& m);

/// Covariance of the rows of `values` (d×k) under probability weights `w`, centered first.
Mat weighted_covariance(const Mat& values, const Vec& w);

/// Σ_x w(x) values.row(x)
Vec weighted_mean(const Mat& values, const Vec& w);

}  // namespace linalg
}  // namespace infogeo
