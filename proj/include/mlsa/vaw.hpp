#ifndef MLSA_VAW_HPP
#define MLSA_VAW_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

#include "mlsa/audit.hpp"

namespace mlsa::vaw {

/// Shrinkage leave-one-out linear predictor with the full-sample Gram matrix
/// A = X^T X: beta_{-i} = A^+ sum_{j != i} x_j y_j.
struct LinearLooResult {
  Eigen::VectorXd beta_hat;
  Eigen::MatrixXd beta_minus;  // row i is beta_{-i}
  Eigen::VectorXd leverages;   // x_i^T A^+ x_i
  Eigen::MatrixXd A_pinv;
  double loo_sq_sum = 0.0;
  double fit_sq_sum = 0.0;
  double m_sq = 0.0;  // max y_i^2
  std::size_t rank = 0;
  double svd_tol = 0.0;
};

/// eps * max(n, d), the relative cut-off for singular values.
double default_svd_tol(std::size_t n, std::size_t d);

/// Pseudoinverse through the SVD of X; singular values at most svd_tol * sigma_max are zero.
LinearLooResult fit_transductive_vaw(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                     std::optional<double> svd_tol = std::nullopt);

/// sum (y_i - x_i^T beta_{-i})^2 <= 2 sum (y_i - x_i^T beta_hat)^2 + 2 m^2 rank(A).
BoundCertificate verify_loo_bound(const LinearLooResult& result);

struct PinvIdentityReport {
  double max_abs_error = 0.0;
  bool passed() const { return max_abs_error <= 1e-10; }
};

/// Compares X^+ from a complete orthogonal decomposition with A^+ X^T.
PinvIdentityReport verify_pinv_identity(const Eigen::MatrixXd& X,
                                        std::optional<double> svd_tol = std::nullopt);

/// Residual identity y_i - x_i^T beta_{-i} = (y_i - x_i^T beta_hat) + h_i y_i; max abs deviation.
double residual_identity_error(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const LinearLooResult& result);

}  // namespace mlsa::vaw

#endif  // MLSA_VAW_HPP
