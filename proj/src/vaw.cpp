#include "mlsa/vaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlsa::vaw {

double default_svd_tol(std::size_t n, std::size_t d) {
  return std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(n, d));
}

LinearLooResult fit_transductive_vaw(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                     std::optional<double> svd_tol) {
  const auto n = static_cast<std::size_t>(X.rows());
  const auto d = static_cast<std::size_t>(X.cols());
  if (n == 0 || d == 0) throw std::invalid_argument("fit_transductive_vaw: empty design");
  if (static_cast<std::size_t>(y.size()) != n) {
    throw std::invalid_argument("fit_transductive_vaw: response length mismatch");
  }

  LinearLooResult out;
  out.svd_tol = svd_tol.value_or(default_svd_tol(n, d));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cut = sigma.size() > 0 ? out.svd_tol * sigma(0) : 0.0;
  Eigen::VectorXd inv_sq = Eigen::VectorXd::Zero(sigma.size());
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > cut) {
      inv_sq(k) = 1.0 / (sigma(k) * sigma(k));
      ++out.rank;
    }
  }
  const Eigen::MatrixXd& V = svd.matrixV();
  out.A_pinv = V * inv_sq.asDiagonal() * V.transpose();

  out.beta_hat = out.A_pinv * (X.transpose() * y);
  const Eigen::MatrixXd P = X * out.A_pinv;  // row i is (A^+ x_i)^T
  out.beta_minus.resize(X.rows(), X.cols());
  out.leverages.resize(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    out.beta_minus.row(i) = out.beta_hat.transpose() - P.row(i) * y(i);
    out.leverages(i) = P.row(i).dot(X.row(i));
    const double loo_res = y(i) - X.row(i).dot(out.beta_minus.row(i));
    const double fit_res = y(i) - X.row(i).dot(out.beta_hat);
    out.loo_sq_sum += loo_res * loo_res;
    out.fit_sq_sum += fit_res * fit_res;
    out.m_sq = std::max(out.m_sq, y(i) * y(i));
  }
  return out;
}

BoundCertificate verify_loo_bound(const LinearLooResult& result) {
  CertificateComponents parts;
  parts.erm_loss = result.fit_sq_sum;
  parts.multiplier = 2.0;
  const double rhs = 2.0 * result.fit_sq_sum + 2.0 * result.m_sq * static_cast<double>(result.rank);
  return make_certificate("linear_loo_bound", result.loo_sq_sum, rhs, parts);
}

PinvIdentityReport verify_pinv_identity(const Eigen::MatrixXd& X, std::optional<double> svd_tol) {
  const double tol = svd_tol.value_or(
      default_svd_tol(static_cast<std::size_t>(X.rows()), static_cast<std::size_t>(X.cols())));

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(X.rows(), X.cols());
  cod.setThreshold(tol);
  cod.compute(X);
  const Eigen::MatrixXd x_pinv = cod.pseudoInverse();

  const Eigen::MatrixXd A = X.transpose() * X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  // eigenvalues ascend; keep the top rank(X) of them
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  const Eigen::Index rank = cod.rank();
  for (Eigen::Index k = lambda.size() - rank; k < lambda.size(); ++k) inv(k) = 1.0 / lambda(k);
  const Eigen::MatrixXd A_pinv = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();

  PinvIdentityReport report;
  const Eigen::MatrixXd diff = x_pinv - A_pinv * X.transpose();
  report.max_abs_error = diff.size() > 0 ? diff.cwiseAbs().maxCoeff() : 0.0;
  return report;
}

double residual_identity_error(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const LinearLooResult& result) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double lhs = y(i) - X.row(i).dot(result.beta_minus.row(i));
    const double rhs = (y(i) - X.row(i).dot(result.beta_hat)) + result.leverages(i) * y(i);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace mlsa::vaw
