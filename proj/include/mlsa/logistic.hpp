#ifndef MLSA_LOGISTIC_HPP
#define MLSA_LOGISTIC_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mlsa/audit.hpp"
#include "mlsa/types.hpp"

namespace mlsa::logistic {

/// Labeled covariates with ‖x_i‖ <= R and the parameter ball radius r.
struct LogisticProblem {
  Eigen::MatrixXd X;  // n x d
  Eigen::VectorXd y;  // entries in {-1, +1}
  double r = 1.0;
  double R = 1.0;

  std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(X.cols()); }

  /// Throws on shape mismatch, labels outside {-1, +1}, a row norm above R
  /// or nonpositive radii.
  void validate() const;

  /// Rows of the form x_1 ... x_d y. Labels 0 are read as -1.
  static LogisticProblem from_rows(const std::vector<std::vector<double>>& rows, double r,
                                   double R);
};

/// log(1 + exp(-z)) without overflow.
double softplus_neg(double z);

/// 1 / (1 + exp(-z)).
double sigmoid(double z);

/// sum_i log(1 + exp(-y_i x_i^T theta)), optionally skipping one row.
double empirical_loss(const LogisticProblem& problem, const Eigen::VectorXd& theta,
                      std::optional<std::size_t> exclude = std::nullopt);

Eigen::VectorXd loss_gradient(const LogisticProblem& problem, const Eigen::VectorXd& theta,
                              std::optional<std::size_t> exclude = std::nullopt);

struct ErmResult {
  Eigen::VectorXd theta;
  double loss = 0.0;
  Eigen::VectorXd gradient;  // gradient of the loss at theta
  double projected_gradient_norm = 0.0;
  std::size_t iterations = 0;
};

inline constexpr std::size_t kErmIterationCap = 100000;

/// Projected gradient over ‖theta‖ <= r with step 4 / lambda_max(A). Stops when
/// the projected-gradient norm is at most tol; throws ConvergenceError at the cap.
ErmResult fit_erm(const LogisticProblem& problem, std::optional<std::size_t> exclude = std::nullopt,
                  double tol = 1e-8);

struct LogisticGeometry {
  Eigen::MatrixXd A;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns match eigenvalues
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  Eigen::MatrixXd A_half;
  Eigen::MatrixXd A_half_inv;
  ErmResult erm;
  double R_B = 0.0;
  double delta = 0.0;
};

/// Second-moment matrix, its square roots, the ERM, R_B = √n rR + 2√(rR) and
/// delta = 1 + rR + √(rR / lambda_min) R. Throws if lambda_min(A) <= 0.
LogisticGeometry build_geometry(const LogisticProblem& problem);

/// min over ‖theta‖ <= r of (v - theta)^T A (v - theta).
double distance_sq_to_ball(const LogisticGeometry& geometry, const LogisticProblem& problem,
                           const Eigen::VectorXd& v);

/// Whether v lies in H_A = {v : distance_sq_to_ball(v) <= rR}.
bool membership_HA(const LogisticGeometry& geometry, const LogisticProblem& problem,
                   const Eigen::VectorXd& v);

/// k uniform samples from B = {‖A^{1/2} theta‖ <= R_B}, one per column.
Eigen::MatrixXd sample_muB(const LogisticGeometry& geometry, std::size_t k, std::uint64_t seed);

struct McConfig {
  std::size_t samples_per_level = 10000;
  std::uint64_t seed = 0;
  std::size_t min_accepted = 100;

  /// Throws unless samples_per_level >= min_accepted >= 100.
  void validate() const;
};

struct LevelEstimate {
  double t = 0.0;
  std::optional<std::size_t> exclude;
  double estimate = 0.0;
  double stderr_estimate = 0.0;
  Eigen::MatrixXd accepted;  // d x accepted
};

/// Rejection estimate of mu_B(H_t) (or H_{t,i} with `exclude`), where the
/// minimum is taken over the parameter ball on the matching sample.
LevelEstimate estimate_level(const LogisticGeometry& geometry, const LogisticProblem& problem,
                             double t, std::optional<std::size_t> exclude, const McConfig& mc);

/// Mean of sigma(y_i x_i^T theta) over the accepted samples.
double aggregate_prob(const Eigen::MatrixXd& accepted, const LogisticProblem& problem, std::size_t i);

/// Levels {k delta : k = 1..ceil(16 d ln max(8, 2nrR))}.
ToleranceGrid logistic_grid(const LogisticGeometry& geometry, const LogisticProblem& problem);

/// Negative log probability; decreasing in the probability value.
LossModel probability_log_loss(double delta);

struct LogisticMlsa {
  MlsaOutput output;
  std::vector<double> loo_erm;  // min over the ball of L_{S-i}
  std::size_t bank_size = 0;
  std::size_t bank_in_HA = 0;
  std::size_t min_level_accepted = 0;
  /// Common-random-number sandwich checks over (row, sample) pairs.
  std::size_t sandwich_checks = 0;
  std::size_t sandwich_violations = 0;
  /// Per-sample loss on H_A against delta.
  double max_sample_loss = 0.0;
  std::size_t loss_bound_violations = 0;
  /// Growth audit of the sample bank, c_g = 2.
  GrowthAudit audit;
};

/// MLSA with the Monte-Carlo aggregate. One bank of mc.samples_per_level
/// samples from mu_B is shared by every (t, i) cell, so accepted sets are
/// nested across levels and rows. Throws InsufficientAcceptance when a cell
/// keeps fewer than mc.min_accepted samples.
LogisticMlsa run_mlsa_logistic(const LogisticProblem& problem, const LogisticGeometry& geometry,
                               const McConfig& mc);

struct ContainmentReport {
  std::size_t samples = 0;
  std::size_t in_halfspace = 0;
  std::size_t violations = 0;  // half-space samples outside H_{rR}
  bool interior = false;
  double fraction = 0.0;
  double stderr_fraction = 0.0;

  bool passed() const;
};

inline constexpr double kInteriorGradientTolerance = 1e-6;

/// Uniform samples from {‖A^{1/2}(theta - theta*)‖^2 <= rR}; those with
/// grad^T (theta - theta*) <= 0 must lie in H_{rR}, and the half-space fraction
/// must be 1/2 within 3 standard errors (or 1 when theta* is interior).
ContainmentReport verify_lemma_containment(const LogisticGeometry& geometry,
                                           const LogisticProblem& problem, const McConfig& mc);

struct VolumeReport {
  double estimate = 0.0;
  double stderr_estimate = 0.0;
  std::size_t accepted = 0;
  double threshold = 0.0;  // max(8, 2nrR)^{-d}

  bool passed() const { return estimate + 3.0 * stderr_estimate >= threshold; }
};

/// mu_B(H_{rR}) + 3 se >= max(8, 2nrR)^{-d}.
VolumeReport verify_volume_lower_bound(const LogisticGeometry& geometry,
                                       const LogisticProblem& problem, const McConfig& mc);

inline constexpr double kMcRelativeSlack = 0.05;

/// LOO log loss <= 8 min L_S / n + 136 delta d ln max(8, 2nrR) / n, passing
/// within 5% of the right-hand side.
BoundCertificate verify_cor_logistic(const MlsaOutput& output, const LogisticGeometry& geometry,
                                     const LogisticProblem& problem);

struct LogisticRun {
  LogisticGeometry geometry;
  LogisticMlsa mlsa;
  MainTheoremCertificates main;
  BoundCertificate corollary;
};

LogisticRun run_logistic(const LogisticProblem& problem, const McConfig& mc);

}  // namespace mlsa::logistic

#endif  // MLSA_LOGISTIC_HPP
