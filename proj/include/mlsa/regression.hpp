#ifndef MLSA_REGRESSION_HPP
#define MLSA_REGRESSION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "mlsa/audit.hpp"
#include "mlsa/core.hpp"

namespace mlsa::regression {

using mlsa::average_aggregate;

/// M (clamp(y') - y)^2 on [0, 1]. Predictions are clamped into [0, 1] first.
LossModel squared_loss(double M = 1.0);

/// M |clamp(y') - y| on [0, 1].
LossModel absolute_loss(double M = 1.0);

/// Squared and absolute loss with M = 1.
std::vector<LossModel> builtin_losses();

/// "squared" or "absolute", scaled by M. Throws on an unknown name.
LossModel loss_by_name(const std::string& name, double M = 1.0);

/// Levels {M, 2M, ..., ceil(12 ln m) M}, gap M. Requires M > 0 and m >= 2.
ToleranceGrid regression_grid(double M, std::size_t m);

/// Grid used for a class of size m: regression_grid for m >= 2, the single
/// level {M} for a one-hypothesis class.
ToleranceGrid grid_for_class(double M, std::size_t m);

/// Throws unless every response lies in [0, 1].
void check_responses(const LabeledSample& sample);

/// LOO <= 8 min L_S / n + 104 M ln m / n.
BoundCertificate verify_cor_regression(const MlsaOutput& output, const PredictionTable& table,
                                       const LabeledSample& sample, const LossModel& loss);

struct RegressionRun {
  MlsaOutput output;
  GrowthAudit audit;
  double erm = 0.0;
  MainTheoremCertificates main;
  BoundCertificate corollary;
};

/// Averaging MLSA on grid_for_class(loss.delta_bound, m) with audit and certificates.
RegressionRun run_regression(const PredictionTable& table, const LabeledSample& sample,
                             const LossModel& loss, double c_g = 2.0);

}  // namespace mlsa::regression

#endif  // MLSA_REGRESSION_HPP
