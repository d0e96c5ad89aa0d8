#include "mlsa/regression.hpp"

#include <algorithm>
#include <cmath>

namespace mlsa::regression {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void check_scale(double M) {
  if (!(M > 0.0) || !std::isfinite(M)) throw std::invalid_argument("loss scale M must be positive");
}

}  // namespace

LossModel squared_loss(double M) {
  check_scale(M);
  LossModel loss;
  loss.name = "squared";
  loss.pointwise = [M](double prediction, double response) {
    const double diff = clamp01(prediction) - response;
    return M * diff * diff;
  };
  loss.delta_bound = M;
  loss.monotonicity = Monotonicity::in_distance;
  loss.gap_source = GapSource::pointwise_bound;
  return loss;
}

LossModel absolute_loss(double M) {
  check_scale(M);
  LossModel loss;
  loss.name = "absolute";
  loss.pointwise = [M](double prediction, double response) {
    return M * std::abs(clamp01(prediction) - response);
  };
  loss.delta_bound = M;
  loss.monotonicity = Monotonicity::in_distance;
  loss.gap_source = GapSource::pointwise_bound;
  return loss;
}

std::vector<LossModel> builtin_losses() { return {squared_loss(), absolute_loss()}; }

LossModel loss_by_name(const std::string& name, double M) {
  if (name == "squared") return squared_loss(M);
  if (name == "absolute") return absolute_loss(M);
  throw std::invalid_argument("unknown regression loss '" + name + "'");
}

ToleranceGrid regression_grid(double M, std::size_t m) {
  check_scale(M);
  if (m < 2) {
    throw std::invalid_argument("regression_grid: degenerate grid for a class of size " +
                                std::to_string(m));
  }
  const double count = std::ceil(12.0 * std::log(static_cast<double>(m)));
  return ToleranceGrid::multiples(M, static_cast<std::size_t>(count));
}

ToleranceGrid grid_for_class(double M, std::size_t m) {
  if (m == 1) {
    check_scale(M);
    return ToleranceGrid::multiples(M, 1);
  }
  return regression_grid(M, m);
}

void check_responses(const LabeledSample& sample) {
  for (double y : sample.responses) {
    if (!(y >= 0.0 && y <= 1.0)) {
      throw std::invalid_argument("regression response " + std::to_string(y) +
                                  " outside [0, 1]");
    }
  }
}

BoundCertificate verify_cor_regression(const MlsaOutput& output, const PredictionTable& table,
                                       const LabeledSample& sample, const LossModel& loss) {
  const double M = loss.delta_bound;
  const std::size_t m = table.cols();
  if (!(output.grid == grid_for_class(M, m))) {
    throw std::invalid_argument("verify_cor_regression: output was not produced on the regression grid");
  }
  const double erm = compute_losses(table, sample, loss).min_total();
  const double n = static_cast<double>(table.rows());
  CertificateComponents parts;
  parts.erm_loss = erm;
  parts.t_max = output.grid.t_max();
  parts.delta = M;
  parts.c_g = 2.0;
  parts.rho = 0.75;
  parts.multiplier = 8.0 / n;
  const double rhs = 8.0 * erm / n + 104.0 * M * std::log(static_cast<double>(m)) / n;
  return make_certificate("bounded_convex_oracle_inequality", output.loo_error, rhs, parts);
}

RegressionRun run_regression(const PredictionTable& table, const LabeledSample& sample,
                             const LossModel& loss, double c_g) {
  check_shapes(table, sample);
  check_responses(sample);
  const ToleranceGrid grid = grid_for_class(loss.delta_bound, table.cols());
  RegressionRun run;
  run.output = run_mlsa(table, sample, loss, grid, Aggregator::mean());
  run.audit = grid_growth_audit(table, sample, loss, grid, c_g);
  run.erm = compute_losses(table, sample, loss).min_total();
  run.main = verify_main_theorem(run.output, run.audit, run.erm, grid);
  run.corollary = verify_cor_regression(run.output, table, sample, loss);
  return run;
}

}  // namespace mlsa::regression
