#include "mlsa/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace mlsa {

std::size_t GrowthAudit::sandwich_violations() const {
  std::size_t total = 0;
  for (const auto& level : per_level) total += level.sandwich_violations;
  return total;
}

std::size_t GrowthAudit::good_levels() const {
  return static_cast<std::size_t>(std::count_if(per_level.begin(), per_level.end(),
                                                [](const LevelGrowth& l) { return l.good; }));
}

BoundCertificate make_certificate(std::string name, double lhs, double rhs,
                                  CertificateComponents components, double tolerance) {
  BoundCertificate cert;
  cert.name = std::move(name);
  cert.lhs = lhs;
  cert.rhs = rhs;
  cert.slack = rhs - lhs;
  cert.components = components;
  cert.tolerance = tolerance;
  return cert;
}

AggCheckReport check_agg_assumption(const Aggregator& agg, const LossModel& loss,
                                    const PredictionTable& table, const LabeledSample& sample,
                                    std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("check_agg_assumption: trials must be >= 1");
  check_shapes(table, sample);
  Rng rng(seed);
  const std::size_t m = table.cols();
  std::vector<std::size_t> pool(m);
  std::iota(pool.begin(), pool.end(), std::size_t{0});

  AggCheckReport report;
  report.trials = trials;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t size = std::uniform_int_distribution<std::size_t>(1, m)(rng);
    const std::size_t row = std::uniform_int_distribution<std::size_t>(0, table.rows() - 1)(rng);
    // partial Fisher-Yates for a uniform subset of the requested size
    for (std::size_t k = 0; k < size; ++k) {
      const std::size_t pick = std::uniform_int_distribution<std::size_t>(k, m - 1)(rng);
      std::swap(pool[k], pool[pick]);
    }
    std::vector<std::size_t> members(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(members.begin(), members.end());

    const double y = sample.responses[row];
    const double aggregated = loss(agg(members, table, row), y);
    double mean = 0.0;
    for (std::size_t j : members) mean += loss(table(row, j), y);
    mean /= static_cast<double>(size);

    if (aggregated > mean + kNumericTolerance) {
      ++report.violations;
      if (!report.first_violation) {
        report.first_violation = AggViolation{row, members, aggregated, mean};
      }
    }
  }
  return report;
}

LossBoundAudit audit_loss_bound(const PredictionTable& table, const LabeledSample& sample,
                                const LossModel& loss) {
  const LossMatrix losses = compute_losses(table, sample, loss);
  LossBoundAudit out;
  for (std::size_t i = 0; i < losses.rows; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < losses.cols; ++j) {
      lo = std::min(lo, losses(i, j));
      hi = std::max(hi, losses(i, j));
    }
    if (loss.gap_source == GapSource::pointwise_bound) {
      out.observed = std::max(out.observed, hi);
      if (lo < -kNumericTolerance || hi > loss.delta_bound + kNumericTolerance) ++out.violations;
    } else {
      out.observed = std::max(out.observed, hi - lo);
      if (hi - lo > loss.delta_bound + kNumericTolerance) ++out.violations;
    }
  }
  return out;
}

GrowthAudit grid_growth_audit(const PredictionTable& table, const LabeledSample& sample,
                              const LossModel& loss, const ToleranceGrid& grid, double c_g) {
  if (!(c_g >= 1.0)) throw std::invalid_argument("grid_growth_audit: c_g must be >= 1");
  const LossMatrix losses = compute_losses(table, sample, loss);
  const std::size_t n = losses.rows;
  const std::size_t m = losses.cols;
  const std::size_t levels = grid.size();
  const double delta = grid.gap();
  const double best = losses.min_total();

  std::vector<double> lower_thr(levels);
  std::vector<double> upper_thr(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    const double t = grid.levels()[k];
    lower_thr[k] = best + std::max(t - delta, 0.0);
    upper_thr[k] = best + t + delta;
  }

  GrowthAudit audit;
  audit.c_g = c_g;
  audit.delta = delta;
  audit.per_level.resize(levels);

  std::vector<double> sorted = losses.totals;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < levels; ++k) {
    auto& rec = audit.per_level[k];
    rec.t = grid.levels()[k];
    rec.size_minus = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), lower_thr[k]) - sorted.begin());
    rec.size_plus = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), upper_thr[k]) - sorted.begin());
    rec.ratio = static_cast<double>(rec.size_plus) / static_cast<double>(rec.size_minus);
  }

  // Level at which each column enters the full-sample set H_{max(t-delta,0)}.
  std::vector<std::size_t> enters_lower(m);
  for (std::size_t j = 0; j < m; ++j) {
    enters_lower[j] = static_cast<std::size_t>(
        std::lower_bound(lower_thr.begin(), lower_thr.end(), losses.totals[j]) -
        lower_thr.begin());
  }

  std::vector<unsigned char> violated(n * levels, 0);
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel
  {
    std::vector<double> thresholds(levels);
    std::vector<double> max_full(levels);  // max L_S over columns entering H_{t,i} at level k
    std::vector<double> max_loo(levels);   // max L_{S-i} over columns entering H_{t-delta} at k
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < rows; ++r) {
      const auto i = static_cast<std::size_t>(r);
      double best_loo = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < m; ++j) {
        best_loo = std::min(best_loo, losses.totals[j] - losses(i, j));
      }
      for (std::size_t k = 0; k < levels; ++k) thresholds[k] = best_loo + grid.levels()[k];
      std::fill(max_full.begin(), max_full.end(), -std::numeric_limits<double>::infinity());
      std::fill(max_loo.begin(), max_loo.end(), -std::numeric_limits<double>::infinity());
      for (std::size_t j = 0; j < m; ++j) {
        const double loo = losses.totals[j] - losses(i, j);
        const auto k = static_cast<std::size_t>(
            std::lower_bound(thresholds.begin(), thresholds.end(), loo) - thresholds.begin());
        if (k < levels) max_full[k] = std::max(max_full[k], losses.totals[j]);
        if (enters_lower[j] < levels) {
          max_loo[enters_lower[j]] = std::max(max_loo[enters_lower[j]], loo);
        }
      }
      double running_full = -std::numeric_limits<double>::infinity();
      double running_loo = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < levels; ++k) {
        running_full = std::max(running_full, max_full[k]);
        running_loo = std::max(running_loo, max_loo[k]);
        const bool upper_ok = running_full <= upper_thr[k] + kNumericTolerance;
        const bool lower_ok = running_loo <= thresholds[k] + kNumericTolerance;
        violated[i * levels + k] = (upper_ok && lower_ok) ? 0 : 1;
      }
    }
  }

  std::size_t good = 0;
  for (std::size_t k = 0; k < levels; ++k) {
    auto& rec = audit.per_level[k];
    for (std::size_t i = 0; i < n; ++i) rec.sandwich_violations += violated[i * levels + k];
    rec.sandwich_ok = rec.sandwich_violations == 0;
    rec.good = rec.sandwich_ok && rec.ratio <= c_g;
    good += rec.good ? 1 : 0;
  }
  audit.good_fraction = static_cast<double>(good) / static_cast<double>(levels);
  return audit;
}

BoundCertificate verify_single_level(const PredictionTable& table, const LabeledSample& sample,
                                     const LossModel& loss, const Aggregator& agg, double t,
                                     double delta, double c_g) {
  const ToleranceGrid single({t}, delta);
  const GrowthAudit audit = grid_growth_audit(table, sample, loss, single, c_g);
  if (!audit.per_level.front().good) {
    throw std::invalid_argument("verify_single_level: level t = " + std::to_string(t) +
                                " fails the local growth condition");
  }
  const MlsaOutput output = run_mlsa_unchecked(table, sample, loss, single, agg);
  const double n = static_cast<double>(table.rows());
  const double erm = compute_losses(table, sample, loss).min_total();

  CertificateComponents parts;
  parts.erm_loss = erm;
  parts.t_max = t;
  parts.delta = delta;
  parts.c_g = c_g;
  parts.rho = 1.0;
  parts.multiplier = c_g / n;
  return make_certificate("single_level_guarantee", output.loo_error,
                          parts.multiplier * (erm + t + delta), parts);
}

MainTheoremCertificates verify_main_theorem(const MlsaOutput& output, const GrowthAudit& audit,
                                            double erm, const ToleranceGrid& grid,
                                            double nominal_rho) {
  if (!(audit.good_fraction > 0.5)) {
    throw GridMajorityFailure("grid-majority failure: measured good fraction " +
                              std::to_string(audit.good_fraction) + " <= 1/2");
  }
  const double n = static_cast<double>(output.n);
  auto build = [&](std::string name, double rho) {
    CertificateComponents parts;
    parts.erm_loss = erm;
    parts.t_max = grid.t_max();
    parts.delta = grid.gap();
    parts.c_g = audit.c_g;
    parts.rho = rho;
    parts.multiplier = 2.0 * audit.c_g / ((2.0 * rho - 1.0) * n);
    return make_certificate(std::move(name), output.loo_error,
                            parts.multiplier * (erm + parts.t_max + parts.delta), parts);
  };
  return {build("median_oracle_inequality_measured_rho", audit.good_fraction),
          build("median_oracle_inequality_nominal_rho", nominal_rho)};
}

GeneralizationReport simulate_generalization(const GeneralizationTask& task, std::size_t n,
                                             std::size_t repetitions, std::uint64_t seed) {
  if (repetitions == 0) throw std::invalid_argument("simulate_generalization: no repetitions");
  const std::size_t points = n + 1;
  std::vector<double> test_loss(repetitions);
  std::vector<double> oracle(repetitions);

  const auto reps = static_cast<std::int64_t>(repetitions);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t r = 0; r < reps; ++r) {
    Rng rng = make_rng(seed, "repetition/" + std::to_string(r));
    const GeneralizationDraw draw = task.draw(rng, points);
    const ToleranceGrid grid = task.grid(points, draw.table.cols());
    const RowPrediction pred =
        predict_row(draw.table, draw.sample, task.loss, grid, task.agg, points - 1);
    const auto idx = static_cast<std::size_t>(r);
    test_loss[idx] = task.loss(pred.median, draw.sample.responses[points - 1]);
    oracle[idx] = compute_losses(draw.table, draw.sample, task.loss).min_total() /
                  static_cast<double>(points);
  }

  GeneralizationReport report;
  report.n = n;
  report.repetitions = repetitions;
  double sum = 0.0;
  double oracle_sum = 0.0;
  for (std::size_t r = 0; r < repetitions; ++r) {
    sum += test_loss[r];
    oracle_sum += oracle[r];
  }
  const double reps_d = static_cast<double>(repetitions);
  report.mean_test_loss = sum / reps_d;
  report.mean_empirical_oracle = oracle_sum / reps_d;
  if (repetitions > 1) {
    double ss = 0.0;
    for (double v : test_loss) ss += (v - report.mean_test_loss) * (v - report.mean_test_loss);
    report.stderr_test_loss = std::sqrt(ss / (reps_d - 1.0) / reps_d);
  }
  report.min_risk = task.min_risk;
  report.bound = task.multiplier * task.min_risk +
                 task.complexity(points) / static_cast<double>(points);
  return report;
}

}  // namespace mlsa
