#ifndef MLSA_AUDIT_HPP
#define MLSA_AUDIT_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mlsa/core.hpp"
#include "mlsa/random.hpp"
#include "mlsa/types.hpp"

namespace mlsa {

struct LevelGrowth {
  double t = 0.0;
  std::size_t size_minus = 0;  // mu(H_{max(t - delta, 0)})
  std::size_t size_plus = 0;   // mu(H_{t + delta})
  double ratio = 0.0;
  std::size_t sandwich_violations = 0;  // rows i whose H_{t,i} is not sandwiched
  bool sandwich_ok = false;
  bool good = false;
};

struct GrowthAudit {
  std::vector<LevelGrowth> per_level;
  double good_fraction = 0.0;
  double c_g = 0.0;
  double delta = 0.0;

  std::size_t sandwich_violations() const;
  std::size_t good_levels() const;
};

struct CertificateComponents {
  double erm_loss = 0.0;
  double t_max = 0.0;
  double delta = 0.0;
  double c_g = 0.0;
  double rho = 0.0;
  double multiplier = 0.0;
};

struct BoundCertificate {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  CertificateComponents components;
  double tolerance = kNumericTolerance;

  bool passed() const { return slack >= -tolerance; }
};

BoundCertificate make_certificate(std::string name, double lhs, double rhs,
                                  CertificateComponents components,
                                  double tolerance = kNumericTolerance);

struct AggViolation {
  std::size_t row = 0;
  std::vector<std::size_t> members;
  double aggregated_loss = 0.0;
  double mean_loss = 0.0;
};

struct AggCheckReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::optional<AggViolation> first_violation;

  bool passed() const { return violations == 0; }
};

/// Samples random nonempty subsets G and rows i and checks
/// l(agg(G, i), y_i) <= mean over G of l(h(x_i), y_i).
AggCheckReport check_agg_assumption(const Aggregator& agg, const LossModel& loss,
                                    const PredictionTable& table, const LabeledSample& sample,
                                    std::size_t trials, std::uint64_t seed);

struct LossBoundAudit {
  /// Max pointwise loss, or max per-row spread for GapSource::loss_spread.
  double observed = 0.0;
  std::size_t violations = 0;
  bool passed() const { return violations == 0; }
};

/// Checks that the declared delta bounds the table's losses as the gap source requires.
LossBoundAudit audit_loss_bound(const PredictionTable& table, const LabeledSample& sample,
                                const LossModel& loss);

/**
 * Counting-measure growth audit over a grid. For each level the sizes of
 * H_{t-delta} (t - delta clamped at 0) and H_{t+delta} are recorded together
 * with the sandwich H_{t-delta} ⊆ H_{t,i} ⊆ H_{t+delta} for every row i.
 * Uses grid.gap() as delta.
 */
GrowthAudit grid_growth_audit(const PredictionTable& table, const LabeledSample& sample,
                              const LossModel& loss, const ToleranceGrid& grid, double c_g);

/// Single-level guarantee LOO({y_{t,i}}) <= (c_g / n)(min L_S + t + delta).
/// Throws std::invalid_argument when t is not a good level.
BoundCertificate verify_single_level(const PredictionTable& table, const LabeledSample& sample,
                                     const LossModel& loss, const Aggregator& agg, double t,
                                     double delta, double c_g);

struct MainTheoremCertificates {
  BoundCertificate measured;  // rho = audit.good_fraction
  BoundCertificate nominal;   // nominal rho of the task
};

/// Median-over-grid guarantee 2 c_g / ((2 rho - 1) n) (min L_S + t_max + delta).
/// Throws GridMajorityFailure when audit.good_fraction <= 1/2.
MainTheoremCertificates verify_main_theorem(const MlsaOutput& output, const GrowthAudit& audit,
                                            double erm, const ToleranceGrid& grid,
                                            double nominal_rho = 0.75);

/// One synthetic draw of `points` labeled pairs; the last row is the held-out point.
struct GeneralizationDraw {
  PredictionTable table;
  LabeledSample sample;
};

struct GeneralizationTask {
  std::function<GeneralizationDraw(Rng&, std::size_t points)> draw;
  std::function<ToleranceGrid(std::size_t points, std::size_t class_size)> grid;
  LossModel loss;
  Aggregator agg = Aggregator::majority();
  double min_risk = 0.0;    // min_h E[l(h(X), Y)] under the generator
  double multiplier = 1.0;  // C of the oracle inequality
  std::function<double(std::size_t points)> complexity;  // Comp for a sample of that size
};

struct GeneralizationReport {
  std::size_t n = 0;
  std::size_t repetitions = 0;
  double mean_test_loss = 0.0;
  double stderr_test_loss = 0.0;
  double min_risk = 0.0;
  double mean_empirical_oracle = 0.0;  // mean of min_h L_S(h) / (n + 1)
  double bound = 0.0;                  // C * min_risk + Comp / (n + 1)

  bool holds(double stderr_multiple) const {
    return mean_test_loss <= bound + stderr_multiple * stderr_test_loss;
  }
};

/// Monte-Carlo check of the transductive-to-inductive conversion: draw n + 1
/// points, run MLSA transductively and score the prediction at the last row.
GeneralizationReport simulate_generalization(const GeneralizationTask& task, std::size_t n,
                                             std::size_t repetitions, std::uint64_t seed);

}  // namespace mlsa

#endif  // MLSA_AUDIT_HPP
