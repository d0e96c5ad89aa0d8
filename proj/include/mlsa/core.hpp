#ifndef MLSA_CORE_HPP
#define MLSA_CORE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlsa/types.hpp"

namespace mlsa {

/// Pointwise losses l(h_j(x_i), y_i), row-major, plus the column totals L_S(h_j).
struct LossMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<double> totals;

  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  double min_total() const;
};

/// Throws if the table and sample disagree on n.
void check_shapes(const PredictionTable& table, const LabeledSample& sample);

/// Column totals are summed in increasing row order.
LossMatrix compute_losses(const PredictionTable& table, const LabeledSample& sample,
                          const LossModel& loss);

/// Unnormalized empirical loss of hypothesis j, optionally skipping one row.
double empirical_loss(const PredictionTable& table, const LabeledSample& sample,
                      const LossModel& loss, std::size_t j,
                      std::optional<std::size_t> exclude = std::nullopt);

/// Indices (ascending) whose loss is within t of the minimum on the
/// possibly-excluded sample. Never empty.
std::vector<std::size_t> level_set(const PredictionTable& table, const LabeledSample& sample,
                                   const LossModel& loss, double t,
                                   std::optional<std::size_t> exclude = std::nullopt);

/// Lower median: the ceil(k/2)-th order statistic.
double median(std::span<const double> values);

/// Mean pointwise loss of the given predictions.
double loo_error(std::span<const double> predictions, const LabeledSample& sample,
                 const LossModel& loss);

/// 1 iff sum over members of (2 h(x_i) - 1) is >= 0.
double majority_vote(std::span<const std::size_t> members, const PredictionTable& table,
                     std::size_t row);

/// Arithmetic mean of h(x_i) over members.
double average_aggregate(std::span<const std::size_t> members, const PredictionTable& table,
                         std::size_t row);

/// Inner aggregation rule. The built-in kinds have a fast path in the
/// kernels; custom rules are evaluated on materialized member lists.
class Aggregator {
 public:
  enum class Kind { majority_vote, average, custom };
  using Fn = std::function<double(std::span<const std::size_t>, const PredictionTable&,
                                  std::size_t)>;

  static Aggregator majority();
  static Aggregator mean();
  static Aggregator custom(std::string name, Fn fn);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  double operator()(std::span<const std::size_t> members, const PredictionTable& table,
                    std::size_t row) const;

 private:
  Aggregator(Kind kind, std::string name, Fn fn)
      : kind_(kind), name_(std::move(name)), fn_(std::move(fn)) {}

  Kind kind_;
  std::string name_;
  Fn fn_;
};

/**
 * Median of level-set aggregation over a finite class.
 *
 * For every row i and level t the leave-one-out level set H_{t,i} is
 * aggregated at x_i, then the lower median over levels is taken. Rows are
 * processed in parallel; every reduction runs in a fixed order, so the
 * output does not depend on the thread count.
 *
 * Rejects a grid whose gap differs from loss.delta_bound.
 */
MlsaOutput run_mlsa(const PredictionTable& table, const LabeledSample& sample,
                    const LossModel& loss, const ToleranceGrid& grid, const Aggregator& agg);

/// Same as run_mlsa without the gap check (used for single-level probes).
MlsaOutput run_mlsa_unchecked(const PredictionTable& table, const LabeledSample& sample,
                              const LossModel& loss, const ToleranceGrid& grid,
                              const Aggregator& agg);

/// Per-level predictions and their lower median for a single row.
struct RowPrediction {
  std::vector<double> per_level;
  double median = 0.0;
};

RowPrediction predict_row(const PredictionTable& table, const LabeledSample& sample,
                          const LossModel& loss, const ToleranceGrid& grid,
                          const Aggregator& agg, std::size_t row);

}  // namespace mlsa

#endif  // MLSA_CORE_HPP
