#include "mlsa/core.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>

namespace mlsa {

double LossMatrix::min_total() const { return *std::min_element(totals.begin(), totals.end()); }

void check_shapes(const PredictionTable& table, const LabeledSample& sample) {
  if (table.rows() != sample.size()) {
    throw std::invalid_argument("sample length " + std::to_string(sample.size()) +
                                " does not match table rows " + std::to_string(table.rows()));
  }
}

LossMatrix compute_losses(const PredictionTable& table, const LabeledSample& sample,
                          const LossModel& loss) {
  check_shapes(table, sample);
  LossMatrix out;
  out.rows = table.rows();
  out.cols = table.cols();
  out.values.resize(out.rows * out.cols);
  out.totals.assign(out.cols, 0.0);
  for (std::size_t i = 0; i < out.rows; ++i) {
    const double y = sample.responses[i];
    for (std::size_t j = 0; j < out.cols; ++j) {
      const double v = loss(table(i, j), y);
      out.values[i * out.cols + j] = v;
      out.totals[j] += v;
    }
  }
  return out;
}

double empirical_loss(const PredictionTable& table, const LabeledSample& sample,
                      const LossModel& loss, std::size_t j, std::optional<std::size_t> exclude) {
  check_shapes(table, sample);
  if (j >= table.cols()) throw std::out_of_range("empirical_loss: hypothesis index out of range");
  if (exclude && *exclude >= table.rows()) {
    throw std::out_of_range("empirical_loss: excluded row out of range");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (exclude && *exclude == i) continue;
    total += loss(table(i, j), sample.responses[i]);
  }
  return total;
}

std::vector<std::size_t> level_set(const PredictionTable& table, const LabeledSample& sample,
                                   const LossModel& loss, double t,
                                   std::optional<std::size_t> exclude) {
  if (!(t >= 0.0)) throw std::invalid_argument("level_set: tolerance must be nonnegative");
  std::vector<double> totals(table.cols());
  for (std::size_t j = 0; j < table.cols(); ++j) {
    totals[j] = empirical_loss(table, sample, loss, j, exclude);
  }
  const double best = *std::min_element(totals.begin(), totals.end());
  std::vector<std::size_t> members;
  for (std::size_t j = 0; j < totals.size(); ++j) {
    if (totals[j] <= best + t) members.push_back(j);
  }
  assert(!members.empty());
  return members;
}

double median(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::vector<double> copy(values.begin(), values.end());
  const auto mid = copy.begin() + static_cast<std::ptrdiff_t>((copy.size() - 1) / 2);
  std::nth_element(copy.begin(), mid, copy.end());
  return *mid;
}

double loo_error(std::span<const double> predictions, const LabeledSample& sample,
                 const LossModel& loss) {
  if (predictions.size() != sample.size()) {
    throw std::invalid_argument("loo_error: prediction count does not match sample size");
  }
  if (predictions.empty()) throw std::invalid_argument("loo_error: empty sample");
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    total += loss(predictions[i], sample.responses[i]);
  }
  return total / static_cast<double>(predictions.size());
}

double majority_vote(std::span<const std::size_t> members, const PredictionTable& table,
                     std::size_t row) {
  if (members.empty()) throw std::invalid_argument("majority_vote: empty hypothesis set");
  double votes = 0.0;
  for (std::size_t j : members) votes += 2.0 * table(row, j) - 1.0;
  return votes >= 0.0 ? 1.0 : 0.0;
}

double average_aggregate(std::span<const std::size_t> members, const PredictionTable& table,
                         std::size_t row) {
  if (members.empty()) throw std::invalid_argument("average_aggregate: empty hypothesis set");
  double sum = 0.0;
  for (std::size_t j : members) sum += table(row, j);
  return sum / static_cast<double>(members.size());
}

Aggregator Aggregator::majority() { return Aggregator(Kind::majority_vote, "majority_vote", {}); }

Aggregator Aggregator::mean() { return Aggregator(Kind::average, "average", {}); }

Aggregator Aggregator::custom(std::string name, Fn fn) {
  if (!fn) throw std::invalid_argument("Aggregator: empty custom rule");
  return Aggregator(Kind::custom, std::move(name), std::move(fn));
}

double Aggregator::operator()(std::span<const std::size_t> members, const PredictionTable& table,
                              std::size_t row) const {
  switch (kind_) {
    case Kind::majority_vote:
      return majority_vote(members, table, row);
    case Kind::average:
      return average_aggregate(members, table, row);
    case Kind::custom:
      if (members.empty()) throw std::invalid_argument("Aggregator: empty hypothesis set");
      return fn_(members, table, row);
  }
  return 0.0;
}

namespace {

// First level index k with value <= min_loo + t_k, or levels.size() if none.
// The thresholds are nondecreasing, so a lower_bound finds it.
std::size_t first_level(const std::vector<double>& thresholds, double value) {
  return static_cast<std::size_t>(
      std::lower_bound(thresholds.begin(), thresholds.end(), value) - thresholds.begin());
}

// Fills `out` (size K) with the level-k aggregate at `row`. Work buffers are
// passed in so each thread reuses its own.
void aggregate_row(const PredictionTable& table, const LossMatrix& losses,
                   const ToleranceGrid& grid, const Aggregator& agg, std::size_t row,
                   std::vector<double>& thresholds, std::vector<std::size_t>& bucket,
                   std::vector<std::size_t>& counts, std::vector<double>& sums,
                   std::span<double> out) {
  const std::size_t m = table.cols();
  const std::size_t levels = grid.size();

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) best = std::min(best, losses.totals[j] - losses(row, j));
  for (std::size_t k = 0; k < levels; ++k) thresholds[k] = best + grid.levels()[k];
  for (std::size_t j = 0; j < m; ++j) {
    bucket[j] = first_level(thresholds, losses.totals[j] - losses(row, j));
  }

  if (agg.kind() == Aggregator::Kind::custom) {
    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < levels; ++k) {
      members.clear();
      for (std::size_t j = 0; j < m; ++j) {
        if (bucket[j] <= k) members.push_back(j);
      }
      out[k] = agg(members, table, row);
    }
    return;
  }

  std::fill(counts.begin(), counts.end(), 0);
  std::fill(sums.begin(), sums.end(), 0.0);
  const auto values = table.row(row);
  for (std::size_t j = 0; j < m; ++j) {
    if (bucket[j] >= levels) continue;
    ++counts[bucket[j]];
    sums[bucket[j]] += values[j];
  }
  std::size_t count = 0;
  double sum = 0.0;
  for (std::size_t k = 0; k < levels; ++k) {
    count += counts[k];
    sum += sums[k];
    assert(count > 0);
    if (agg.kind() == Aggregator::Kind::majority_vote) {
      out[k] = 2.0 * sum - static_cast<double>(count) >= 0.0 ? 1.0 : 0.0;
    } else {
      out[k] = sum / static_cast<double>(count);
    }
  }
}

}  // namespace

MlsaOutput run_mlsa_unchecked(const PredictionTable& table, const LabeledSample& sample,
                              const LossModel& loss, const ToleranceGrid& grid,
                              const Aggregator& agg) {
  const LossMatrix losses = compute_losses(table, sample, loss);
  const std::size_t n = table.rows();
  const std::size_t levels = grid.size();

  MlsaOutput out;
  out.grid = grid;
  out.n = n;
  out.per_level.assign(levels * n, 0.0);
  out.medians.assign(n, 0.0);

  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel
  {
    std::vector<double> thresholds(levels);
    std::vector<std::size_t> bucket(table.cols());
    std::vector<std::size_t> counts(levels);
    std::vector<double> sums(levels);
    std::vector<double> column(levels);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < rows; ++r) {
      const auto i = static_cast<std::size_t>(r);
      aggregate_row(table, losses, grid, agg, i, thresholds, bucket, counts, sums, column);
      for (std::size_t k = 0; k < levels; ++k) out.per_level[k * n + i] = column[k];
      out.medians[i] = median(column);
    }
  }
  out.loo_error = loo_error(out.medians, sample, loss);
  return out;
}

MlsaOutput run_mlsa(const PredictionTable& table, const LabeledSample& sample,
                    const LossModel& loss, const ToleranceGrid& grid, const Aggregator& agg) {
  if (grid.gap() != loss.delta_bound) {
    throw std::invalid_argument("run_mlsa: grid gap " + std::to_string(grid.gap()) +
                                " differs from loss delta bound " +
                                std::to_string(loss.delta_bound));
  }
  return run_mlsa_unchecked(table, sample, loss, grid, agg);
}

RowPrediction predict_row(const PredictionTable& table, const LabeledSample& sample,
                          const LossModel& loss, const ToleranceGrid& grid,
                          const Aggregator& agg, std::size_t row) {
  if (row >= table.rows()) throw std::out_of_range("predict_row: row out of range");
  const LossMatrix losses = compute_losses(table, sample, loss);
  const std::size_t levels = grid.size();
  std::vector<double> thresholds(levels);
  std::vector<std::size_t> bucket(table.cols());
  std::vector<std::size_t> counts(levels);
  std::vector<double> sums(levels);
  RowPrediction out;
  out.per_level.assign(levels, 0.0);
  aggregate_row(table, losses, grid, agg, row, thresholds, bucket, counts, sums, out.per_level);
  out.median = median(out.per_level);
  return out;
}

}  // namespace mlsa
