#ifndef MLSA_TYPES_HPP
#define MLSA_TYPES_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlsa {

/// Tolerance for every exact-inequality assertion; covers floating point only.
inline constexpr double kNumericTolerance = 1e-9;

/// Raised when a Monte-Carlo level estimate accepts too few samples.
class InsufficientAcceptance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the measured good-level fraction is at most one half.
class GridMajorityFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by iterative solvers that hit their iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * A finite hypothesis class restricted to the n sample covariates.
 *
 * Entry (i, j) holds h_j(x_i). Storage is row-major so that aggregating a
 * set of hypotheses at a fixed row touches contiguous memory. Columns are
 * hypotheses under counting measure: identical columns collapse unless the
 * caller asks to keep multiplicity.
 */
class PredictionTable {
 public:
  enum class Duplicates { collapse, keep };

  PredictionTable() = default;
  PredictionTable(std::size_t rows, std::size_t cols, std::vector<double> row_major,
                  Duplicates duplicates = Duplicates::collapse);

  /// Builds a table from hypothesis columns, each of length `rows`.
  static PredictionTable from_columns(const std::vector<std::vector<double>>& columns,
                                      Duplicates duplicates = Duplicates::collapse);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::vector<double> column(std::size_t j) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct LabeledSample {
  std::vector<double> responses;

  std::size_t size() const { return responses.size(); }
};

enum class Monotonicity {
  in_distance,
  increasing_in_prediction,
  decreasing_in_prediction,
};

/// What the gap constant of a loss bounds.
enum class GapSource {
  /// 0 <= loss(y', y) <= delta for every producible pair.
  pointwise_bound,
  /// |loss(p, x) - loss(q, x)| <= delta across hypotheses at every row
  /// (bounded log-likelihood ratio for log loss).
  loss_spread,
};

struct LossModel {
  std::string name;
  std::function<double(double prediction, double response)> pointwise;
  double delta_bound = 0.0;
  Monotonicity monotonicity = Monotonicity::in_distance;
  GapSource gap_source = GapSource::pointwise_bound;

  double operator()(double prediction, double response) const {
    return pointwise(prediction, response);
  }
};

/// Ordered finite set of tolerance levels with the sandwich gap.
class ToleranceGrid {
 public:
  ToleranceGrid() = default;
  ToleranceGrid(std::vector<double> levels, double gap);

  /// Levels {gap, 2 gap, ..., count * gap}.
  static ToleranceGrid multiples(double gap, std::size_t count);

  const std::vector<double>& levels() const { return levels_; }
  std::size_t size() const { return levels_.size(); }
  double gap() const { return gap_; }
  double t_max() const { return levels_.back(); }

  bool operator==(const ToleranceGrid& other) const = default;

 private:
  std::vector<double> levels_;
  double gap_ = 0.0;
};

struct MlsaOutput {
  ToleranceGrid grid;
  std::size_t n = 0;
  /// |T| x n, row-major: per_level[k * n + i] is the level-k prediction at row i.
  std::vector<double> per_level;
  std::vector<double> medians;
  double loo_error = 0.0;

  double at(std::size_t level, std::size_t i) const { return per_level[level * n + i]; }
};

}  // namespace mlsa

#endif  // MLSA_TYPES_HPP
