#include "mlsa/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>

namespace mlsa {

namespace {

std::uint64_t hash_column(const std::vector<double>& values, std::size_t rows, std::size_t cols,
                          std::size_t j) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < rows; ++i) {
    double v = values[i * cols + j];
    if (v == 0.0) v = 0.0;  // fold -0.0
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool same_column(const std::vector<double>& values, std::size_t rows, std::size_t cols,
                 std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < rows; ++i) {
    if (values[i * cols + a] != values[i * cols + b]) return false;
  }
  return true;
}

}  // namespace

PredictionTable::PredictionTable(std::size_t rows, std::size_t cols,
                                 std::vector<double> row_major, Duplicates duplicates)
    : rows_(rows), cols_(cols), values_(std::move(row_major)) {
  if (rows_ == 0 || cols_ == 0) {
    throw std::invalid_argument("PredictionTable: need at least one row and one column");
  }
  if (values_.size() != rows_ * cols_) {
    throw std::invalid_argument("PredictionTable: value count does not match rows * cols");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("PredictionTable: non-finite entry");
  }
  if (duplicates == Duplicates::keep) return;

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
  std::vector<std::size_t> kept;
  kept.reserve(cols_);
  for (std::size_t j = 0; j < cols_; ++j) {
    auto& bucket = seen[hash_column(values_, rows_, cols_, j)];
    const bool dup = std::any_of(bucket.begin(), bucket.end(), [&](std::size_t k) {
      return same_column(values_, rows_, cols_, k, j);
    });
    if (dup) continue;
    bucket.push_back(j);
    kept.push_back(j);
  }
  if (kept.size() == cols_) return;

  std::vector<double> compact(rows_ * kept.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < kept.size(); ++k) {
      compact[i * kept.size() + k] = values_[i * cols_ + kept[k]];
    }
  }
  cols_ = kept.size();
  values_ = std::move(compact);
}

PredictionTable PredictionTable::from_columns(const std::vector<std::vector<double>>& columns,
                                              Duplicates duplicates) {
  if (columns.empty()) throw std::invalid_argument("PredictionTable: no columns");
  const std::size_t rows = columns.front().size();
  std::vector<double> values(rows * columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) {
      throw std::invalid_argument("PredictionTable: ragged columns");
    }
    for (std::size_t i = 0; i < rows; ++i) values[i * columns.size() + j] = columns[j][i];
  }
  return PredictionTable(rows, columns.size(), std::move(values), duplicates);
}

std::vector<double> PredictionTable::column(std::size_t j) const {
  if (j >= cols_) throw std::out_of_range("PredictionTable: column index out of range");
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

ToleranceGrid::ToleranceGrid(std::vector<double> levels, double gap)
    : levels_(std::move(levels)), gap_(gap) {
  if (levels_.empty()) throw std::invalid_argument("ToleranceGrid: no levels");
  if (!(gap_ > 0.0) || !std::isfinite(gap_)) {
    throw std::invalid_argument("ToleranceGrid: gap must be positive and finite");
  }
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (!std::isfinite(levels_[k]) || levels_[k] < 0.0) {
      throw std::invalid_argument("ToleranceGrid: levels must be finite and nonnegative");
    }
    if (k > 0 && !(levels_[k] > levels_[k - 1])) {
      throw std::invalid_argument("ToleranceGrid: levels must be strictly increasing");
    }
  }
}

ToleranceGrid ToleranceGrid::multiples(double gap, std::size_t count) {
  std::vector<double> levels(count);
  for (std::size_t k = 0; k < count; ++k) levels[k] = gap * static_cast<double>(k + 1);
  return ToleranceGrid(std::move(levels), gap);
}

}  // namespace mlsa
