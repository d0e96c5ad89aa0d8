#include "mlsa/reference.hpp"

#include <algorithm>

namespace mlsa::reference {

namespace {

bool includes(const std::vector<std::size_t>& outer, const std::vector<std::size_t>& inner) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

}  // namespace

MlsaOutput run_mlsa(const PredictionTable& table, const LabeledSample& sample,
                    const LossModel& loss, const ToleranceGrid& grid, const Aggregator& agg) {
  check_shapes(table, sample);
  const std::size_t n = table.rows();
  MlsaOutput out;
  out.grid = grid;
  out.n = n;
  out.per_level.assign(grid.size() * n, 0.0);
  out.medians.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> column(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto members = level_set(table, sample, loss, grid.levels()[k], i);
      column[k] = agg(members, table, i);
      out.per_level[k * n + i] = column[k];
    }
    out.medians[i] = median(column);
  }
  out.loo_error = loo_error(out.medians, sample, loss);
  return out;
}

GrowthAudit grid_growth_audit(const PredictionTable& table, const LabeledSample& sample,
                              const LossModel& loss, const ToleranceGrid& grid, double c_g) {
  const double delta = grid.gap();
  GrowthAudit audit;
  audit.c_g = c_g;
  audit.delta = delta;
  std::size_t good = 0;
  for (double t : grid.levels()) {
    LevelGrowth rec;
    rec.t = t;
    const auto minus = level_set(table, sample, loss, std::max(t - delta, 0.0));
    const auto plus = level_set(table, sample, loss, t + delta);
    rec.size_minus = minus.size();
    rec.size_plus = plus.size();
    rec.ratio = static_cast<double>(plus.size()) / static_cast<double>(minus.size());
    for (std::size_t i = 0; i < table.rows(); ++i) {
      const auto loo = level_set(table, sample, loss, t, i);
      if (!includes(loo, minus) || !includes(plus, loo)) ++rec.sandwich_violations;
    }
    rec.sandwich_ok = rec.sandwich_violations == 0;
    rec.good = rec.sandwich_ok && rec.ratio <= c_g;
    good += rec.good ? 1 : 0;
    audit.per_level.push_back(rec);
  }
  audit.good_fraction = static_cast<double>(good) / static_cast<double>(grid.size());
  return audit;
}

}  // namespace mlsa::reference
