#include "mlsa/classification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace mlsa::classification {

LossModel zero_one_loss() {
  LossModel loss;
  loss.name = "zero_one";
  loss.pointwise = [](double prediction, double response) {
    return prediction != response ? 1.0 : 0.0;
  };
  loss.delta_bound = 1.0;
  loss.monotonicity = Monotonicity::in_distance;
  loss.gap_source = GapSource::pointwise_bound;
  return loss;
}

ToleranceGrid classification_grid(std::size_t d, std::size_t n) {
  if (d < 1) throw std::invalid_argument("classification_grid: d must be >= 1");
  if (n < 3) throw std::invalid_argument("classification_grid: n must be >= 3");
  const double bound = 24.0 * static_cast<double>(d) * std::log(static_cast<double>(n));
  return ToleranceGrid::multiples(1.0, static_cast<std::size_t>(std::ceil(bound)));
}

ClassDescriptor ClassDescriptor::parse(const std::string& text) {
  ClassDescriptor out;
  if (text == "thresholds") {
    out.family = ClassFamily::thresholds;
  } else if (text == "intervals") {
    out.family = ClassFamily::intervals;
  } else if (text == "rectangles") {
    out.family = ClassFamily::axis_rectangles;
  } else if (text.rfind("unions:", 0) == 0) {
    out.family = ClassFamily::unions_of_intervals;
    const std::string count = text.substr(7);
    std::size_t used = 0;
    unsigned long k = 0;
    try {
      k = std::stoul(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != count.size() || k == 0) {
      throw std::invalid_argument("class descriptor: bad interval count in '" + text + "'");
    }
    out.intervals = k;
  } else {
    throw std::invalid_argument("unknown class descriptor '" + text + "'");
  }
  return out;
}

ClassDescriptor ClassDescriptor::explicit_class(PredictionTable table, std::size_t vc_dimension) {
  ClassDescriptor out;
  out.family = ClassFamily::explicit_table;
  out.table = std::move(table);
  out.declared_vc_dimension = vc_dimension;
  return out;
}

std::string ClassDescriptor::name() const {
  switch (family) {
    case ClassFamily::thresholds:
      return "thresholds";
    case ClassFamily::intervals:
      return "intervals";
    case ClassFamily::unions_of_intervals:
      return "unions:" + std::to_string(intervals);
    case ClassFamily::axis_rectangles:
      return "rectangles";
    case ClassFamily::explicit_table:
      return "explicit";
  }
  return "unknown";
}

std::size_t ClassDescriptor::vc_dimension() const {
  switch (family) {
    case ClassFamily::thresholds:
      return 1;
    case ClassFamily::intervals:
      return 2;
    case ClassFamily::unions_of_intervals:
      return 2 * intervals;
    case ClassFamily::axis_rectangles:
      return 4;
    case ClassFamily::explicit_table:
      return declared_vc_dimension;
  }
  return 0;
}

std::size_t ClassDescriptor::covariate_dimension() const {
  return family == ClassFamily::axis_rectangles ? 2 : 1;
}

std::size_t sauer_bound(std::size_t n, std::size_t d) {
  constexpr auto cap = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  std::size_t binom = 1;  // C(n, k)
  for (std::size_t k = 0; k <= d && k <= n; ++k) {
    if (k > 0) {
      // C(n, k) = C(n, k-1) * (n - k + 1) / k, exact in integers
      const std::size_t factor = n - k + 1;
      if (binom > cap / factor) return cap;
      binom = binom * factor / k;
    }
    if (total > cap - binom) return cap;
    total += binom;
  }
  return total;
}

namespace {

// Sorted order of distinct one-dimensional covariates.
std::vector<std::size_t> sorted_order(const Covariates& covariates) {
  const std::size_t n = covariates.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return covariates.values[a] < covariates.values[b];
  });
  for (std::size_t k = 1; k < n; ++k) {
    if (covariates.values[order[k]] == covariates.values[order[k - 1]]) {
      throw std::invalid_argument("restrict_class: repeated covariate value " +
                                  std::to_string(covariates.values[order[k]]));
    }
  }
  return order;
}

void check_size(std::size_t n, std::size_t labelings) {
  if (labelings > kMaxTableEntries / n) {
    throw std::invalid_argument("restrict_class: restriction has " + std::to_string(labelings) +
                                " labelings, too many to enumerate");
  }
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t out = 1;
  for (std::size_t j = 1; j <= k; ++j) out = out * (n - k + j) / j;
  return out;
}

// Labelings of sorted positions with at most `runs` maximal runs of ones.
// A labeling with j runs is a choice of 2j cut points in {0, ..., n}.
PredictionTable enumerate_runs(const std::vector<std::size_t>& order, std::size_t runs) {
  const std::size_t n = order.size();
  std::size_t count = 0;
  for (std::size_t j = 0; j <= runs; ++j) count += binomial(n + 1, 2 * j);
  check_size(n, count);

  std::vector<double> values(n * count, 0.0);
  std::size_t column = 0;
  std::vector<std::size_t> cuts;
  auto emit = [&]() {
    for (std::size_t r = 0; r + 1 < cuts.size(); r += 2) {
      for (std::size_t p = cuts[r]; p < cuts[r + 1]; ++p) values[order[p] * count + column] = 1.0;
    }
    ++column;
  };
  // depth-first over increasing cut sequences of even length
  auto recurse = [&](auto&& self, std::size_t next) -> void {
    if (cuts.size() % 2 == 0) emit();
    if (cuts.size() == 2 * runs) return;
    for (std::size_t c = next; c <= n; ++c) {
      cuts.push_back(c);
      self(self, c + 1);
      cuts.pop_back();
    }
  };
  recurse(recurse, 0);
  return PredictionTable(n, count, std::move(values), PredictionTable::Duplicates::keep);
}

PredictionTable enumerate_thresholds(const std::vector<std::size_t>& order) {
  const std::size_t n = order.size();
  const std::size_t count = n + 1;
  check_size(n, count);
  std::vector<double> values(n * count, 0.0);
  for (std::size_t c = 0; c <= n; ++c) {
    for (std::size_t p = c; p < n; ++p) values[order[p] * count + c] = 1.0;
  }
  return PredictionTable(n, count, std::move(values), PredictionTable::Duplicates::keep);
}

PredictionTable enumerate_rectangles(const Covariates& covariates) {
  const std::size_t n = covariates.size();
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = covariates.at(i, 0);
    ys[i] = covariates.at(i, 1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  std::unordered_set<std::string> seen;
  std::vector<std::string> labelings;
  std::string empty(n, '\0');
  seen.insert(empty);
  labelings.push_back(empty);
  std::string current(n, '\0');
  for (std::size_t a = 0; a < xs.size(); ++a) {
    for (std::size_t b = a; b < xs.size(); ++b) {
      for (std::size_t c = 0; c < ys.size(); ++c) {
        for (std::size_t d = c; d < ys.size(); ++d) {
          for (std::size_t i = 0; i < n; ++i) {
            const double x = covariates.at(i, 0);
            const double y = covariates.at(i, 1);
            current[i] = (x >= xs[a] && x <= xs[b] && y >= ys[c] && y <= ys[d]) ? 1 : 0;
          }
          if (seen.insert(current).second) {
            labelings.push_back(current);
            check_size(n, labelings.size());
          }
        }
      }
    }
  }
  const std::size_t count = labelings.size();
  std::vector<double> values(n * count);
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t i = 0; i < n; ++i) values[i * count + j] = labelings[j][i];
  }
  return PredictionTable(n, count, std::move(values), PredictionTable::Duplicates::keep);
}

}  // namespace

PredictionTable restrict_class(const ClassDescriptor& descriptor, const Covariates& covariates) {
  if (descriptor.family == ClassFamily::explicit_table) {
    if (!descriptor.table) throw std::invalid_argument("restrict_class: explicit class without table");
    if (covariates.size() != 0 && covariates.size() != descriptor.table->rows()) {
      throw std::invalid_argument("restrict_class: explicit table has " + std::to_string(descriptor.table->rows()) +
                                  " rows but there are " + std::to_string(covariates.size()) + " covariates");
    }
    return *descriptor.table;
  }
  if (covariates.size() == 0) throw std::invalid_argument("restrict_class: no covariates");
  if (covariates.dim != descriptor.covariate_dimension()) {
    throw std::invalid_argument("restrict_class: " + descriptor.name() + " expects covariates of dimension " +
                                std::to_string(descriptor.covariate_dimension()));
  }
  switch (descriptor.family) {
    case ClassFamily::thresholds:
      return enumerate_thresholds(sorted_order(covariates));
    case ClassFamily::intervals:
      return enumerate_runs(sorted_order(covariates), 1);
    case ClassFamily::unions_of_intervals:
      return enumerate_runs(sorted_order(covariates), descriptor.intervals);
    case ClassFamily::axis_rectangles:
      return enumerate_rectangles(covariates);
    case ClassFamily::explicit_table:
      break;
  }
  throw std::invalid_argument("restrict_class: unknown descriptor");
}

BoundCertificate verify_cor_loo01(const MlsaOutput& output, const PredictionTable& table,
                                  const LabeledSample& sample, std::size_t d) {
  const std::size_t n = table.rows();
  if (!(output.grid == classification_grid(d, n))) {
    throw std::invalid_argument("verify_cor_loo01: output was not produced on the classification grid");
  }
  const double erm = compute_losses(table, sample, zero_one_loss()).min_total();
  const double nd = static_cast<double>(n);
  CertificateComponents parts;
  parts.erm_loss = erm;
  parts.t_max = output.grid.t_max();
  parts.delta = 1.0;
  parts.c_g = 2.0;
  parts.rho = 0.75;
  parts.multiplier = 8.0 / nd;
  const double rhs = 8.0 * erm / nd + 200.0 * static_cast<double>(d) * std::log(nd) / nd;
  return make_certificate("classification_oracle_inequality", output.loo_error, rhs, parts);
}

ClassificationRun run_classification(const PredictionTable& table, const LabeledSample& sample,
                                     std::size_t d, double c_g) {
  const LossModel loss = zero_one_loss();
  const ToleranceGrid grid = classification_grid(d, table.rows());
  ClassificationRun run;
  run.output = run_mlsa(table, sample, loss, grid, Aggregator::majority());
  run.audit = grid_growth_audit(table, sample, loss, grid, c_g);
  run.erm = compute_losses(table, sample, loss).min_total();
  run.main = verify_main_theorem(run.output, run.audit, run.erm, grid);
  run.corollary = verify_cor_loo01(run.output, table, sample, d);
  return run;
}

}  // namespace mlsa::classification
