#include "mlsa/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlsa::density {

namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double compute_log_ratio_bound(const std::vector<double>& probs, std::size_t count,
                               std::size_t support) {
  double bound = 0.0;
  for (std::size_t x = 0; x < support; ++x) {
    double lo = kInf;
    double hi = -kInf;
    for (std::size_t p = 0; p < count; ++p) {
      const double v = probs[p * support + x];
      if (v <= 0.0) return kInf;
      lo = std::min(lo, std::log(v));
      hi = std::max(hi, std::log(v));
    }
    bound = std::max(bound, hi - lo);
  }
  return bound;
}

ToleranceGrid grid_for(double M, std::size_t class_size) {
  if (is_degenerate(class_size, M)) return ToleranceGrid::multiples(1.0, 1);
  return density_grid(M, class_size);
}

std::size_t argmin(const std::vector<double>& values) {
  return static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
}

}  // namespace

DensityClass DensityClass::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("density class: no densities");
  DensityClass cls;
  cls.count_ = rows.size();
  cls.support_ = rows.front().size();
  if (cls.support_ == 0) throw std::invalid_argument("density class: empty support");
  cls.probs_.reserve(cls.count_ * cls.support_);
  for (std::size_t p = 0; p < rows.size(); ++p) {
    if (rows[p].size() != cls.support_) {
      throw std::invalid_argument("density class: row " + std::to_string(p) + " has wrong length");
    }
    double sum = 0.0;
    for (double v : rows[p]) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("density class: row " + std::to_string(p) +
                                    " has a negative or non-finite entry");
      }
      sum += v;
      cls.probs_.push_back(v);
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw std::invalid_argument("density class: row " + std::to_string(p) + " sums to " +
                                  std::to_string(sum));
    }
  }
  cls.log_ratio_bound_ = compute_log_ratio_bound(cls.probs_, cls.count_, cls.support_);
  return cls;
}

std::vector<double> DensityClass::row(std::size_t p) const {
  return {probs_.begin() + static_cast<std::ptrdiff_t>(p * support_),
          probs_.begin() + static_cast<std::ptrdiff_t>((p + 1) * support_)};
}

std::vector<std::vector<double>> DensityClass::rows() const {
  std::vector<std::vector<double>> out;
  out.reserve(count_);
  for (std::size_t p = 0; p < count_; ++p) out.push_back(row(p));
  return out;
}

double exhaustive_log_ratio(const DensityClass& cls) {
  double bound = 0.0;
  for (std::size_t p = 0; p < cls.size(); ++p) {
    for (std::size_t q = 0; q < cls.size(); ++q) {
      for (std::size_t x = 0; x < cls.support(); ++x) {
        const double a = cls(p, x);
        const double b = cls(q, x);
        if (a == 0.0 && b == 0.0) continue;
        if (a == 0.0 || b == 0.0) return kInf;
        bound = std::max(bound, std::abs(std::log(a / b)));
      }
    }
  }
  return bound;
}

LossModel log_loss(double M) {
  LossModel loss;
  loss.name = "log";
  loss.pointwise = [](double prediction, double) { return -std::log(prediction); };
  loss.delta_bound = M;
  loss.monotonicity = Monotonicity::decreasing_in_prediction;
  loss.gap_source = GapSource::loss_spread;
  return loss;
}

DensityInstance log_loss_table(const DensityClass& cls, const std::vector<std::size_t>& observations) {
  if (observations.empty()) throw std::invalid_argument("log_loss_table: no observations");
  if (!std::isfinite(cls.log_ratio_bound())) {
    throw std::invalid_argument(
        "log_loss_table: class has zero probabilities (infinite log-ratio bound); smooth it first");
  }
  const std::size_t n = observations.size();
  const std::size_t m = cls.size();
  std::vector<double> values(n * m);
  DensityInstance out;
  out.sample.responses.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t x = observations[i];
    if (x >= cls.support()) {
      throw std::invalid_argument("log_loss_table: observation " + std::to_string(x) +
                                  " outside X of size " + std::to_string(cls.support()));
    }
    for (std::size_t j = 0; j < m; ++j) values[i * m + j] = cls(j, x);
    out.sample.responses[i] = static_cast<double>(x);
  }
  out.table = PredictionTable(n, m, std::move(values), PredictionTable::Duplicates::keep);
  out.loss = log_loss(cls.log_ratio_bound());
  return out;
}

ToleranceGrid density_grid(double M, std::size_t class_size) {
  if (!(M > 0.0) || !std::isfinite(M)) {
    throw std::invalid_argument("density_grid: M must be positive and finite");
  }
  if (class_size < 2) throw std::invalid_argument("density_grid: degenerate class of size 1");
  const double count = std::ceil(12.0 * std::log(static_cast<double>(class_size)));
  return ToleranceGrid::multiples(M, static_cast<std::size_t>(count));
}

bool is_degenerate(std::size_t class_size, double M) { return class_size < 2 || M == 0.0; }

DensityClass smooth_class(const DensityClass& cls, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("smooth_class: epsilon must lie in (0, 1/2)");
  }
  const std::size_t count = cls.size();
  const std::size_t support = cls.support();
  std::vector<double> nu(support, 1.0 / static_cast<double>(support));
  if (support >= count) {
    std::fill(nu.begin(), nu.end(), 0.0);
    for (std::size_t p = 0; p < count; ++p) {
      for (std::size_t x = 0; x < support; ++x) nu[x] += cls(p, x);
    }
    for (double& v : nu) v /= static_cast<double>(count);
  }
  std::vector<std::vector<double>> rows(count, std::vector<double>(support));
  for (std::size_t p = 0; p < count; ++p) {
    for (std::size_t x = 0; x < support; ++x) {
      rows[p][x] = (1.0 - epsilon) * cls(p, x) + epsilon * nu[x];
    }
  }
  return DensityClass::from_rows(rows);
}

double smoothed_bound(std::size_t class_size, std::size_t support, double epsilon) {
  return std::log(1.0 / epsilon) + std::min(std::log(static_cast<double>(class_size)),
                                            std::log(static_cast<double>(support)));
}

std::vector<double> class_losses(const DensityClass& cls, const std::vector<std::size_t>& observations) {
  std::vector<double> out(cls.size(), 0.0);
  for (std::size_t x : observations) {
    if (x >= cls.support()) throw std::invalid_argument("class_losses: observation outside X");
    for (std::size_t p = 0; p < cls.size(); ++p) out[p] -= std::log(cls(p, x));
  }
  return out;
}

BoundCertificate verify_cor_density(const MlsaOutput& output, const DensityClass& cls,
                                    const std::vector<std::size_t>& observations) {
  const double M = cls.log_ratio_bound();
  if (!std::isfinite(M)) {
    throw std::invalid_argument(
        "verify_cor_density: infinite log-ratio bound; use smooth_class and the smoothed pipeline");
  }
  if (!(output.grid == grid_for(M, cls.size()))) {
    throw std::invalid_argument("verify_cor_density: output was not produced on the density grid");
  }
  const auto losses = class_losses(cls, observations);
  const double erm = *std::min_element(losses.begin(), losses.end());
  const double n = static_cast<double>(observations.size());
  CertificateComponents parts;
  parts.erm_loss = erm;
  parts.t_max = output.grid.t_max();
  parts.delta = M;
  parts.c_g = 2.0;
  parts.rho = 0.75;
  parts.multiplier = 8.0 / n;
  const double rhs = 8.0 * erm / n + 104.0 * M * std::log(static_cast<double>(cls.size())) / n;
  return make_certificate("density_oracle_inequality", output.loo_error, rhs, parts);
}

DensityRun run_density(const DensityClass& cls, const std::vector<std::size_t>& observations,
                       double c_g) {
  const DensityInstance inst = log_loss_table(cls, observations);
  const double M = cls.log_ratio_bound();
  const ToleranceGrid grid = grid_for(M, cls.size());
  DensityRun run;
  run.erm = compute_losses(inst.table, inst.sample, inst.loss).min_total();
  if (is_degenerate(cls.size(), M)) {
    run.output = run_mlsa_unchecked(inst.table, inst.sample, inst.loss, grid, Aggregator::mean());
  } else {
    run.output = run_mlsa(inst.table, inst.sample, inst.loss, grid, Aggregator::mean());
    run.audit = grid_growth_audit(inst.table, inst.sample, inst.loss, grid, c_g);
    run.main = verify_main_theorem(run.output, *run.audit, run.erm, grid);
  }
  run.corollary = verify_cor_density(run.output, cls, observations);
  return run;
}

SmoothedRun run_smoothed(const DensityClass& cls, const std::vector<std::size_t>& observations,
                         double epsilon, double c_g) {
  SmoothedRun run;
  run.epsilon = epsilon;
  run.smoothed = smooth_class(cls, epsilon);
  const std::size_t count = cls.size();
  run.gap = smoothed_bound(count, cls.support(), epsilon);

  DensityInstance inst = log_loss_table(run.smoothed, observations);
  inst.loss = log_loss(run.gap);
  const ToleranceGrid grid =
      count < 2 ? ToleranceGrid::multiples(run.gap, 1) : density_grid(run.gap, count);
  run.output = run_mlsa(inst.table, inst.sample, inst.loss, grid, Aggregator::mean());
  if (count >= 2) run.audit = grid_growth_audit(inst.table, inst.sample, inst.loss, grid, c_g);

  const auto original = class_losses(cls, observations);
  const std::size_t best = argmin(original);
  const double erm = original[best];
  const double n = static_cast<double>(observations.size());
  const double log_p = std::log(static_cast<double>(count));

  CertificateComponents parts;
  parts.erm_loss = erm;
  parts.t_max = grid.t_max();
  parts.delta = run.gap;
  parts.c_g = 2.0;
  parts.rho = 0.75;
  parts.multiplier = 8.0 / n;
  run.general = make_certificate("smoothed_density_oracle_inequality", run.output.loo_error,
                                 8.0 / n * (erm + 13.0 * run.gap * log_p) + 16.0 * epsilon, parts);
  if (std::abs(epsilon * n - 1.0) <= 1e-12) {
    const double min_log = std::min(log_p, std::log(static_cast<double>(cls.support())));
    const double rhs =
        8.0 * erm / n + 112.0 / n * log_p * min_log + 112.0 / n * log_p * std::log(n);
    run.one_over_n =
        make_certificate("smoothed_density_oracle_inequality_eps_1_over_n", run.output.loo_error,
                         rhs, parts);
  }

  const double smoothed_best = class_losses(run.smoothed, observations)[best];
  CertificateComponents none;
  none.erm_loss = erm;
  run.inflation = make_certificate("smoothing_loss_inflation", smoothed_best,
                                   erm + 2.0 * n * epsilon, none);
  if (!std::isfinite(erm)) run.inflation.slack = kInf;
  return run;
}

}  // namespace mlsa::density
