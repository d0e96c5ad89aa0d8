#include "mlsa/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "mlsa/core.hpp"
#include "mlsa/random.hpp"

namespace mlsa::logistic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd project_to_ball(const Eigen::VectorXd& theta, double r) {
  const double norm = theta.norm();
  if (norm <= r) return theta;
  return theta * (r / norm);
}

// One uniform point in the unit ball of dimension d.
Eigen::VectorXd unit_ball_point(Rng& rng, std::size_t d) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd g(static_cast<Eigen::Index>(d));
  double norm = 0.0;
  do {
    for (Eigen::Index c = 0; c < g.size(); ++c) g(c) = gauss(rng);
    norm = g.norm();
  } while (norm == 0.0);
  const double radius = std::pow(unif(rng), 1.0 / static_cast<double>(d));
  return g * (radius / norm);
}

double log_base(const LogisticProblem& problem) {
  return std::log(std::max(8.0, 2.0 * static_cast<double>(problem.n()) * problem.r * problem.R));
}

std::string cell_name(double t, std::optional<std::size_t> exclude) {
  std::string out = "t = " + std::to_string(t);
  if (exclude) out += ", i = " + std::to_string(*exclude);
  return out;
}

// Loss of every sample (columns of `thetas`) on the full sample, summed in row order.
Eigen::VectorXd sample_losses(const LogisticProblem& problem, const Eigen::MatrixXd& thetas) {
  Eigen::VectorXd totals = Eigen::VectorXd::Zero(thetas.cols());
  for (std::size_t i = 0; i < problem.n(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const Eigen::RowVectorXd z = problem.y(row) * (problem.X.row(row) * thetas);
    for (Eigen::Index s = 0; s < thetas.cols(); ++s) totals(s) += softplus_neg(z(s));
  }
  return totals;
}

Eigen::MatrixXd bank(const LogisticGeometry& geometry, const McConfig& mc) {
  return sample_muB(geometry, mc.samples_per_level, derive_seed(mc.seed, "logistic/mu_b"));
}

}  // namespace

void LogisticProblem::validate() const {
  if (X.rows() == 0 || X.cols() == 0) throw std::invalid_argument("logistic problem: empty design");
  if (y.size() != X.rows()) throw std::invalid_argument("logistic problem: label count mismatch");
  if (!(r > 0.0) || !(R > 0.0)) throw std::invalid_argument("logistic problem: r and R must be positive");
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (y(i) != 1.0 && y(i) != -1.0) {
      throw std::invalid_argument("logistic problem: label " + std::to_string(y(i)) +
                                  " at row " + std::to_string(i) + " is not +-1");
    }
    const double norm = X.row(i).norm();
    if (!std::isfinite(norm) || norm > R * (1.0 + 1e-12)) {
      throw std::invalid_argument("logistic problem: row " + std::to_string(i) + " has norm " +
                                  std::to_string(norm) + " > R");
    }
  }
}

LogisticProblem LogisticProblem::from_rows(const std::vector<std::vector<double>>& rows, double r,
                                           double R) {
  if (rows.empty() || rows.front().size() < 2) {
    throw std::invalid_argument("logistic problem: need rows of the form x_1 ... x_d y");
  }
  const std::size_t d = rows.front().size() - 1;
  LogisticProblem out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d + 1) throw std::invalid_argument("logistic problem: ragged rows");
    for (std::size_t c = 0; c < d; ++c) {
      out.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    }
    const double label = rows[i][d];
    out.y(static_cast<Eigen::Index>(i)) = label == 0.0 ? -1.0 : label;
  }
  out.r = r;
  out.R = R;
  out.validate();
  return out;
}

double softplus_neg(double z) {
  if (z > 0.0) return std::log1p(std::exp(-z));
  return -z + std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double empirical_loss(const LogisticProblem& problem, const Eigen::VectorXd& theta,
                      std::optional<std::size_t> exclude) {
  const Eigen::VectorXd z = problem.X * theta;
  double total = 0.0;
  for (std::size_t i = 0; i < problem.n(); ++i) {
    if (exclude && *exclude == i) continue;
    const auto row = static_cast<Eigen::Index>(i);
    total += softplus_neg(problem.y(row) * z(row));
  }
  return total;
}

Eigen::VectorXd loss_gradient(const LogisticProblem& problem, const Eigen::VectorXd& theta,
                              std::optional<std::size_t> exclude) {
  const Eigen::VectorXd z = problem.X * theta;
  Eigen::VectorXd weights(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    // d/dz log(1 + exp(-y z)) = -y sigma(-y z)
    weights(i) = -problem.y(i) * sigmoid(-problem.y(i) * z(i));
  }
  if (exclude) weights(static_cast<Eigen::Index>(*exclude)) = 0.0;
  return problem.X.transpose() * weights;
}

ErmResult fit_erm(const LogisticProblem& problem, std::optional<std::size_t> exclude, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("fit_erm: tol must be positive");
  if (exclude && *exclude >= problem.n()) throw std::out_of_range("fit_erm: excluded row out of range");
  const Eigen::MatrixXd A = problem.X.transpose() * problem.X;
  const double lambda_max = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A).eigenvalues().maxCoeff();
  const double step = lambda_max > 0.0 ? 4.0 / lambda_max : 1.0;

  ErmResult out;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.d()));
  for (std::size_t iter = 0; iter < kErmIterationCap; ++iter) {
    const Eigen::VectorXd grad = loss_gradient(problem, theta, exclude);
    const Eigen::VectorXd next = project_to_ball(theta - step * grad, problem.r);
    const double pg = (theta - next).norm() / step;
    if (pg <= tol) {
      out.theta = theta;
      out.gradient = grad;
      out.projected_gradient_norm = pg;
      out.iterations = iter;
      out.loss = empirical_loss(problem, theta, exclude);
      return out;
    }
    theta = next;
  }
  const double pg =
      (theta - project_to_ball(theta - step * loss_gradient(problem, theta, exclude), problem.r))
          .norm() /
      step;
  throw ConvergenceError("fit_erm: no convergence after " + std::to_string(kErmIterationCap) +
                         " iterations (projected gradient norm " + std::to_string(pg) +
                         ", tol " + std::to_string(tol) + ")");
}

LogisticGeometry build_geometry(const LogisticProblem& problem) {
  problem.validate();
  LogisticGeometry g;
  g.A = problem.X.transpose() * problem.X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.A);
  g.eigenvalues = eig.eigenvalues();
  g.eigenvectors = eig.eigenvectors();
  g.lambda_min = g.eigenvalues.minCoeff();
  g.lambda_max = g.eigenvalues.maxCoeff();
  if (!(g.lambda_min > 0.0) || g.lambda_min <= 1e-12 * g.lambda_max) {
    throw std::invalid_argument("logistic geometry: second-moment matrix is singular (lambda_min = " +
                                std::to_string(g.lambda_min) + ")");
  }
  const Eigen::VectorXd root = g.eigenvalues.cwiseSqrt();
  g.A_half = g.eigenvectors * root.asDiagonal() * g.eigenvectors.transpose();
  g.A_half_inv = g.eigenvectors * root.cwiseInverse().asDiagonal() * g.eigenvectors.transpose();
  g.erm = fit_erm(problem);
  const double n = static_cast<double>(problem.n());
  const double rR = problem.r * problem.R;
  g.R_B = std::sqrt(n) * rR + 2.0 * std::sqrt(rR);
  g.delta = 1.0 + rR + std::sqrt(rR / g.lambda_min) * problem.R;
  return g;
}

double distance_sq_to_ball(const LogisticGeometry& geometry, const LogisticProblem& problem,
                           const Eigen::VectorXd& v) {
  const double r = problem.r;
  if (v.norm() <= r) return 0.0;
  const Eigen::VectorXd w = geometry.eigenvectors.transpose() * v;
  const Eigen::VectorXd& a = geometry.eigenvalues;
  // The projection is (A + lambda I)^{-1} A v; its norm decreases in lambda.
  auto norm_at = [&](double lambda) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      const double c = a(k) / (a(k) + lambda) * w(k);
      s += c * c;
    }
    return std::sqrt(s);
  };
  double lo = 0.0;
  double hi = geometry.lambda_max * v.norm() / r;
  if (!(norm_at(hi) <= r)) throw ConvergenceError("distance_sq_to_ball: bracket failed");
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (norm_at(mid) > r) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!(hi - lo <= 1e-12 * std::max(hi, 1.0))) {
    throw ConvergenceError("distance_sq_to_ball: bisection did not converge");
  }
  const double lambda = hi;
  double dist = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    const double c = lambda / (a(k) + lambda) * w(k);
    dist += a(k) * c * c;
  }
  return dist;
}

bool membership_HA(const LogisticGeometry& geometry, const LogisticProblem& problem,
                   const Eigen::VectorXd& v) {
  return distance_sq_to_ball(geometry, problem, v) <= problem.r * problem.R;
}

Eigen::MatrixXd sample_muB(const LogisticGeometry& geometry, std::size_t k, std::uint64_t seed) {
  const auto d = static_cast<std::size_t>(geometry.A.rows());
  Rng rng(seed);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k));
  const Eigen::MatrixXd map = geometry.R_B * geometry.A_half_inv;
  for (std::size_t s = 0; s < k; ++s) {
    out.col(static_cast<Eigen::Index>(s)) = map * unit_ball_point(rng, d);
  }
  return out;
}

void McConfig::validate() const {
  if (min_accepted < 100) throw std::invalid_argument("McConfig: min_accepted must be >= 100");
  if (samples_per_level < min_accepted) {
    throw std::invalid_argument("McConfig: samples_per_level must be >= min_accepted");
  }
}

LevelEstimate estimate_level(const LogisticGeometry& geometry, const LogisticProblem& problem,
                             double t, std::optional<std::size_t> exclude, const McConfig& mc) {
  mc.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("estimate_level: t must be nonnegative");
  const double best = exclude ? fit_erm(problem, exclude).loss : geometry.erm.loss;
  const Eigen::MatrixXd samples = bank(geometry, mc);

  std::vector<Eigen::Index> kept;
  for (Eigen::Index s = 0; s < samples.cols(); ++s) {
    const Eigen::VectorXd theta = samples.col(s);
    if (!membership_HA(geometry, problem, theta)) continue;
    if (empirical_loss(problem, theta, exclude) <= best + t) kept.push_back(s);
  }
  if (kept.size() < mc.min_accepted) {
    throw InsufficientAcceptance("estimate_level: " + std::to_string(kept.size()) +
                                 " accepted samples at " + cell_name(t, exclude) + ", need " +
                                 std::to_string(mc.min_accepted));
  }
  LevelEstimate out;
  out.t = t;
  out.exclude = exclude;
  const double k = static_cast<double>(samples.cols());
  out.estimate = static_cast<double>(kept.size()) / k;
  out.stderr_estimate = std::sqrt(out.estimate * (1.0 - out.estimate) / k);
  out.accepted.resize(samples.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    out.accepted.col(static_cast<Eigen::Index>(c)) = samples.col(kept[c]);
  }
  return out;
}

double aggregate_prob(const Eigen::MatrixXd& accepted, const LogisticProblem& problem, std::size_t i) {
  if (accepted.cols() == 0) throw std::invalid_argument("aggregate_prob: no accepted samples");
  const auto row = static_cast<Eigen::Index>(i);
  const Eigen::RowVectorXd z = problem.y(row) * (problem.X.row(row) * accepted);
  double sum = 0.0;
  for (Eigen::Index s = 0; s < z.size(); ++s) sum += sigmoid(z(s));
  return sum / static_cast<double>(z.size());
}

ToleranceGrid logistic_grid(const LogisticGeometry& geometry, const LogisticProblem& problem) {
  const double count = std::ceil(16.0 * static_cast<double>(problem.d()) * log_base(problem));
  return ToleranceGrid::multiples(geometry.delta, static_cast<std::size_t>(count));
}

LossModel probability_log_loss(double delta) {
  LossModel loss;
  loss.name = "logistic_log";
  loss.pointwise = [](double prediction, double) { return -std::log(prediction); };
  loss.delta_bound = delta;
  loss.monotonicity = Monotonicity::decreasing_in_prediction;
  loss.gap_source = GapSource::pointwise_bound;
  return loss;
}

LogisticMlsa run_mlsa_logistic(const LogisticProblem& problem, const LogisticGeometry& geometry,
                               const McConfig& mc) {
  mc.validate();
  const ToleranceGrid grid = logistic_grid(geometry, problem);
  const std::vector<double>& levels = grid.levels();
  const std::size_t K = levels.size();
  const std::size_t n = problem.n();
  const double delta = geometry.delta;
  const double best = geometry.erm.loss;

  LogisticMlsa out;
  out.loo_erm.assign(n, 0.0);
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t r = 0; r < rows; ++r) {
    out.loo_erm[static_cast<std::size_t>(r)] = fit_erm(problem, static_cast<std::size_t>(r)).loss;
  }

  const Eigen::MatrixXd all = bank(geometry, mc);
  out.bank_size = static_cast<std::size_t>(all.cols());
  std::vector<Eigen::Index> in_ha;
  for (Eigen::Index s = 0; s < all.cols(); ++s) {
    if (membership_HA(geometry, problem, all.col(s))) in_ha.push_back(s);
  }
  out.bank_in_HA = in_ha.size();
  Eigen::MatrixXd thetas(all.rows(), static_cast<Eigen::Index>(in_ha.size()));
  for (std::size_t c = 0; c < in_ha.size(); ++c) {
    thetas.col(static_cast<Eigen::Index>(c)) = all.col(in_ha[c]);
  }
  const Eigen::VectorXd totals = sample_losses(problem, thetas);
  const std::size_t h = in_ha.size();

  // First level at which each sample enters H_{max(t - delta, 0)} and H_{t + delta}.
  std::vector<double> lower_thr(K);
  std::vector<double> upper_thr(K);
  for (std::size_t k = 0; k < K; ++k) {
    lower_thr[k] = best + std::max(levels[k] - delta, 0.0);
    upper_thr[k] = best + levels[k] + delta;
  }
  std::vector<std::size_t> enter_lower(h);
  std::vector<std::size_t> enter_upper(h);
  for (std::size_t s = 0; s < h; ++s) {
    const double v = totals(static_cast<Eigen::Index>(s));
    enter_lower[s] = static_cast<std::size_t>(
        std::lower_bound(lower_thr.begin(), lower_thr.end(), v) - lower_thr.begin());
    enter_upper[s] = static_cast<std::size_t>(
        std::lower_bound(upper_thr.begin(), upper_thr.end(), v) - upper_thr.begin());
  }

  out.output.grid = grid;
  out.output.n = n;
  out.output.per_level.assign(K * n, 0.0);
  out.output.medians.assign(n, 0.0);
  std::vector<std::size_t> row_min_count(n, 0);
  std::vector<std::size_t> row_sandwich(n, 0);
  std::vector<std::size_t> row_loss_viol(n, 0);
  std::vector<double> row_max_loss(n, 0.0);
  // violations per (row, level), from difference arrays over level ranges
  std::vector<std::int64_t> level_viol(n * (K + 1), 0);

#pragma omp parallel
  {
    std::vector<double> thresholds(K);
    std::vector<std::size_t> counts(K);
    std::vector<double> sums(K);
    std::vector<double> column(K);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < rows; ++r) {
      const auto i = static_cast<std::size_t>(r);
      const auto row = static_cast<Eigen::Index>(i);
      for (std::size_t k = 0; k < K; ++k) thresholds[k] = out.loo_erm[i] + levels[k];
      std::fill(counts.begin(), counts.end(), 0);
      std::fill(sums.begin(), sums.end(), 0.0);
      std::int64_t* diff = level_viol.data() + i * (K + 1);

      const Eigen::RowVectorXd z = problem.y(row) * (problem.X.row(row) * thetas);
      for (std::size_t s = 0; s < h; ++s) {
        const double zi = z(static_cast<Eigen::Index>(s));
        const double li = softplus_neg(zi);
        const double total = totals(static_cast<Eigen::Index>(s));
        const double loo = total - li;
        const auto b = static_cast<std::size_t>(
            std::lower_bound(thresholds.begin(), thresholds.end(), loo) - thresholds.begin());
        if (b < K) {
          ++counts[b];
          sums[b] += sigmoid(zi);
        }

        row_max_loss[i] = std::max(row_max_loss[i], li);
        if (li > delta + kNumericTolerance) ++row_loss_viol[i];

        bool bad = false;
        const std::size_t bl = enter_lower[s];
        if (bl < K && loo > thresholds[bl] + kNumericTolerance) {
          bad = true;
          diff[bl] += 1;
          diff[std::max(b, bl)] -= 1;
        }
        if (b < K && total > upper_thr[b] + kNumericTolerance) {
          bad = true;
          diff[b] += 1;
          diff[std::max(enter_upper[s], b)] -= 1;
        }
        if (bad) ++row_sandwich[i];
      }

      std::size_t count = 0;
      double sum = 0.0;
      std::size_t min_count = std::numeric_limits<std::size_t>::max();
      for (std::size_t k = 0; k < K; ++k) {
        count += counts[k];
        sum += sums[k];
        min_count = std::min(min_count, count);
        column[k] = count > 0 ? sum / static_cast<double>(count) : 0.0;
        out.output.per_level[k * n + i] = column[k];
      }
      row_min_count[i] = min_count;
      if (min_count > 0) out.output.medians[i] = median(column);
    }
  }

  out.min_level_accepted = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < n; ++i) {
    if (row_min_count[i] < mc.min_accepted) {
      throw InsufficientAcceptance("run_mlsa_logistic: " + std::to_string(row_min_count[i]) +
                                   " accepted samples at the first level for i = " +
                                   std::to_string(i) + ", need " + std::to_string(mc.min_accepted));
    }
    out.min_level_accepted = std::min(out.min_level_accepted, row_min_count[i]);
    out.sandwich_violations += row_sandwich[i];
    out.loss_bound_violations += row_loss_viol[i];
    out.max_sample_loss = std::max(out.max_sample_loss, row_max_loss[i]);
  }
  out.sandwich_checks = n * h;

  double loo = 0.0;
  for (double p : out.output.medians) loo -= std::log(p);
  out.output.loo_error = loo / static_cast<double>(n);

  out.audit.c_g = 2.0;
  out.audit.delta = delta;
  out.audit.per_level.resize(K);
  std::vector<std::size_t> lower_counts(K + 1, 0);
  std::vector<std::size_t> upper_counts(K + 1, 0);
  for (std::size_t s = 0; s < h; ++s) {
    ++lower_counts[enter_lower[s]];
    ++upper_counts[enter_upper[s]];
  }
  std::size_t minus = 0;
  std::size_t plus = 0;
  std::vector<std::int64_t> running(n, 0);
  std::size_t good = 0;
  for (std::size_t k = 0; k < K; ++k) {
    minus += lower_counts[k];
    plus += upper_counts[k];
    auto& rec = out.audit.per_level[k];
    rec.t = levels[k];
    rec.size_minus = minus;
    rec.size_plus = plus;
    rec.ratio = minus > 0 ? static_cast<double>(plus) / static_cast<double>(minus) : kInf;
    for (std::size_t i = 0; i < n; ++i) {
      running[i] += level_viol[i * (K + 1) + k];
      if (running[i] > 0) ++rec.sandwich_violations;
    }
    rec.sandwich_ok = rec.sandwich_violations == 0;
    rec.good = rec.sandwich_ok && rec.ratio <= out.audit.c_g;
    good += rec.good ? 1 : 0;
  }
  out.audit.good_fraction = static_cast<double>(good) / static_cast<double>(K);
  return out;
}

bool ContainmentReport::passed() const {
  if (violations != 0) return false;
  if (interior) return in_halfspace == samples;
  return std::abs(fraction - 0.5) <= 3.0 * stderr_fraction;
}

ContainmentReport verify_lemma_containment(const LogisticGeometry& geometry,
                                           const LogisticProblem& problem, const McConfig& mc) {
  mc.validate();
  const std::size_t d = problem.d();
  const double rR = problem.r * problem.R;
  const Eigen::VectorXd& center = geometry.erm.theta;
  const Eigen::VectorXd& grad = geometry.erm.gradient;
  const Eigen::MatrixXd map = std::sqrt(rR) * geometry.A_half_inv;

  ContainmentReport report;
  report.samples = mc.samples_per_level;
  report.interior = grad.norm() <= kInteriorGradientTolerance;
  Rng rng = make_rng(mc.seed, "logistic/ellipsoid");
  for (std::size_t s = 0; s < mc.samples_per_level; ++s) {
    const Eigen::VectorXd step = map * unit_ball_point(rng, d);
    if (!report.interior && grad.dot(step) > 0.0) continue;
    ++report.in_halfspace;
    const Eigen::VectorXd theta = center + step;
    const bool in_level = empirical_loss(problem, theta) <= geometry.erm.loss + rR + kNumericTolerance;
    const bool in_ha = distance_sq_to_ball(geometry, problem, theta) <= rR + kNumericTolerance;
    if (!in_level || !in_ha) ++report.violations;
  }
  const double k = static_cast<double>(report.samples);
  report.fraction = static_cast<double>(report.in_halfspace) / k;
  report.stderr_fraction = std::sqrt(0.25 / k);
  return report;
}

VolumeReport verify_volume_lower_bound(const LogisticGeometry& geometry,
                                       const LogisticProblem& problem, const McConfig& mc) {
  const LevelEstimate level =
      estimate_level(geometry, problem, problem.r * problem.R, std::nullopt, mc);
  VolumeReport report;
  report.estimate = level.estimate;
  report.stderr_estimate = level.stderr_estimate;
  report.accepted = static_cast<std::size_t>(level.accepted.cols());
  report.threshold = std::exp(-static_cast<double>(problem.d()) * log_base(problem));
  return report;
}

BoundCertificate verify_cor_logistic(const MlsaOutput& output, const LogisticGeometry& geometry,
                                     const LogisticProblem& problem) {
  if (!(output.grid == logistic_grid(geometry, problem))) {
    throw std::invalid_argument("verify_cor_logistic: output was not produced on the logistic grid");
  }
  const double n = static_cast<double>(problem.n());
  CertificateComponents parts;
  parts.erm_loss = geometry.erm.loss;
  parts.t_max = output.grid.t_max();
  parts.delta = geometry.delta;
  parts.c_g = 2.0;
  parts.rho = 0.75;
  parts.multiplier = 8.0 / n;
  const double rhs = 8.0 * geometry.erm.loss / n +
                     136.0 * geometry.delta * static_cast<double>(problem.d()) * log_base(problem) / n;
  return make_certificate("logistic_oracle_inequality", output.loo_error, rhs, parts,
                          kMcRelativeSlack * rhs);
}

LogisticRun run_logistic(const LogisticProblem& problem, const McConfig& mc) {
  LogisticRun run;
  run.geometry = build_geometry(problem);
  run.mlsa = run_mlsa_logistic(problem, run.geometry, mc);
  run.main = verify_main_theorem(run.mlsa.output, run.mlsa.audit, run.geometry.erm.loss,
                                 run.mlsa.output.grid);
  run.corollary = verify_cor_logistic(run.mlsa.output, run.geometry, problem);
  return run;
}

}  // namespace mlsa::logistic
