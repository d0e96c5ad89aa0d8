#include "mlsa/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "mlsa/io.hpp"
#include "mlsa/random.hpp"
#include "mlsa/regression.hpp"
#include "mlsa/vaw.hpp"

namespace mlsa::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw std::invalid_argument("config: '" + key + "' expects a nonnegative integer, got '" + value + "'");
  }
  return static_cast<std::size_t>(v);
}

double parse_real(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(v)) {
    throw std::invalid_argument("config: '" + key + "' expects a finite number, got '" + value + "'");
  }
  return v;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"task", [](auto& c, auto&, auto& v) { c.task = parse_task(v); }},
      {"seed", [](auto& c, auto& k, auto& v) { c.seed = parse_size(k, v); }},
      {"n", [](auto& c, auto& k, auto& v) { c.n = parse_size(k, v); }},
      {"d", [](auto& c, auto& k, auto& v) { c.d = parse_size(k, v); }},
      {"class", [](auto& c, auto&, auto& v) { c.cls = v; }},
      {"m", [](auto& c, auto& k, auto& v) { c.m = parse_size(k, v); }},
      {"loss", [](auto& c, auto&, auto& v) { c.loss = v; }},
      {"M", [](auto& c, auto& k, auto& v) { c.M = parse_real(k, v); }},
      {"support", [](auto& c, auto& k, auto& v) { c.support = parse_size(k, v); }},
      {"epsilon", [](auto& c, auto& k, auto& v) { c.epsilon = parse_real(k, v); }},
      {"sparsity", [](auto& c, auto& k, auto& v) { c.sparsity = parse_real(k, v); }},
      {"noise", [](auto& c, auto& k, auto& v) { c.noise = parse_real(k, v); }},
      {"r", [](auto& c, auto& k, auto& v) { c.r = parse_real(k, v); }},
      {"R", [](auto& c, auto& k, auto& v) { c.R = parse_real(k, v); }},
      {"theta_norm", [](auto& c, auto& k, auto& v) { c.theta_norm = parse_real(k, v); }},
      {"rank", [](auto& c, auto& k, auto& v) { c.rank = parse_size(k, v); }},
      {"replicates", [](auto& c, auto& k, auto& v) { c.replicates = parse_size(k, v); }},
      {"mc_samples", [](auto& c, auto& k, auto& v) { c.mc_samples = parse_size(k, v); }},
      {"mc_min_accepted", [](auto& c, auto& k, auto& v) { c.mc_min_accepted = parse_size(k, v); }},
      {"c_g", [](auto& c, auto& k, auto& v) { c.c_g = parse_real(k, v); }},
      {"agg_trials", [](auto& c, auto& k, auto& v) { c.agg_trials = parse_size(k, v); }},
      {"data_file", [](auto& c, auto&, auto& v) { c.data_file = v; }},
      {"class_file", [](auto& c, auto&, auto& v) { c.class_file = v; }},
      {"observations_file", [](auto& c, auto&, auto& v) { c.observations_file = v; }},
      {"table_file", [](auto& c, auto&, auto& v) { c.table_file = v; }},
      {"responses_file", [](auto& c, auto&, auto& v) { c.responses_file = v; }},
  };
  return table;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("config: empty item in list '" + value + "'");
    out.push_back(item);
  }
  if (out.empty()) throw std::invalid_argument("config: empty value");
  return out;
}

ExperimentConfig build(const std::vector<std::pair<std::string, std::string>>& values) {
  ExperimentConfig config;
  bool has_task = false;
  for (const auto& [key, value] : values) {
    setters().at(key)(config, key, value);
    has_task = has_task || key == "task";
  }
  if (!has_task) throw std::invalid_argument("config: 'task' is required");
  config.validate();
  return config;
}

// ---------------------------------------------------------------- generation

std::vector<double> read_vector(const std::string& path) {
  std::vector<double> out;
  for (const auto& row : io::read_matrix(path)) out.insert(out.end(), row.begin(), row.end());
  return out;
}

bool planted_label(const classification::ClassDescriptor& desc, const double* x) {
  using classification::ClassFamily;
  switch (desc.family) {
    case ClassFamily::thresholds:
      return x[0] >= 0.5;
    case ClassFamily::intervals:
      return x[0] >= 0.3 && x[0] <= 0.7;
    case ClassFamily::unions_of_intervals: {
      const double k = static_cast<double>(desc.intervals);
      for (std::size_t j = 0; j < desc.intervals; ++j) {
        const double lo = (2.0 * static_cast<double>(j) + 0.5) / (2.0 * k);
        const double hi = (2.0 * static_cast<double>(j) + 1.5) / (2.0 * k);
        if (x[0] >= lo && x[0] <= hi) return true;
      }
      return false;
    }
    case ClassFamily::axis_rectangles:
      return x[0] >= 0.25 && x[0] <= 0.75 && x[1] >= 0.25 && x[1] <= 0.75;
    case ClassFamily::explicit_table:
      break;
  }
  throw std::invalid_argument("no planted member for class " + desc.name());
}

ClassificationInstance make_classification(const ExperimentConfig& c, std::uint64_t seed) {
  ClassificationInstance inst;
  inst.descriptor = classification::ClassDescriptor::parse(c.cls);
  const std::size_t dim = inst.descriptor.covariate_dimension();
  inst.covariates.dim = dim;
  if (!c.data_file.empty()) {
    for (const auto& row : io::read_matrix(c.data_file)) {
      if (row.size() != dim + 1) {
        throw std::invalid_argument("classification data: expected " + std::to_string(dim + 1) +
                                    " columns per row");
      }
      inst.covariates.values.insert(inst.covariates.values.end(), row.begin(), row.end() - 1);
      if (row.back() != 0.0 && row.back() != 1.0) {
        throw std::invalid_argument("classification data: labels must be 0 or 1");
      }
      inst.labels.push_back(row.back());
    }
    inst.clean_labels = inst.labels;
    return inst;
  }
  Rng cov_rng = make_rng(seed, "covariates");
  Rng flip_rng = make_rng(seed, "label_noise");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  inst.covariates.values.resize(c.n * dim);
  for (double& v : inst.covariates.values) v = unif(cov_rng);
  for (std::size_t i = 0; i < c.n; ++i) {
    const double clean = planted_label(inst.descriptor, &inst.covariates.values[i * dim]) ? 1.0 : 0.0;
    inst.clean_labels.push_back(clean);
    inst.labels.push_back(unif(flip_rng) < c.noise ? 1.0 - clean : clean);
  }
  return inst;
}

RegressionInstance make_regression(const ExperimentConfig& c, std::uint64_t seed) {
  if (!c.table_file.empty()) {
    const auto rows = io::read_matrix(c.table_file);
    if (rows.empty()) throw std::invalid_argument("regression table file is empty");
    std::vector<double> values;
    for (const auto& row : rows) {
      if (row.size() != rows.front().size()) throw std::invalid_argument("regression table: ragged rows");
      values.insert(values.end(), row.begin(), row.end());
    }
    RegressionInstance inst{PredictionTable(rows.size(), rows.front().size(), std::move(values),
                                            PredictionTable::Duplicates::keep),
                            LabeledSample{read_vector(c.responses_file)}};
    check_shapes(inst.table, inst.sample);
    return inst;
  }
  Rng class_rng = make_rng(seed, "class");
  Rng x_rng = make_rng(seed, "covariates");
  Rng noise_rng = make_rng(seed, "response_noise");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> a(c.m);
  std::vector<double> b(c.m);
  for (std::size_t j = 0; j < c.m; ++j) {
    a[j] = unif(class_rng);
    b[j] = 2.0 * unif(class_rng) - 1.0;
  }
  std::vector<double> values(c.n * c.m);
  LabeledSample sample;
  for (std::size_t i = 0; i < c.n; ++i) {
    const double x = unif(x_rng) - 0.5;
    for (std::size_t j = 0; j < c.m; ++j) values[i * c.m + j] = std::clamp(a[j] + b[j] * x, 0.0, 1.0);
    const double eps = c.noise * (2.0 * unif(noise_rng) - 1.0);
    sample.responses.push_back(std::clamp(values[i * c.m] + eps, 0.0, 1.0));
  }
  return {PredictionTable(c.n, c.m, std::move(values), PredictionTable::Duplicates::keep),
          std::move(sample)};
}

DensityData make_density(const ExperimentConfig& c, std::uint64_t seed) {
  DensityData data;
  if (!c.class_file.empty()) {
    data.cls = density::DensityClass::from_rows(io::read_matrix(c.class_file));
    for (double v : read_vector(c.observations_file)) {
      if (!(v >= 0.0) || v != std::floor(v)) {
        throw std::invalid_argument("density observations must be nonnegative integers");
      }
      data.observations.push_back(static_cast<std::size_t>(v));
    }
    return data;
  }
  Rng class_rng = make_rng(seed, "class");
  Rng obs_rng = make_rng(seed, "observations");
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::vector<double>> rows(c.m, std::vector<double>(c.support));
  for (auto& row : rows) {
    double sum = 0.0;
    for (double& v : row) {
      v = expo(class_rng) + 1e-3;
      if (unif(class_rng) < c.sparsity) v = 0.0;
      sum += v;
    }
    if (sum == 0.0) {
      row[std::uniform_int_distribution<std::size_t>(0, c.support - 1)(class_rng)] = 1.0;
      sum = 1.0;
    }
    for (double& v : row) v /= sum;
  }
  data.cls = density::DensityClass::from_rows(rows);
  std::discrete_distribution<std::size_t> planted(rows[0].begin(), rows[0].end());
  for (std::size_t i = 0; i < c.n; ++i) data.observations.push_back(planted(obs_rng));
  return data;
}

logistic::LogisticProblem make_logistic(const ExperimentConfig& c, std::uint64_t seed) {
  if (!c.data_file.empty()) return logistic::LogisticProblem::from_rows(io::read_matrix(c.data_file), c.r, c.R);
  Rng x_rng = make_rng(seed, "covariates");
  Rng theta_rng = make_rng(seed, "planted_theta");
  Rng y_rng = make_rng(seed, "labels");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  logistic::LogisticProblem p;
  p.r = c.r;
  p.R = c.R;
  const auto n = static_cast<Eigen::Index>(c.n);
  const auto d = static_cast<Eigen::Index>(c.d);
  p.X.resize(n, d);
  p.y.resize(n);
  Eigen::VectorXd theta0(d);
  for (Eigen::Index k = 0; k < d; ++k) theta0(k) = gauss(theta_rng);
  theta0 *= c.theta_norm / theta0.norm();
  const double scale = c.R / std::sqrt(2.0 * static_cast<double>(c.d));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) p.X(i, k) = scale * gauss(x_rng);
    const double norm = p.X.row(i).norm();
    if (norm > c.R) p.X.row(i) *= c.R / norm;
    p.y(i) = unif(y_rng) < logistic::sigmoid(p.X.row(i).dot(theta0)) ? 1.0 : -1.0;
  }
  p.validate();
  return p;
}

VawInstance make_vaw(const ExperimentConfig& c, std::uint64_t seed) {
  VawInstance inst;
  if (!c.data_file.empty()) {
    const auto rows = io::read_matrix(c.data_file);
    if (rows.empty() || rows.front().size() < 2) throw std::invalid_argument("vaw data: need rows x_1 ... x_d y");
    const std::size_t d = rows.front().size() - 1;
    inst.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    inst.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != d + 1) throw std::invalid_argument("vaw data: ragged rows");
      for (std::size_t k = 0; k < d; ++k) {
        inst.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
      }
      inst.y(static_cast<Eigen::Index>(i)) = rows[i][d];
    }
    return inst;
  }
  Rng rng = make_rng(seed, "design");
  Rng y_rng = make_rng(seed, "responses");
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(c.n);
  const auto d = static_cast<Eigen::Index>(c.d);
  auto gaussian = [&](Eigen::Index rows, Eigen::Index cols, Rng& g) {
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index k = 0; k < cols; ++k) out(i, k) = gauss(g);
    }
    return out;
  };
  if (c.rank > 0 && c.rank < std::min(c.n, c.d)) {
    const auto k = static_cast<Eigen::Index>(c.rank);
    inst.X = gaussian(n, k, rng) * gaussian(k, d, rng);
  } else {
    inst.X = gaussian(n, d, rng);
  }
  const Eigen::VectorXd beta = gaussian(d, 1, y_rng);
  inst.y = inst.X * beta + c.noise * gaussian(n, 1, y_rng);
  return inst;
}

// ---------------------------------------------------------------- running

class Recorder {
 public:
  explicit Recorder(InstanceResult& result) : result_(result) {}

  void detail(const std::string& key, const std::string& value) { result_.details.emplace_back(key, value); }
  void detail(const std::string& key, double value) { detail(key, io::format_double(value)); }
  void detail(const std::string& key, std::size_t value) { detail(key, std::to_string(value)); }

  void check(const std::string& name, bool passed, const std::string& text = "") {
    result_.checks.push_back({name, passed, text});
  }

  void certificate(const BoundCertificate& cert) { result_.certificates.push_back(cert); }

  void row(std::size_t n, std::size_t d, double loo, double erm_per_n, const BoundCertificate* cert,
           double rho_hat) {
    CsvRow r;
    r.instance_id = result_.instance_id;
    r.n = n;
    r.d = d;
    r.loo = loo;
    r.erm_per_n = erm_per_n;
    r.bound = cert ? cert->rhs : kNaN;
    r.slack = cert ? cert->slack : kNaN;
    r.rho_hat = rho_hat;
    result_.row = r;
  }

  template <typename F>
  auto stage(const std::string& name, F&& fn) -> decltype(fn()) {
    stage_ = name;
    return fn();
  }

  const std::string& current_stage() const { return stage_; }

 private:
  InstanceResult& result_;
  std::string stage_ = "setup";
};

void growth_checks(Recorder& rec, const std::string& prefix, const GrowthAudit& audit) {
  rec.detail(prefix + "rho_hat", audit.good_fraction);
  rec.detail(prefix + "good_levels", audit.good_levels());
  rec.detail(prefix + "levels", audit.per_level.size());
  rec.check(prefix + "sandwich", audit.sandwich_violations() == 0,
            std::to_string(audit.sandwich_violations()) + " violations");
  rec.check(prefix + "local_growth_fraction", audit.good_fraction >= 0.75,
            "rho_hat = " + io::format_double(audit.good_fraction));
}

void agg_check(Recorder& rec, const Aggregator& agg, const LossModel& loss, const PredictionTable& table,
               const LabeledSample& sample, const ExperimentConfig& config, std::uint64_t seed) {
  if (config.agg_trials == 0) return;
  const AggCheckReport report =
      check_agg_assumption(agg, loss, table, sample, config.agg_trials, derive_seed(seed, "agg"));
  rec.check("aggregation_assumption", report.passed(), std::to_string(report.violations) + " of " +
                                                           std::to_string(report.trials) + " trials violated");
}

void loss_bound_check(Recorder& rec, const PredictionTable& table, const LabeledSample& sample,
                      const LossModel& loss) {
  const LossBoundAudit audit = audit_loss_bound(table, sample, loss);
  rec.check("loss_bound", audit.passed(), "observed " + io::format_double(audit.observed) + ", declared " +
                                              io::format_double(loss.delta_bound));
}

void add_main(Recorder& rec, const MainTheoremCertificates& main) {
  rec.certificate(main.measured);
  rec.certificate(main.nominal);
}

void run_classification_task(Recorder& rec, const ExperimentConfig& config, std::uint64_t seed, Mode mode) {
  const auto inst = rec.stage("generate", [&] { return make_classification(config, seed); });
  const PredictionTable table =
      rec.stage("restrict", [&] { return classification::restrict_class(inst.descriptor, inst.covariates); });
  const LabeledSample sample{inst.labels};
  const std::size_t n = table.rows();
  const std::size_t d = inst.descriptor.vc_dimension();
  const LossModel loss = classification::zero_one_loss();
  rec.detail("class", inst.descriptor.name());
  rec.detail("class_size", table.cols());
  rec.detail("vc_dimension", d);
  std::size_t flips = 0;
  for (std::size_t i = 0; i < n; ++i) flips += inst.labels[i] != inst.clean_labels[i] ? 1 : 0;
  rec.detail("label_flips", flips);
  rec.check("sauer_bound", table.cols() <= classification::sauer_bound(n, d));

  rec.stage("audit", [&] {
    agg_check(rec, Aggregator::majority(), loss, table, sample, config, seed);
    loss_bound_check(rec, table, sample, loss);
  });
  if (mode == Mode::audit_only) {
    const auto audit = rec.stage("audit", [&] {
      return grid_growth_audit(table, sample, loss, classification::classification_grid(d, n), config.c_g);
    });
    growth_checks(rec, "", audit);
    rec.row(n, d, kNaN, compute_losses(table, sample, loss).min_total() / static_cast<double>(n), nullptr,
            audit.good_fraction);
    return;
  }
  const auto run = rec.stage("mlsa", [&] { return classification::run_classification(table, sample, d, config.c_g); });
  growth_checks(rec, "", run.audit);
  rec.detail("erm_loss", run.erm);
  rec.detail("loo", run.output.loo_error);
  rec.detail("levels", run.output.grid.size());
  add_main(rec, run.main);
  rec.certificate(run.corollary);
  if (run.erm == 0.0) {
    const double nd = static_cast<double>(n);
    CertificateComponents parts;
    parts.multiplier = 8.0 / nd;
    rec.certificate(make_certificate("realizable_classification_bound", run.output.loo_error,
                                     200.0 * static_cast<double>(d) * std::log(nd) / nd, parts));
  }
  rec.row(n, d, run.output.loo_error, run.erm / static_cast<double>(n), &run.corollary, run.audit.good_fraction);
}

void run_regression_task(Recorder& rec, const ExperimentConfig& config, std::uint64_t seed, Mode mode) {
  const auto inst = rec.stage("generate", [&] { return make_regression(config, seed); });
  const LossModel loss = regression::loss_by_name(config.loss, config.M);
  regression::check_responses(inst.sample);
  const std::size_t n = inst.table.rows();
  const std::size_t m = inst.table.cols();
  rec.detail("loss", loss.name);
  rec.detail("class_size", m);
  rec.stage("audit", [&] {
    agg_check(rec, Aggregator::mean(), loss, inst.table, inst.sample, config, seed);
    loss_bound_check(rec, inst.table, inst.sample, loss);
  });
  if (mode == Mode::audit_only) {
    const auto audit = rec.stage("audit", [&] {
      return grid_growth_audit(inst.table, inst.sample, loss, regression::grid_for_class(loss.delta_bound, m),
                               config.c_g);
    });
    growth_checks(rec, "", audit);
    rec.row(n, 1, kNaN, compute_losses(inst.table, inst.sample, loss).min_total() / static_cast<double>(n),
            nullptr, audit.good_fraction);
    return;
  }
  const auto run = rec.stage("mlsa", [&] { return regression::run_regression(inst.table, inst.sample, loss, config.c_g); });
  growth_checks(rec, "", run.audit);
  rec.detail("erm_loss", run.erm);
  rec.detail("loo", run.output.loo_error);
  add_main(rec, run.main);
  rec.certificate(run.corollary);
  rec.row(n, 1, run.output.loo_error, run.erm / static_cast<double>(n), &run.corollary, run.audit.good_fraction);
}

void run_density_task(Recorder& rec, const ExperimentConfig& config, std::uint64_t seed, Mode mode) {
  const auto data = rec.stage("generate", [&] { return make_density(config, seed); });
  const std::size_t n = data.observations.size();
  const double M = data.cls.log_ratio_bound();
  const double eps = config.epsilon > 0.0 ? config.epsilon : 1.0 / static_cast<double>(n);
  rec.detail("class_size", data.cls.size());
  rec.detail("support", data.cls.support());
  rec.detail("log_ratio_bound", M);
  rec.detail("epsilon", eps);
  rec.check("log_ratio_bound_exact", density::exhaustive_log_ratio(data.cls) == M ||
                                         std::abs(density::exhaustive_log_ratio(data.cls) - M) <= 1e-12);
  const bool finite = std::isfinite(M);

  const density::DensityClass smoothed = density::smooth_class(data.cls, eps);
  const double m_eps = density::smoothed_bound(data.cls.size(), data.cls.support(), eps);
  rec.detail("smoothed_log_ratio_bound", smoothed.log_ratio_bound());
  rec.detail("smoothed_gap", m_eps);
  rec.check("smoothed_log_ratio_within_gap", smoothed.log_ratio_bound() <= m_eps + kNumericTolerance);

  rec.stage("audit", [&] {
    const density::DensityClass& audited = finite ? data.cls : smoothed;
    const density::DensityInstance inst = density::log_loss_table(audited, data.observations);
    agg_check(rec, Aggregator::mean(), inst.loss, inst.table, inst.sample, config, seed);
    loss_bound_check(rec, inst.table, inst.sample, inst.loss);
  });

  if (mode == Mode::audit_only) {
    rec.stage("audit", [&] {
      double rho = kNaN;
      if (finite && !density::is_degenerate(data.cls.size(), M)) {
        const auto inst = density::log_loss_table(data.cls, data.observations);
        const auto audit = grid_growth_audit(inst.table, inst.sample, inst.loss,
                                             density::density_grid(M, data.cls.size()), config.c_g);
        growth_checks(rec, "", audit);
        rho = audit.good_fraction;
      }
      rec.row(n, 1, kNaN, kNaN, nullptr, rho);
    });
    return;
  }

  std::optional<density::DensityRun> plain;
  if (finite) {
    plain = rec.stage("mlsa", [&] { return density::run_density(data.cls, data.observations, config.c_g); });
    if (plain->audit) growth_checks(rec, "", *plain->audit);
    if (plain->main) add_main(rec, *plain->main);
    rec.certificate(plain->corollary);
    rec.detail("loo", plain->output.loo_error);
  }
  const auto smooth = rec.stage("smoothed_mlsa", [&] {
    return density::run_smoothed(data.cls, data.observations, eps, config.c_g);
  });
  if (smooth.audit) growth_checks(rec, "smoothed.", *smooth.audit);
  rec.detail("smoothed.loo", smooth.output.loo_error);
  rec.certificate(smooth.general);
  if (smooth.one_over_n) rec.certificate(*smooth.one_over_n);
  rec.certificate(smooth.inflation);

  const auto losses = density::class_losses(data.cls, data.observations);
  const double erm = *std::min_element(losses.begin(), losses.end());
  rec.detail("erm_loss", erm);
  const double nd = static_cast<double>(n);
  if (plain) {
    rec.row(n, 1, plain->output.loo_error, erm / nd, &plain->corollary,
            plain->audit ? plain->audit->good_fraction : 1.0);
  } else {
    const BoundCertificate& cert = smooth.one_over_n ? *smooth.one_over_n : smooth.general;
    rec.row(n, 1, smooth.output.loo_error, erm / nd, &cert, smooth.audit ? smooth.audit->good_fraction : 1.0);
  }
}

void run_logistic_task(Recorder& rec, const ExperimentConfig& config, std::uint64_t seed, Mode mode) {
  const auto problem = rec.stage("generate", [&] { return make_logistic(config, seed); });
  logistic::McConfig mc;
  mc.samples_per_level = config.mc_samples;
  mc.min_accepted = config.mc_min_accepted;
  mc.seed = derive_seed(seed, "monte_carlo");
  mc.validate();
  const auto geometry = rec.stage("geometry", [&] { return logistic::build_geometry(problem); });
  const std::size_t n = problem.n();
  const std::size_t d = problem.d();
  rec.detail("lambda_min", geometry.lambda_min);
  rec.detail("lambda_max", geometry.lambda_max);
  for (Eigen::Index k = 0; k < geometry.eigenvalues.size(); ++k) {
    rec.detail("eigenvalue." + std::to_string(k), geometry.eigenvalues(k));
  }
  for (Eigen::Index k = 0; k < geometry.erm.theta.size(); ++k) {
    rec.detail("theta_star." + std::to_string(k), geometry.erm.theta(k));
  }
  rec.detail("erm_loss", geometry.erm.loss);
  rec.detail("erm_iterations", geometry.erm.iterations);
  rec.detail("R_B", geometry.R_B);
  rec.detail("delta", geometry.delta);
  rec.detail("grid_size", logistic::logistic_grid(geometry, problem).size());

  const auto containment =
      rec.stage("containment", [&] { return logistic::verify_lemma_containment(geometry, problem, mc); });
  rec.detail("containment.interior", containment.interior ? "true" : "false");
  rec.detail("containment.fraction", containment.fraction);
  rec.check("ellipsoid_containment", containment.passed(),
            std::to_string(containment.violations) + " violations, half-space fraction " +
                io::format_double(containment.fraction));
  const auto volume = rec.stage("volume", [&] { return logistic::verify_volume_lower_bound(geometry, problem, mc); });
  rec.detail("volume.estimate", volume.estimate);
  rec.detail("volume.threshold", volume.threshold);
  rec.check("volume_lower_bound", volume.passed(),
            io::format_double(volume.estimate) + " + 3 * " + io::format_double(volume.stderr_estimate) +
                " vs " + io::format_double(volume.threshold));
  if (mode == Mode::audit_only) {
    rec.row(n, d, kNaN, geometry.erm.loss / static_cast<double>(n), nullptr, kNaN);
    return;
  }
  const auto run = rec.stage("mlsa", [&] { return logistic::run_logistic(problem, mc); });
  const auto& out = run.mlsa;
  rec.detail("bank_size", out.bank_size);
  rec.detail("bank_in_HA", out.bank_in_HA);
  rec.detail("min_level_accepted", out.min_level_accepted);
  rec.detail("max_sample_loss", out.max_sample_loss);
  rec.detail("loo", out.output.loo_error);
  rec.detail("rho_hat", out.audit.good_fraction);
  rec.check("crn_sandwich", out.sandwich_violations == 0,
            std::to_string(out.sandwich_violations) + " of " + std::to_string(out.sandwich_checks));
  rec.check("sample_loss_bound", out.loss_bound_violations == 0,
            "max " + io::format_double(out.max_sample_loss) + " vs delta " + io::format_double(geometry.delta));
  bool in_unit = true;
  for (double p : out.output.medians) in_unit = in_unit && p > 0.0 && p < 1.0;
  rec.check("probabilities_in_unit_interval", in_unit && std::isfinite(out.output.loo_error));
  add_main(rec, run.main);
  rec.certificate(run.corollary);
  rec.row(n, d, out.output.loo_error, geometry.erm.loss / static_cast<double>(n), &run.corollary,
          out.audit.good_fraction);
}

void run_vaw_task(Recorder& rec, const ExperimentConfig& config, std::uint64_t seed, Mode) {
  const auto inst = rec.stage("generate", [&] { return make_vaw(config, seed); });
  const auto fit = rec.stage("fit", [&] { return vaw::fit_transductive_vaw(inst.X, inst.y); });
  const auto n = static_cast<std::size_t>(inst.X.rows());
  const auto d = static_cast<std::size_t>(inst.X.cols());
  rec.detail("rank", fit.rank);
  rec.detail("loo_sq_sum", fit.loo_sq_sum);
  rec.detail("fit_sq_sum", fit.fit_sq_sum);
  rec.detail("m_sq", fit.m_sq);
  const BoundCertificate cert = vaw::verify_loo_bound(fit);
  rec.certificate(cert);

  double lo = fit.leverages.size() > 0 ? fit.leverages.minCoeff() : 0.0;
  double hi = fit.leverages.size() > 0 ? fit.leverages.maxCoeff() : 0.0;
  rec.check("leverage_range", lo >= -kNumericTolerance && hi <= 1.0 + kNumericTolerance,
            "[" + io::format_double(lo) + ", " + io::format_double(hi) + "]");
  const double lev_sum = fit.leverages.sum();
  rec.check("leverage_sum", std::abs(lev_sum - static_cast<double>(fit.rank)) <= 1e-8,
            io::format_double(lev_sum) + " vs rank " + std::to_string(fit.rank));
  const auto pinv = vaw::verify_pinv_identity(inst.X);
  rec.check("pinv_identity", pinv.passed(), "max error " + io::format_double(pinv.max_abs_error));
  const double resid = vaw::residual_identity_error(inst.X, inst.y, fit);
  rec.check("residual_identity", resid <= 1e-9 * std::max(1.0, std::sqrt(fit.m_sq)),
            "max error " + io::format_double(resid));
  const Eigen::MatrixXd hat = inst.X * fit.A_pinv * inst.X.transpose();
  const double idem = (hat * hat - hat).cwiseAbs().maxCoeff();
  const double sym = (hat - hat.transpose()).cwiseAbs().maxCoeff();
  rec.check("hat_matrix_projection", idem <= 1e-8 && sym <= 1e-8,
            "idempotence " + io::format_double(idem) + ", symmetry " + io::format_double(sym));

  const double nd = static_cast<double>(n);
  BoundCertificate scaled = cert;
  scaled.lhs /= nd;
  scaled.rhs /= nd;
  scaled.slack /= nd;
  rec.row(n, d, fit.loo_sq_sum / nd, fit.fit_sq_sum / nd, &scaled, kNaN);
}

std::string csv_number(double v) { return std::isnan(v) ? "nan" : io::format_double(v); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

Task parse_task(const std::string& name) {
  if (name == "classification") return Task::classification;
  if (name == "regression") return Task::regression;
  if (name == "density") return Task::density;
  if (name == "logistic") return Task::logistic;
  if (name == "vaw") return Task::vaw;
  throw std::invalid_argument("unknown task '" + name + "'");
}

std::string task_name(Task task) {
  switch (task) {
    case Task::classification:
      return "classification";
    case Task::regression:
      return "regression";
    case Task::density:
      return "density";
    case Task::logistic:
      return "logistic";
    case Task::vaw:
      return "vaw";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (!seed) throw std::invalid_argument("config: 'seed' is required");
  if (replicates == 0) throw std::invalid_argument("config: 'replicates' must be >= 1");
  const bool from_file = !data_file.empty() || !class_file.empty() || !table_file.empty();
  if (!from_file && n == 0) throw std::invalid_argument("config: 'n' must be >= 1");
  if (!(noise >= 0.0)) throw std::invalid_argument("config: 'noise' must be nonnegative");
  switch (task) {
    case Task::classification:
      classification::ClassDescriptor::parse(cls);
      if (noise > 1.0) throw std::invalid_argument("config: 'noise' is a flip probability in [0, 1]");
      if (!from_file && n < 3) throw std::invalid_argument("config: classification needs n >= 3");
      break;
    case Task::regression:
      regression::loss_by_name(loss, M);
      if (!table_file.empty() && responses_file.empty()) {
        throw std::invalid_argument("config: 'table_file' needs 'responses_file'");
      }
      if (table_file.empty() && m == 0) throw std::invalid_argument("config: 'm' must be >= 1");
      break;
    case Task::density:
      if (!class_file.empty() && observations_file.empty()) {
        throw std::invalid_argument("config: 'class_file' needs 'observations_file'");
      }
      if (class_file.empty() && (m == 0 || support == 0)) {
        throw std::invalid_argument("config: 'm' and 'support' must be >= 1");
      }
      if (!(sparsity >= 0.0 && sparsity < 1.0)) throw std::invalid_argument("config: 'sparsity' must lie in [0, 1)");
      if (epsilon != 0.0 && !(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("config: 'epsilon' must lie in (0, 1/2), or 0 for 1/n");
      }
      break;
    case Task::logistic:
      if (!(r > 0.0) || !(R > 0.0)) throw std::invalid_argument("config: 'r' and 'R' must be positive");
      if (data_file.empty() && d == 0) throw std::invalid_argument("config: 'd' must be >= 1");
      if (mc_min_accepted < 100 || mc_samples < mc_min_accepted) {
        throw std::invalid_argument("config: need mc_samples >= mc_min_accepted >= 100");
      }
      break;
    case Task::vaw:
      if (data_file.empty() && d == 0) throw std::invalid_argument("config: 'd' must be >= 1");
      break;
  }
  if (!(c_g >= 1.0)) throw std::invalid_argument("config: 'c_g' must be >= 1");
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream out;
  auto line = [&](const std::string& key, const std::string& value) { out << key << " = " << value << '\n'; };
  line("task", task_name(task));
  line("seed", seed ? std::to_string(*seed) : "");
  line("n", std::to_string(n));
  line("d", std::to_string(d));
  line("class", cls);
  line("m", std::to_string(m));
  line("loss", loss);
  line("M", io::format_double(M));
  line("support", std::to_string(support));
  line("epsilon", io::format_double(epsilon));
  line("sparsity", io::format_double(sparsity));
  line("noise", io::format_double(noise));
  line("r", io::format_double(r));
  line("R", io::format_double(R));
  line("theta_norm", io::format_double(theta_norm));
  line("rank", std::to_string(rank));
  line("replicates", std::to_string(replicates));
  line("mc_samples", std::to_string(mc_samples));
  line("mc_min_accepted", std::to_string(mc_min_accepted));
  line("c_g", io::format_double(c_g));
  line("agg_trials", std::to_string(agg_trials));
  for (const auto& [key, value] : {std::pair{"data_file", data_file}, {"class_file", class_file},
                                   {"observations_file", observations_file}, {"table_file", table_file},
                                   {"responses_file", responses_file}}) {
    if (!value.empty()) line(key, value);
  }
  return out.str();
}

RawConfig parse_config_text(const std::string& text) {
  RawConfig raw;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!setters().count(key)) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    set_value(raw, key, value);
  }
  return raw;
}

RawConfig load_config_file(const std::string& path) { return parse_config_text(io::read_text(path)); }

void set_value(RawConfig& raw, const std::string& key, const std::string& value) {
  if (!setters().count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
  auto values = split_list(value);
  for (auto& [k, v] : raw) {
    if (k == key) {
      v = std::move(values);
      return;
    }
  }
  raw.emplace_back(key, std::move(values));
}

std::vector<ExperimentConfig> expand(const RawConfig& raw) {
  std::vector<ExperimentConfig> out;
  std::vector<std::size_t> index(raw.size(), 0);
  while (true) {
    std::vector<std::pair<std::string, std::string>> values;
    for (std::size_t k = 0; k < raw.size(); ++k) values.emplace_back(raw[k].first, raw[k].second[index[k]]);
    out.push_back(build(values));
    std::size_t k = raw.size();
    while (k > 0) {
      --k;
      if (++index[k] < raw[k].second.size()) break;
      index[k] = 0;
      if (k == 0) return out;
    }
    if (raw.empty()) return out;
  }
}

ExperimentConfig single(const RawConfig& raw) {
  for (const auto& [key, values] : raw) {
    if (values.size() != 1) {
      throw std::invalid_argument("config: '" + key + "' lists several values; use the sweep command");
    }
  }
  return expand(raw).front();
}

std::string instance_id(const ExperimentConfig& c, std::size_t replicate) {
  std::string id = task_name(c.task) + "/";
  switch (c.task) {
    case Task::classification:
      id += c.cls + "/n" + std::to_string(c.n) + "/eta" + short_double(c.noise);
      break;
    case Task::regression:
      id += c.loss + "/M" + short_double(c.M) + "/m" + std::to_string(c.m) + "/n" + std::to_string(c.n) +
            "/noise" + short_double(c.noise);
      break;
    case Task::density:
      id += "P" + std::to_string(c.m) + "/X" + std::to_string(c.support) + "/n" + std::to_string(c.n) + "/eps" +
            short_double(c.epsilon) + "/sparsity" + short_double(c.sparsity);
      break;
    case Task::logistic:
      id += "d" + std::to_string(c.d) + "/n" + std::to_string(c.n) + "/r" + short_double(c.r) + "/R" +
            short_double(c.R) + "/k" + std::to_string(c.mc_samples);
      break;
    case Task::vaw:
      id += "d" + std::to_string(c.d) + "/n" + std::to_string(c.n) + "/rank" + std::to_string(c.rank) +
            "/noise" + short_double(c.noise);
      break;
  }
  if (!c.data_file.empty() || !c.class_file.empty() || !c.table_file.empty()) id += "/file";
  return id + "/rep" + std::to_string(replicate);
}

std::uint64_t instance_seed(const ExperimentConfig& config, std::size_t replicate) {
  if (!config.seed) throw std::invalid_argument("config: 'seed' is required");
  return derive_seed(*config.seed, instance_id(config, replicate));
}

Instance generate_instance(const ExperimentConfig& config, std::uint64_t seed) {
  switch (config.task) {
    case Task::classification:
      return make_classification(config, seed);
    case Task::regression:
      return make_regression(config, seed);
    case Task::density:
      return make_density(config, seed);
    case Task::logistic:
      return make_logistic(config, seed);
    case Task::vaw:
      return make_vaw(config, seed);
  }
  throw std::invalid_argument("unknown task");
}

std::vector<std::pair<std::string, std::string>> instance_files(const Instance& instance) {
  std::vector<std::pair<std::string, std::string>> files;
  std::visit(
      [&](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, ClassificationInstance>) {
          std::vector<std::vector<double>> rows;
          for (std::size_t i = 0; i < inst.labels.size(); ++i) {
            std::vector<double> row(inst.covariates.values.begin() + static_cast<std::ptrdiff_t>(i * inst.covariates.dim),
                                    inst.covariates.values.begin() +
                                        static_cast<std::ptrdiff_t>((i + 1) * inst.covariates.dim));
            row.push_back(inst.labels[i]);
            rows.push_back(std::move(row));
          }
          files.emplace_back("data.txt", io::format_matrix(rows));
        } else if constexpr (std::is_same_v<T, RegressionInstance>) {
          std::vector<std::vector<double>> rows;
          for (std::size_t i = 0; i < inst.table.rows(); ++i) {
            const auto r = inst.table.row(i);
            rows.emplace_back(r.begin(), r.end());
          }
          files.emplace_back("table.txt", io::format_matrix(rows));
          std::vector<std::vector<double>> ys;
          for (double y : inst.sample.responses) ys.push_back({y});
          files.emplace_back("responses.txt", io::format_matrix(ys));
        } else if constexpr (std::is_same_v<T, DensityData>) {
          files.emplace_back("class.txt", io::format_matrix(inst.cls.rows()));
          std::vector<std::vector<double>> obs;
          for (std::size_t x : inst.observations) obs.push_back({static_cast<double>(x)});
          files.emplace_back("observations.txt", io::format_matrix(obs));
        } else if constexpr (std::is_same_v<T, logistic::LogisticProblem>) {
          std::vector<std::vector<double>> rows;
          for (Eigen::Index i = 0; i < inst.X.rows(); ++i) {
            std::vector<double> row;
            for (Eigen::Index k = 0; k < inst.X.cols(); ++k) row.push_back(inst.X(i, k));
            row.push_back(inst.y(i));
            rows.push_back(std::move(row));
          }
          files.emplace_back("data.txt", io::format_matrix(rows));
        } else {
          std::vector<std::vector<double>> rows;
          for (Eigen::Index i = 0; i < inst.X.rows(); ++i) {
            std::vector<double> row;
            for (Eigen::Index k = 0; k < inst.X.cols(); ++k) row.push_back(inst.X(i, k));
            row.push_back(inst.y(i));
            rows.push_back(std::move(row));
          }
          files.emplace_back("data.txt", io::format_matrix(rows));
        }
      },
      instance);
  return files;
}

InstanceResult run_instance(const ExperimentConfig& config, std::size_t replicate, Mode mode) {
  InstanceResult result;
  result.instance_id = instance_id(config, replicate);
  const auto start = std::chrono::steady_clock::now();
  Recorder rec(result);
  try {
    const std::uint64_t seed = instance_seed(config, replicate);
    switch (config.task) {
      case Task::classification:
        run_classification_task(rec, config, seed, mode);
        break;
      case Task::regression:
        run_regression_task(rec, config, seed, mode);
        break;
      case Task::density:
        run_density_task(rec, config, seed, mode);
        break;
      case Task::logistic:
        run_logistic_task(rec, config, seed, mode);
        break;
      case Task::vaw:
        run_vaw_task(rec, config, seed, mode);
        break;
    }
    result.ok = std::all_of(result.certificates.begin(), result.certificates.end(),
                            [](const BoundCertificate& c) { return c.passed(); }) &&
                std::all_of(result.checks.begin(), result.checks.end(), [](const Check& c) { return c.passed; });
  } catch (const std::exception& e) {
    result.ok = false;
    result.failed_stage = rec.current_stage();
    result.error = e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

bool RunReport::ok() const {
  return !results.empty() &&
         std::all_of(results.begin(), results.end(), [](const InstanceResult& r) { return r.ok; });
}

RunReport run_experiments(const std::vector<ExperimentConfig>& configs, Mode mode) {
  RunReport report;
  report.configs = configs;
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (std::size_t r = 0; r < configs[c].replicates; ++r) jobs.emplace_back(c, r);
  }
  report.results.resize(jobs.size());
  const auto start = std::chrono::steady_clock::now();
  const auto count = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t j = 0; j < count; ++j) {
    const auto [c, r] = jobs[static_cast<std::size_t>(j)];
    report.results[static_cast<std::size_t>(j)] = run_instance(configs[c], r, mode);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string csv_text(const RunReport& report) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& result : report.results) {
    if (!result.row) continue;
    const CsvRow& r = *result.row;
    out += r.instance_id + "," + std::to_string(r.n) + "," + std::to_string(r.d) + "," + csv_number(r.loo) + "," +
           csv_number(r.erm_per_n) + "," + csv_number(r.bound) + "," + csv_number(r.slack) + "," +
           csv_number(r.rho_hat) + "\n";
  }
  return out;
}

std::string report_text(const RunReport& report) {
  std::ostringstream out;
  std::size_t passed = 0;
  for (const auto& r : report.results) passed += r.ok ? 1 : 0;
  out << "# mlsa run report\n";
  out << "status = " << (report.ok() ? "pass" : "fail") << '\n';
  out << "instances = " << report.results.size() << '\n';
  out << "passed = " << passed << '\n';
  out << "failed = " << report.results.size() - passed << '\n';
  out << "seconds = " << io::format_double(report.seconds) << '\n';
  for (std::size_t c = 0; c < report.configs.size(); ++c) {
    out << "\n[config " << c << "]\n" << report.configs[c].to_text();
  }
  for (const auto& r : report.results) {
    out << "\n[instance " << r.instance_id << "]\n";
    out << "status = " << (r.ok ? "pass" : "fail") << '\n';
    if (!r.failed_stage.empty()) {
      out << "failed_stage = " << r.failed_stage << '\n';
      out << "error = " << r.error << '\n';
    }
    out << "seconds = " << io::format_double(r.seconds) << '\n';
    for (const auto& [key, value] : r.details) out << "detail." << key << " = " << value << '\n';
    for (const auto& cert : r.certificates) {
      const std::string p = "certificate." + cert.name + ".";
      out << p << "passed = " << (cert.passed() ? "true" : "false") << '\n';
      out << p << "lhs = " << io::format_double(cert.lhs) << '\n';
      out << p << "rhs = " << io::format_double(cert.rhs) << '\n';
      out << p << "slack = " << io::format_double(cert.slack) << '\n';
      out << p << "tolerance = " << io::format_double(cert.tolerance) << '\n';
      out << p << "erm_loss = " << io::format_double(cert.components.erm_loss) << '\n';
      out << p << "t_max = " << io::format_double(cert.components.t_max) << '\n';
      out << p << "delta = " << io::format_double(cert.components.delta) << '\n';
      out << p << "c_g = " << io::format_double(cert.components.c_g) << '\n';
      out << p << "rho = " << io::format_double(cert.components.rho) << '\n';
      out << p << "multiplier = " << io::format_double(cert.components.multiplier) << '\n';
    }
    for (const auto& check : r.checks) {
      out << "check." << check.name << " = " << (check.passed ? "pass" : "fail");
      if (!check.detail.empty()) out << " (" << check.detail << ")";
      out << '\n';
    }
  }
  return out.str();
}

std::string summarize_csv(const std::vector<std::string>& csv_texts) {
  struct Group {
    std::size_t rows = 0;
    double loo = 0.0;
    double bound = 0.0;
    double min_slack = std::numeric_limits<double>::infinity();
    double rho = 0.0;
    std::size_t rho_rows = 0;
    std::size_t passing = 0;
  };
  std::map<std::string, Group> groups;
  for (const auto& text : csv_texts) {
    std::istringstream lines(text);
    std::string line;
    bool header = true;
    while (std::getline(lines, line)) {
      if (line.empty()) continue;
      if (header) {
        if (line != kCsvHeader) throw std::invalid_argument("summary: unexpected CSV header '" + line + "'");
        header = false;
        continue;
      }
      const auto f = split_csv_line(line);
      if (f.size() != 8) throw std::invalid_argument("summary: malformed CSV row '" + line + "'");
      const std::string key = f[0].substr(0, f[0].rfind('/'));
      Group& g = groups[key];
      const double loo = std::stod(f[3]);
      const double bound = std::stod(f[5]);
      const double slack = std::stod(f[6]);
      const double rho = std::stod(f[7]);
      ++g.rows;
      g.loo += loo;
      g.bound += bound;
      g.min_slack = std::min(g.min_slack, slack);
      if (!std::isnan(rho)) {
        g.rho += rho;
        ++g.rho_rows;
      }
      if (slack >= -kNumericTolerance) ++g.passing;
    }
  }
  std::ostringstream out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-52s %5s %12s %12s %12s %8s %8s\n", "group", "rows", "mean_loo", "mean_bound",
                "min_slack", "rho_hat", "passing");
  out << buf;
  for (const auto& [key, g] : groups) {
    const double rows = static_cast<double>(g.rows);
    const double rho = g.rho_rows > 0 ? g.rho / static_cast<double>(g.rho_rows) : kNaN;
    std::snprintf(buf, sizeof buf, "%-52s %5zu %12.6g %12.6g %12.6g %8.4g %5zu/%zu\n", key.c_str(), g.rows,
                  g.loo / rows, g.bound / rows, g.min_slack, rho, g.passing, g.rows);
    out << buf;
  }
  return out.str();
}

}  // namespace mlsa::harness
