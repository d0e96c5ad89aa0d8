#ifndef MLSA_HARNESS_HPP
#define MLSA_HARNESS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mlsa/audit.hpp"
#include "mlsa/classification.hpp"
#include "mlsa/density.hpp"
#include "mlsa/logistic.hpp"

namespace mlsa::harness {

enum class Task { classification, regression, density, logistic, vaw };

Task parse_task(const std::string& name);
std::string task_name(Task task);

/// Parameters of one experiment. Fields that a task does not use are ignored.
struct ExperimentConfig {
  Task task = Task::classification;
  std::optional<std::uint64_t> seed;
  std::size_t n = 50;
  std::size_t d = 1;            // logistic / vaw dimension
  std::string cls = "thresholds";  // classification descriptor
  std::size_t m = 8;            // regression class size, density |P|
  std::string loss = "squared";
  double M = 1.0;               // regression loss scale
  std::size_t support = 8;      // density |X|
  double epsilon = 0.0;         // smoothing; 0 means 1/n
  double sparsity = 0.0;        // density: chance an entry is zero
  double noise = 0.0;           // label flips, response noise, regression noise
  double r = 1.0;
  double R = 1.0;
  double theta_norm = 3.0;      // planted logistic parameter norm
  std::size_t rank = 0;         // vaw: 0 means full rank
  std::size_t replicates = 1;
  std::size_t mc_samples = 20000;
  std::size_t mc_min_accepted = 100;
  double c_g = 2.0;
  std::size_t agg_trials = 200;
  std::string data_file;
  std::string class_file;
  std::string observations_file;
  std::string table_file;
  std::string responses_file;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  /// key = value lines in a fixed order.
  std::string to_text() const;
};

/// Ordered key -> value list. A value with commas is a sweep axis.
using RawConfig = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// `key = value` lines; '#' starts a comment. Unknown keys are rejected.
RawConfig parse_config_text(const std::string& text);
RawConfig load_config_file(const std::string& path);

/// Replaces or appends a key with a single (possibly comma-separated) value.
void set_value(RawConfig& raw, const std::string& key, const std::string& value);

/// Cartesian product over every listed key, in file order with the last key varying fastest.
std::vector<ExperimentConfig> expand(const RawConfig& raw);

/// The single configuration of a raw config; throws if any key lists several values.
ExperimentConfig single(const RawConfig& raw);

struct ClassificationInstance {
  classification::ClassDescriptor descriptor;
  classification::Covariates covariates;
  std::vector<double> labels;
  std::vector<double> clean_labels;
};

struct RegressionInstance {
  PredictionTable table;
  LabeledSample sample;
};

struct DensityData {
  density::DensityClass cls;
  std::vector<std::size_t> observations;
};

struct VawInstance {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

using Instance = std::variant<ClassificationInstance, RegressionInstance, DensityData,
                              logistic::LogisticProblem, VawInstance>;

/// "<task>/<parameters>/rep<k>"; stable across runs.
std::string instance_id(const ExperimentConfig& config, std::size_t replicate);

/// Seed of one instance, derived from the config seed and the instance id.
std::uint64_t instance_seed(const ExperimentConfig& config, std::size_t replicate);

/// Deterministic instance from the config (or its input files) and a seed.
Instance generate_instance(const ExperimentConfig& config, std::uint64_t seed);

/// Text files describing the instance, as (file suffix, contents).
std::vector<std::pair<std::string, std::string>> instance_files(const Instance& instance);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CsvRow {
  std::string instance_id;
  std::size_t n = 0;
  std::size_t d = 0;
  double loo = 0.0;
  double erm_per_n = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  double rho_hat = 0.0;  // NaN when there is no growth audit
};

enum class Mode { full, audit_only };

struct InstanceResult {
  std::string instance_id;
  bool ok = false;
  std::string failed_stage;  // set when a stage threw
  std::string error;
  std::optional<CsvRow> row;
  std::vector<BoundCertificate> certificates;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> details;
  double seconds = 0.0;
};

InstanceResult run_instance(const ExperimentConfig& config, std::size_t replicate, Mode mode);

struct RunReport {
  std::vector<ExperimentConfig> configs;
  std::vector<InstanceResult> results;
  double seconds = 0.0;

  bool ok() const;
};

/// Runs every replicate of every config. Instances run in parallel; results
/// keep the config / replicate order.
RunReport run_experiments(const std::vector<ExperimentConfig>& configs, Mode mode);

inline constexpr const char* kCsvHeader = "instance-id,n,d,loo,erm_per_n,bound,slack,rho_hat";

/// Flat CSV with the header above. Contains no timings.
std::string csv_text(const RunReport& report);

/// Structured key = value report with config echo, certificates, checks and timings.
std::string report_text(const RunReport& report);

/// Groups CSV rows by instance id without the replicate suffix and tabulates
/// count, mean LOO, mean bound, min slack, mean rho_hat and passing rows.
std::string summarize_csv(const std::vector<std::string>& csv_texts);

}  // namespace mlsa::harness

#endif  // MLSA_HARNESS_HPP
