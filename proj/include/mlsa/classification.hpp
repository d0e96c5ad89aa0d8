#ifndef MLSA_CLASSIFICATION_HPP
#define MLSA_CLASSIFICATION_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mlsa/audit.hpp"
#include "mlsa/core.hpp"

namespace mlsa::classification {

using mlsa::majority_vote;

/// 1{y' != y}; gap 1, monotone in distance on {0, 1}.
LossModel zero_one_loss();

/// Levels {1, ..., ceil(24 d ln n)} with gap 1. Requires d >= 1 and n >= 3.
ToleranceGrid classification_grid(std::size_t d, std::size_t n);

enum class ClassFamily { thresholds, intervals, unions_of_intervals, axis_rectangles, explicit_table };

/// Names a VC class whose restriction to the covariates is enumerated.
struct ClassDescriptor {
  ClassFamily family = ClassFamily::thresholds;
  std::size_t intervals = 1;                 // k for unions_of_intervals
  std::optional<PredictionTable> table;      // explicit_table only
  std::size_t declared_vc_dimension = 0;     // explicit_table only

  /// "thresholds", "intervals", "unions:<k>", "rectangles".
  static ClassDescriptor parse(const std::string& text);
  static ClassDescriptor explicit_class(PredictionTable table, std::size_t vc_dimension);

  std::string name() const;
  std::size_t vc_dimension() const;
  /// Covariate dimension the family expects (2 for rectangles, else 1).
  std::size_t covariate_dimension() const;
};

/// n points of dimension `dim`, row-major.
struct Covariates {
  std::size_t dim = 1;
  std::vector<double> values;

  std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
  double at(std::size_t i, std::size_t c) const { return values[i * dim + c]; }
};

/// Upper cap on n * (number of labelings) for enumerated classes.
inline constexpr std::size_t kMaxTableEntries = 40'000'000;

/// Distinct labelings of the covariates realized by the class. One-dimensional
/// families reject repeated covariate values.
PredictionTable restrict_class(const ClassDescriptor& descriptor, const Covariates& covariates);

/// sum_{k <= d} C(n, k), saturating at SIZE_MAX.
std::size_t sauer_bound(std::size_t n, std::size_t d);

/// LOO <= 8 min L_S / n + 200 d ln n / n. Throws if the output was not
/// produced on classification_grid(d, n).
BoundCertificate verify_cor_loo01(const MlsaOutput& output, const PredictionTable& table,
                                  const LabeledSample& sample, std::size_t d);

struct ClassificationRun {
  MlsaOutput output;
  GrowthAudit audit;
  double erm = 0.0;
  MainTheoremCertificates main;
  BoundCertificate corollary;
};

/// MLSA with majority vote on the classification grid, plus audit and certificates.
ClassificationRun run_classification(const PredictionTable& table, const LabeledSample& sample,
                                     std::size_t d, double c_g = 2.0);

}  // namespace mlsa::classification

#endif  // MLSA_CLASSIFICATION_HPP
