#ifndef MLSA_DENSITY_HPP
#define MLSA_DENSITY_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mlsa/audit.hpp"
#include "mlsa/core.hpp"

namespace mlsa::density {

/**
 * Finite class of probability vectors over a finite space X = {0, ..., |X|-1}.
 * The log-ratio bound is always recomputed from the entries; it is infinite
 * when any entry is zero.
 */
class DensityClass {
 public:
  DensityClass() = default;

  /// Each row is one density and must sum to 1 within 1e-12.
  static DensityClass from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return count_; }
  std::size_t support() const { return support_; }
  double operator()(std::size_t p, std::size_t x) const { return probs_[p * support_ + x]; }
  std::vector<double> row(std::size_t p) const;
  std::vector<std::vector<double>> rows() const;

  /// max over x of (max_p ln p(x) - min_p ln p(x)).
  double log_ratio_bound() const { return log_ratio_bound_; }

 private:
  std::size_t count_ = 0;
  std::size_t support_ = 0;
  std::vector<double> probs_;
  double log_ratio_bound_ = 0.0;
};

/// Brute-force max of |ln p(x) / q(x)| over all triples.
double exhaustive_log_ratio(const DensityClass& cls);

/// -ln v. Decreasing in the probability value; delta is the per-row spread M.
LossModel log_loss(double M);

struct DensityInstance {
  PredictionTable table;  // entry (i, j) = p_j(x_i), duplicates kept
  LabeledSample sample;   // responses are the observed points
  LossModel loss;
};

/// Rejects observations outside X and classes with an infinite log-ratio bound.
DensityInstance log_loss_table(const DensityClass& cls, const std::vector<std::size_t>& observations);

/// Levels {M, ..., ceil(12 ln |P|) M}, gap M. Requires M > 0 and |P| >= 2.
ToleranceGrid density_grid(double M, std::size_t class_size);

/// Whether the class has a single density or M = 0; MLSA is then bypassed.
bool is_degenerate(std::size_t class_size, double M);

/// {(1 - eps) p + eps nu}, nu the class mean when |X| >= |P| and uniform otherwise.
DensityClass smooth_class(const DensityClass& cls, double epsilon);

/// ln(1 / eps) + min(ln |P|, ln |X|).
double smoothed_bound(std::size_t class_size, std::size_t support, double epsilon);

/// L_S(p) = -sum ln p(x_i) for every density (possibly infinite).
std::vector<double> class_losses(const DensityClass& cls, const std::vector<std::size_t>& observations);

/// LOO <= 8 min L_S / n + 104 M ln |P| / n. Infinite M is rejected.
BoundCertificate verify_cor_density(const MlsaOutput& output, const DensityClass& cls,
                                    const std::vector<std::size_t>& observations);

struct DensityRun {
  MlsaOutput output;
  std::optional<GrowthAudit> audit;  // absent for degenerate classes
  double erm = 0.0;
  std::optional<MainTheoremCertificates> main;
  BoundCertificate corollary;
};

/// Averaging MLSA on the density grid for an unsmoothed class with finite M.
DensityRun run_density(const DensityClass& cls, const std::vector<std::size_t>& observations,
                       double c_g = 2.0);

struct SmoothedRun {
  DensityClass smoothed;
  double epsilon = 0.0;
  double gap = 0.0;  // M_eps
  MlsaOutput output;
  std::optional<GrowthAudit> audit;
  BoundCertificate general;                      // 8/n (min L + 13 M_eps ln|P|) + 16 eps
  std::optional<BoundCertificate> one_over_n;    // eps = 1/n specialization
  BoundCertificate inflation;                    // L_S(p*_eps) <= L_S(p*) + 2 n eps
};

/// Smooths the class, runs MLSA on the smoothed class with gap M_eps, and
/// certifies the bound against the unsmoothed class's best loss.
SmoothedRun run_smoothed(const DensityClass& cls, const std::vector<std::size_t>& observations,
                         double epsilon, double c_g = 2.0);

}  // namespace mlsa::density

#endif  // MLSA_DENSITY_HPP
