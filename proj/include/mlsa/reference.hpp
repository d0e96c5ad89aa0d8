#ifndef MLSA_REFERENCE_HPP
#define MLSA_REFERENCE_HPP

// Serial, straight-line versions of the parallel kernels. They materialize
// every level set through the public level_set operation and are only meant
// for cross-checking and benchmarking on small instances.

#include "mlsa/audit.hpp"
#include "mlsa/core.hpp"

namespace mlsa::reference {

MlsaOutput run_mlsa(const PredictionTable& table, const LabeledSample& sample,
                    const LossModel& loss, const ToleranceGrid& grid, const Aggregator& agg);

GrowthAudit grid_growth_audit(const PredictionTable& table, const LabeledSample& sample,
                              const LossModel& loss, const ToleranceGrid& grid, double c_g);

}  // namespace mlsa::reference

#endif  // MLSA_REFERENCE_HPP
