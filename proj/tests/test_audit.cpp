#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "mlsa/audit.hpp"
#include "mlsa/classification.hpp"
#include "mlsa/reference.hpp"
#include "mlsa/regression.hpp"
#include "oracles.hpp"

using namespace mlsa;

namespace {

struct OracleLevel {
  std::size_t minus = 0;
  std::size_t plus = 0;
  bool sandwich = true;
};

OracleLevel exhaustive_level(const PredictionTable& table, const LabeledSample& sample, const LossModel& loss,
                             double t, double delta) {
  const auto L = oracle::loss_matrix(table, sample, loss);
  const auto full = oracle::column_sums(L, table.rows());
  const auto lower = oracle::members_within(full, std::max(t - delta, 0.0));
  const auto upper = oracle::members_within(full, t + delta);
  OracleLevel out{lower.size(), upper.size(), true};
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const auto mid = oracle::members_within(oracle::column_sums(L, i), t);
    out.sandwich = out.sandwich && std::includes(mid.begin(), mid.end(), lower.begin(), lower.end()) &&
                   std::includes(upper.begin(), upper.end(), mid.begin(), mid.end());
  }
  return out;
}

PredictionTable four_by_three() {
  return PredictionTable(4, 3, {0, 1, 1,  //
                                1, 1, 0,  //
                                0, 0, 1,  //
                                1, 0, 0},
                         PredictionTable::Duplicates::keep);
}

GeneralizationTask threshold_task(double flip) {
  GeneralizationTask task;
  task.draw = [flip](Rng& rng, std::size_t points) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    classification::Covariates cov;
    LabeledSample sample;
    for (std::size_t i = 0; i < points; ++i) {
      const double x = unif(rng);
      cov.values.push_back(x);
      const double clean = x >= 0.5 ? 1.0 : 0.0;
      sample.responses.push_back(unif(rng) < flip ? 1.0 - clean : clean);
    }
    return GeneralizationDraw{
        classification::restrict_class(classification::ClassDescriptor::parse("thresholds"), cov), sample};
  };
  task.grid = [](std::size_t points, std::size_t) {
    return classification::classification_grid(1, std::max<std::size_t>(points, 3));
  };
  task.loss = classification::zero_one_loss();
  task.agg = Aggregator::majority();
  task.min_risk = std::min(flip, 0.5);
  task.multiplier = 8.0;
  task.complexity = [](std::size_t points) { return 200.0 * std::log(static_cast<double>(points)); };
  return task;
}

}  // namespace

TEST_CASE("averaging with squared loss never violates stability") {
  std::mt19937_64 rng(1);
  const auto table = oracle::random_table(rng, 20, 30, false);
  const auto sample = oracle::random_sample(rng, 20, false);
  const auto report = check_agg_assumption(Aggregator::mean(), regression::squared_loss(), table, sample, 500, 9);
  CHECK(report.trials == 500);
  CHECK(report.passed());
}

TEST_CASE("averaging under a non-convex loss is caught") {
  const PredictionTable table(1, 2, {0.0, 1.0}, PredictionTable::Duplicates::keep);
  const LabeledSample sample{{0.0}};
  const auto report =
      check_agg_assumption(Aggregator::mean(), classification::zero_one_loss(), table, sample, 200, 4);
  REQUIRE_FALSE(report.passed());
  REQUIRE(report.first_violation);
  CHECK(report.first_violation->members == std::vector<std::size_t>{0, 1});
  CHECK(report.first_violation->aggregated_loss == 1.0);
  CHECK(report.first_violation->mean_loss == 0.5);
}

TEST_CASE("a wrong majority vote costs 1 while the member average can be as low as one half") {
  // two members vote wrong, one votes right
  const PredictionTable table(1, 3, {1.0, 1.0, 0.0}, PredictionTable::Duplicates::keep);
  const LabeledSample sample{{0.0}};
  const auto loss = classification::zero_one_loss();
  const std::vector<std::size_t> all{0, 1, 2};
  const double aggregated = loss(majority_vote(all, table, 0), 0.0);
  double mean = 0.0;
  for (std::size_t j : all) mean += loss(table(0, j), 0.0) / 3.0;
  CHECK(aggregated == 1.0);
  CHECK(mean == doctest::Approx(2.0 / 3.0));
  CHECK(aggregated <= 2.0 * mean);
  const auto report = check_agg_assumption(Aggregator::majority(), loss, table, sample, 200, 2);
  CHECK_FALSE(report.passed());
}

TEST_CASE("a wrong majority vote always has at least half of the members wrong") {
  std::mt19937_64 rng(8);
  const auto loss = classification::zero_one_loss();
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(rng() % 9);
    const auto table = oracle::random_table(rng, 1, m, true);
    const double y = static_cast<double>(rng() % 2);
    std::vector<std::size_t> all(m);
    std::iota(all.begin(), all.end(), std::size_t{0});
    double mean = 0.0;
    for (std::size_t j : all) mean += loss(table(0, j), y) / static_cast<double>(m);
    if (loss(majority_vote(all, table, 0), y) == 1.0) CHECK(mean >= 0.5);
  }
}

TEST_CASE("loss bound audit") {
  std::mt19937_64 rng(3);
  const auto table = oracle::random_table(rng, 10, 5, false);
  const auto sample = oracle::random_sample(rng, 10, false);
  CHECK(audit_loss_bound(table, sample, regression::squared_loss()).passed());
  auto tight = regression::squared_loss();
  tight.delta_bound = 1e-3;
  CHECK_FALSE(audit_loss_bound(table, sample, tight).passed());
}

TEST_CASE("a single hypothesis makes every level good") {
  const PredictionTable table(5, 1, {0, 1, 1, 0, 1}, PredictionTable::Duplicates::keep);
  const LabeledSample sample{{0, 0, 1, 1, 1}};
  const auto audit = grid_growth_audit(table, sample, classification::zero_one_loss(),
                                       classification::classification_grid(1, 5), 2.0);
  CHECK(audit.good_fraction == 1.0);
  for (const auto& level : audit.per_level) CHECK(level.ratio == 1.0);
}

TEST_CASE("thresholds on twenty points meet the three-quarter growth fraction") {
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    classification::Covariates cov;
    LabeledSample sample;
    for (int i = 0; i < 20; ++i) {
      cov.values.push_back(unif(rng));
      sample.responses.push_back(unif(rng) < 0.3 ? 1.0 : 0.0);
    }
    const auto table = classification::restrict_class(classification::ClassDescriptor::parse("thresholds"), cov);
    const auto audit = grid_growth_audit(table, sample, classification::zero_one_loss(),
                                         classification::classification_grid(1, 20), 2.0);
    CHECK(audit.good_fraction >= 0.75);
    CHECK(audit.sandwich_violations() == 0);
  }
}

TEST_CASE("growth audit matches exhaustive level-set enumeration") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(rng() % 8);
    const auto table = oracle::random_table(rng, n, 4, true);
    const auto sample = oracle::random_sample(rng, n, true);
    const auto grid = ToleranceGrid::multiples(1.0, 6);
    const auto audit = grid_growth_audit(table, sample, classification::zero_one_loss(), grid, 2.0);
    std::size_t good = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto expected = exhaustive_level(table, sample, classification::zero_one_loss(), grid.levels()[k], 1.0);
      const auto& got = audit.per_level[k];
      CHECK(got.size_minus == expected.minus);
      CHECK(got.size_plus == expected.plus);
      CHECK(got.sandwich_ok == expected.sandwich);
      const double ratio = static_cast<double>(expected.plus) / static_cast<double>(expected.minus);
      CHECK(got.ratio == ratio);
      const bool is_good = expected.sandwich && ratio <= 2.0;
      CHECK(got.good == is_good);
      good += is_good ? 1 : 0;
    }
    CHECK(audit.good_fraction == static_cast<double>(good) / 6.0);
  }
}

TEST_CASE("parallel growth audit matches the serial reference") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng() % 25);
    const std::size_t m = 1 + static_cast<std::size_t>(rng() % 40);
    const bool binary = trial % 2 == 0;
    const auto table = oracle::random_table(rng, n, m, binary);
    const auto sample = oracle::random_sample(rng, n, binary);
    const auto loss = binary ? classification::zero_one_loss() : regression::squared_loss();
    const auto grid = binary ? classification::classification_grid(1, n) : regression::grid_for_class(1.0, m);
    const auto fast = grid_growth_audit(table, sample, loss, grid, 2.0);
    const auto slow = reference::grid_growth_audit(table, sample, loss, grid, 2.0);
    REQUIRE(fast.per_level.size() == slow.per_level.size());
    for (std::size_t k = 0; k < fast.per_level.size(); ++k) {
      CHECK(fast.per_level[k].size_minus == slow.per_level[k].size_minus);
      CHECK(fast.per_level[k].size_plus == slow.per_level[k].size_plus);
      CHECK(fast.per_level[k].sandwich_violations == slow.per_level[k].sandwich_violations);
      CHECK(fast.per_level[k].good == slow.per_level[k].good);
    }
    CHECK(fast.good_fraction == slow.good_fraction);
  }
}

TEST_CASE("single-level guarantee on a hand-enumerated instance") {
  // every column errs twice; at t = 1 the leave-one-out votes are 1, 1, 0, 0
  const auto table = four_by_three();
  const LabeledSample sample{{0, 1, 1, 0}};
  const auto cert =
      verify_single_level(table, sample, classification::zero_one_loss(), Aggregator::majority(), 1.0, 1.0, 2.0);
  CHECK(cert.lhs == 0.5);
  CHECK(cert.rhs == doctest::Approx(2.0));
  CHECK(cert.passed());
}

TEST_CASE("single-level guarantee for one hypothesis") {
  const PredictionTable table(4, 1, {0, 1, 1, 1}, PredictionTable::Duplicates::keep);
  const LabeledSample sample{{0, 0, 1, 1}};
  const auto cert =
      verify_single_level(table, sample, classification::zero_one_loss(), Aggregator::majority(), 3.0, 1.0, 2.0);
  CHECK(cert.lhs == 0.25);
  CHECK(cert.passed());
}

TEST_CASE("single-level guarantee at every good level of realizable thresholds") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  classification::Covariates cov;
  LabeledSample sample;
  for (int i = 0; i < 25; ++i) {
    cov.values.push_back(unif(rng));
    sample.responses.push_back(cov.values.back() >= 0.4 ? 1.0 : 0.0);
  }
  const auto table = classification::restrict_class(classification::ClassDescriptor::parse("thresholds"), cov);
  const auto grid = classification::classification_grid(1, 25);
  const auto audit = grid_growth_audit(table, sample, classification::zero_one_loss(), grid, 2.0);
  for (const auto& level : audit.per_level) {
    if (!level.good) continue;
    const auto cert = verify_single_level(table, sample, classification::zero_one_loss(), Aggregator::majority(),
                                          level.t, 1.0, 2.0);
    CHECK(cert.slack >= 0.0);
  }
}

TEST_CASE("main theorem multiplier is 8/n at rho = 3/4 and c_g = 2") {
  std::mt19937_64 rng(31);
  const auto table = oracle::random_table(rng, 30, 12, true);
  const auto sample = oracle::random_sample(rng, 30, true);
  const auto run = classification::run_classification(table, sample, 1);
  CHECK(run.main.nominal.components.rho == 0.75);
  CHECK(run.main.nominal.components.c_g == 2.0);
  CHECK(run.main.nominal.components.multiplier == doctest::Approx(8.0 / 30.0));
  CHECK(run.main.measured.components.rho == run.audit.good_fraction);
}

TEST_CASE("main theorem refuses a grid without a good majority") {
  MlsaOutput out;
  out.grid = ToleranceGrid::multiples(1.0, 2);
  out.n = 1;
  out.per_level = {0, 0};
  out.medians = {0};
  GrowthAudit audit;
  audit.good_fraction = 0.5;
  audit.c_g = 2.0;
  audit.delta = 1.0;
  CHECK_THROWS_AS(verify_main_theorem(out, audit, 0.0, out.grid), GridMajorityFailure);
}

TEST_CASE("main theorem holds for one hypothesis") {
  const PredictionTable table(6, 1, {0, 1, 1, 0, 0, 1}, PredictionTable::Duplicates::keep);
  const LabeledSample sample{{0, 1, 0, 0, 1, 1}};
  const auto run = classification::run_classification(table, sample, 1);
  CHECK(run.main.measured.lhs == doctest::Approx(2.0 / 6.0));
  CHECK(run.main.measured.passed());
  CHECK(run.main.nominal.passed());
}

TEST_CASE("main theorem and corollary across 200 random classification instances") {
  std::mt19937_64 rng(200);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const bool intervals = trial % 2 == 1;
    const std::size_t n = 5 + static_cast<std::size_t>(rng() % 36);
    const double flip = unif(rng) * 0.4;
    classification::Covariates cov;
    LabeledSample sample;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = unif(rng);
      cov.values.push_back(x);
      const double clean = intervals ? (x > 0.2 && x < 0.6 ? 1.0 : 0.0) : (x >= 0.5 ? 1.0 : 0.0);
      sample.responses.push_back(unif(rng) < flip ? 1.0 - clean : clean);
    }
    const auto desc = classification::ClassDescriptor::parse(intervals ? "intervals" : "thresholds");
    const auto table = classification::restrict_class(desc, cov);
    const auto run = classification::run_classification(table, sample, desc.vc_dimension());
    failures += run.main.measured.passed() && run.main.nominal.passed() && run.corollary.passed() ? 0 : 1;
  }
  CHECK(failures == 0);
}

TEST_CASE("generalization: realizable thresholds") {
  const auto report = simulate_generalization(threshold_task(0.0), 30, 300, 77);
  CHECK(report.min_risk == 0.0);
  CHECK(report.mean_empirical_oracle == 0.0);
  CHECK(report.mean_test_loss <= 200.0 * std::log(31.0) / 31.0 + 2.0 * report.stderr_test_loss);
  CHECK(report.holds(2.0));
}

TEST_CASE("generalization: pure label noise gives one half") {
  const auto report = simulate_generalization(threshold_task(0.5), 20, 1000, 78);
  CHECK(std::abs(report.mean_test_loss - 0.5) <= 3.0 * report.stderr_test_loss);
}

TEST_CASE("generalization: a single training point") {
  const auto report = simulate_generalization(threshold_task(0.1), 1, 50, 79);
  CHECK(std::isfinite(report.mean_test_loss));
  CHECK(std::isfinite(report.stderr_test_loss));
  CHECK(std::isfinite(report.bound));
}

TEST_CASE("generalization simulation is reproducible") {
  const auto a = simulate_generalization(threshold_task(0.2), 15, 100, 5);
  const auto b = simulate_generalization(threshold_task(0.2), 15, 100, 5);
  CHECK(a.mean_test_loss == b.mean_test_loss);
  CHECK(a.stderr_test_loss == b.stderr_test_loss);
}

TEST_CASE("certificates report slack against their tolerance") {
  const auto ok = make_certificate("c", 1.0, 2.0, {});
  CHECK(ok.slack == 1.0);
  CHECK(ok.passed());
  const auto edge = make_certificate("c", 2.0 + 1e-12, 2.0, {});
  CHECK(edge.passed());
  const auto bad = make_certificate("c", 2.1, 2.0, {});
  CHECK_FALSE(bad.passed());
  CHECK(make_certificate("c", 2.1, 2.0, {}, 0.2).passed());
}
