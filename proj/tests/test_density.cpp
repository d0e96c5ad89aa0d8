#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mlsa/audit.hpp"
#include "mlsa/density.hpp"

using namespace mlsa;
using namespace mlsa::density;

namespace {

DensityClass two_point_class() { return DensityClass::from_rows({{0.9, 0.1}, {0.1, 0.9}}); }

DensityClass random_class(std::mt19937_64& rng, std::size_t count, std::size_t support) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<std::vector<double>> rows(count, std::vector<double>(support));
  for (auto& row : rows) {
    double sum = 0.0;
    for (double& v : row) sum += (v = expo(rng) + 0.05);
    for (double& v : row) v /= sum;
  }
  return DensityClass::from_rows(rows);
}

std::vector<std::size_t> draws(std::mt19937_64& rng, const DensityClass& cls, std::size_t p, std::size_t n) {
  const auto row = cls.row(p);
  std::discrete_distribution<std::size_t> dist(row.begin(), row.end());
  std::vector<std::size_t> out(n);
  for (auto& x : out) x = dist(rng);
  return out;
}

}  // namespace

TEST_CASE("uniform density has loss ln of the support size") {
  const auto cls = DensityClass::from_rows({{0.25, 0.25, 0.25, 0.25}, {0.4, 0.2, 0.2, 0.2}});
  const auto inst = log_loss_table(cls, {0, 1, 2, 3});
  for (std::size_t i = 0; i < 4; ++i) CHECK(inst.loss(inst.table(i, 0), inst.sample.responses[i]) == doctest::Approx(std::log(4.0)));
  CHECK(cls.log_ratio_bound() == doctest::Approx(std::log(0.4 / 0.25)));
}

TEST_CASE("zero entries make the ratio bound infinite and are rejected") {
  const auto cls = DensityClass::from_rows({{1.0, 0.0}, {0.5, 0.5}});
  CHECK(std::isinf(cls.log_ratio_bound()));
  CHECK_THROWS(log_loss_table(cls, {0, 0}));
  CHECK_THROWS(verify_cor_density(MlsaOutput{}, cls, {0}));
}

TEST_CASE("class validation") {
  CHECK_THROWS(DensityClass::from_rows({{0.5, 0.6}}));
  CHECK_THROWS(DensityClass::from_rows({{1.5, -0.5}}));
  CHECK_THROWS(DensityClass::from_rows({{0.5, 0.5}, {1.0}}));
  CHECK_THROWS(DensityClass::from_rows({}));
  CHECK_THROWS(log_loss_table(two_point_class(), {0, 2}));
}

TEST_CASE("log-ratio bound matches exhaustive search") {
  const auto cls = two_point_class();
  CHECK(exhaustive_log_ratio(cls) == doctest::Approx(std::log(9.0)));
  CHECK(cls.log_ratio_bound() == doctest::Approx(std::log(9.0)));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = random_class(rng, 1 + trial % 5, 1 + trial % 7);
    CHECK(c.log_ratio_bound() == doctest::Approx(exhaustive_log_ratio(c)).epsilon(1e-12));
  }
}

TEST_CASE("density grid") {
  const auto g = density_grid(1.0, 2);
  CHECK(g.size() == 9);
  CHECK(g.gap() == 1.0);
  const auto g3 = density_grid(3.0, 2);
  for (std::size_t k = 0; k < 9; ++k) CHECK(g3.levels()[k] == doctest::Approx(3.0 * g.levels()[k]));
  CHECK(g3.gap() == 3.0);
  CHECK_THROWS(density_grid(1.0, 1));
  CHECK_THROWS(density_grid(0.0, 4));
}

TEST_CASE("log loss is decreasing and its spread is audited") {
  const auto loss = log_loss(1.0);
  CHECK(loss(0.5, 0) > loss(0.6, 0));
  CHECK(loss.monotonicity == Monotonicity::decreasing_in_prediction);
  const auto cls = two_point_class();
  auto inst = log_loss_table(cls, {0, 1, 1});
  CHECK(audit_loss_bound(inst.table, inst.sample, inst.loss).passed());
  inst.loss.delta_bound = 1.0;
  CHECK_FALSE(audit_loss_bound(inst.table, inst.sample, inst.loss).passed());
}

TEST_CASE("smoothing example") {
  const auto smoothed = smooth_class(two_point_class(), 0.1);
  CHECK(smoothed(0, 0) == doctest::Approx(0.86));
  CHECK(smoothed(0, 1) == doctest::Approx(0.14));
  CHECK(smoothed(1, 0) == doctest::Approx(0.14));
  for (std::size_t p = 0; p < 2; ++p) CHECK(smoothed(p, 0) + smoothed(p, 1) == doctest::Approx(1.0));
  const double bound = smoothed_bound(2, 2, 0.1);
  CHECK(bound == doctest::Approx(2.9957).epsilon(1e-4));
  CHECK(exhaustive_log_ratio(smoothed) <= bound);
  CHECK(smoothed.log_ratio_bound() == doctest::Approx(std::log(0.86 / 0.14)));
}

TEST_CASE("smoothing with more densities than points mixes with the uniform law") {
  const auto cls = DensityClass::from_rows({{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}});
  const auto smoothed = smooth_class(cls, 0.2);
  CHECK(smoothed(0, 0) == doctest::Approx(0.8 + 0.1));
  CHECK(smoothed(0, 1) == doctest::Approx(0.1));
  CHECK(smoothed.log_ratio_bound() <= smoothed_bound(3, 2, 0.2) + 1e-12);
  CHECK_THROWS(smooth_class(cls, 0.0));
  CHECK_THROWS(smooth_class(cls, 0.5));
}

TEST_CASE("smoothed ratio never exceeds the smoothing gap") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t P = 1 + rng() % 8;
    const std::size_t X = 1 + rng() % 8;
    std::vector<std::vector<double>> rows(P, std::vector<double>(X, 0.0));
    for (auto& row : rows) row[rng() % X] = 1.0;
    const auto cls = DensityClass::from_rows(rows);
    const double eps = 0.01 + 0.4 * static_cast<double>(rng() % 100) / 100.0;
    const auto smoothed = smooth_class(cls, eps);
    CHECK(exhaustive_log_ratio(smoothed) <= smoothed_bound(P, X, eps) + 1e-12);
  }
}

TEST_CASE("a single density bypasses the grid") {
  const auto cls = DensityClass::from_rows({{0.2, 0.3, 0.5}});
  const std::vector<std::size_t> obs{0, 2, 2, 1};
  const auto run = run_density(cls, obs);
  CHECK_FALSE(run.audit);
  const double minL = -(std::log(0.2) + 2 * std::log(0.5) + std::log(0.3));
  CHECK(run.erm == doctest::Approx(minL));
  CHECK(run.corollary.lhs == doctest::Approx(minL / 4.0));
  CHECK(run.corollary.passed());
}

TEST_CASE("random class of four densities on sixty draws") {
  std::mt19937_64 rng(60);
  for (int trial = 0; trial < 10; ++trial) {
    const auto cls = random_class(rng, 4, 6);
    const auto obs = draws(rng, cls, 0, 60);
    const auto run = run_density(cls, obs);
    CHECK(run.corollary.slack >= 0.0);
    REQUIRE(run.audit);
    CHECK(run.audit->sandwich_violations() == 0);
    CHECK(run.corollary.rhs ==
          doctest::Approx(8.0 * run.erm / 60.0 + 104.0 * cls.log_ratio_bound() * std::log(4.0) / 60.0));
  }
}

TEST_CASE("smoothed pipeline at epsilon = 1/n") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> rows{{0.7, 0.3, 0.0, 0.0}, {0.0, 0.2, 0.5, 0.3}, {0.25, 0.25, 0.25, 0.25}};
    const auto cls = DensityClass::from_rows(rows);
    const auto obs = draws(rng, cls, 2, 40);
    const auto run = run_smoothed(cls, obs, 1.0 / 40.0);
    REQUIRE(run.one_over_n);
    CHECK(run.one_over_n->passed());
    CHECK(run.general.passed());
    CHECK(run.inflation.passed());
    const double lnP = std::log(3.0);
    const double expected_rhs = 8.0 * run.general.components.erm_loss / 40.0 +
                                112.0 / 40.0 * lnP * std::min(lnP, std::log(4.0)) + 112.0 / 40.0 * lnP * std::log(40.0);
    CHECK(run.one_over_n->rhs == doctest::Approx(expected_rhs));
    CHECK(run.gap == doctest::Approx(std::log(40.0) + lnP));
  }
}

TEST_CASE("smoothed pipeline is skipped at epsilon other than 1/n") {
  const auto cls = two_point_class();
  const auto run = run_smoothed(cls, {0, 0, 1, 0}, 0.1);
  CHECK_FALSE(run.one_over_n);
  CHECK(run.general.passed());
}

TEST_CASE("smoothing inflation against the unsmoothed best density") {
  const auto cls = DensityClass::from_rows({{0.6, 0.4}, {0.1, 0.9}});
  const std::vector<std::size_t> obs{0, 0, 1, 0, 1};
  const auto losses = class_losses(cls, obs);
  const double erm = std::min(losses[0], losses[1]);
  const auto run = run_smoothed(cls, obs, 0.2);
  const auto smoothed_losses = class_losses(run.smoothed, obs);
  const std::size_t best = losses[0] <= losses[1] ? 0 : 1;
  CHECK(smoothed_losses[best] <= erm + 2.0 * 5.0 * 0.2);
  CHECK(run.inflation.passed());
}
