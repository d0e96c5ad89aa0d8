#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mlsa/audit.hpp"
#include "mlsa/regression.hpp"
#include "oracles.hpp"

using namespace mlsa;
using namespace mlsa::regression;

TEST_CASE("regression grid sizes") {
  const auto g = regression_grid(1.0, 8);
  CHECK(g.size() == 25);
  CHECK(g.gap() == 1.0);
  CHECK(g.t_max() == 25.0);
  const auto half = regression_grid(0.5, 8);
  REQUIRE(half.size() == 25);
  CHECK(half.gap() == 0.5);
  for (std::size_t k = 0; k < 25; ++k) CHECK(half.levels()[k] == doctest::Approx(0.5 * g.levels()[k]));
  CHECK(half.t_max() == doctest::Approx(12.5));
  CHECK_THROWS(regression_grid(1.0, 1));
  CHECK(grid_for_class(2.0, 1).levels() == std::vector<double>{2.0});
}

TEST_CASE("catalog losses") {
  CHECK(squared_loss()(0.5, 0.5) == 0.0);
  CHECK(squared_loss()(0.0, 1.0) == 1.0);
  CHECK(absolute_loss()(0.25, 0.75) == 0.5);
  CHECK(squared_loss(3.0)(0.0, 1.0) == 3.0);
  CHECK(squared_loss(3.0).delta_bound == 3.0);
  CHECK(squared_loss()(1.7, 1.0) == 0.0);
  CHECK(loss_by_name("absolute", 2.0).name == absolute_loss(2.0).name);
  CHECK_THROWS(loss_by_name("huber"));
  CHECK(builtin_losses().size() == 2);
}

TEST_CASE("catalog losses are monotone in distance") {
  for (const auto& loss : builtin_losses()) {
    for (double y : {0.0, 0.3, 1.0}) {
      for (double a = 0.0; a <= 1.0; a += 0.05) {
        for (double b = 0.0; b <= 1.0; b += 0.05) {
          if (std::abs(a - y) <= std::abs(b - y)) CHECK(loss(a, y) <= loss(b, y) + 1e-15);
        }
      }
    }
  }
}

TEST_CASE("averaging is stable for every catalog loss") {
  std::mt19937_64 rng(1);
  const auto table = oracle::random_table(rng, 30, 20, false);
  const auto sample = oracle::random_sample(rng, 30, false);
  for (const auto& loss : builtin_losses()) {
    CHECK(check_agg_assumption(Aggregator::mean(), loss, table, sample, 1000, 2).passed());
  }
}

TEST_CASE("constant functions matching constant responses") {
  const LabeledSample sample{std::vector<double>(10, 0.4)};
  const PredictionTable exact(10, 2, std::vector<double>(20, 0.4), PredictionTable::Duplicates::keep);
  const PredictionTable mixed = PredictionTable::from_columns({std::vector<double>(10, 0.4),
                                                               std::vector<double>(10, 0.9),
                                                               std::vector<double>(10, 0.1)});
  for (const auto& loss : builtin_losses()) {
    const auto run = run_regression(exact, sample, loss);
    CHECK(run.erm == 0.0);
    CHECK(run.corollary.lhs == 0.0);
    CHECK(run.corollary.passed());
    const auto wide = run_regression(mixed, sample, loss);
    CHECK(wide.erm == 0.0);
    CHECK(wide.corollary.passed());
  }
}

TEST_CASE("random class of 32 on 100 points") {
  std::mt19937_64 rng(32);
  const auto table = oracle::random_table(rng, 100, 32, false);
  const auto sample = oracle::random_sample(rng, 100, false);
  for (const auto& loss : builtin_losses()) {
    const auto run = run_regression(table, sample, loss);
    CHECK(run.corollary.slack >= 0.0);
    CHECK(run.corollary.rhs ==
          doctest::Approx(8.0 * run.erm / 100.0 + 104.0 * std::log(32.0) / 100.0).epsilon(1e-12));
    CHECK(run.audit.sandwich_violations() == 0);
  }
}

TEST_CASE("two-hypothesis class") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto table = oracle::random_table(rng, 12, 2, false);
    const auto sample = oracle::random_sample(rng, 12, false);
    const auto run = run_regression(table, sample, squared_loss());
    CHECK(run.corollary.slack >= 0.0);
    // with two hypotheses each level set is one or both columns
    for (std::size_t k = 0; k < run.output.grid.size(); ++k) {
      for (std::size_t i = 0; i < 12; ++i) {
        const double v = run.output.at(k, i);
        const double both = 0.5 * (table(i, 0) + table(i, 1));
        CHECK((v == table(i, 0) || v == table(i, 1) || v == doctest::Approx(both)));
      }
    }
  }
}

TEST_CASE("a single hypothesis") {
  const PredictionTable table(3, 1, {0.1, 0.5, 0.9}, PredictionTable::Duplicates::keep);
  const LabeledSample sample{{0.0, 0.5, 1.0}};
  const auto run = run_regression(table, sample, squared_loss());
  CHECK(run.output.medians == std::vector<double>{0.1, 0.5, 0.9});
  CHECK(run.corollary.lhs == doctest::Approx(0.02 / 3.0));
  CHECK(run.corollary.passed());
}

TEST_CASE("responses outside the unit interval are rejected") {
  CHECK_THROWS(check_responses(LabeledSample{{0.2, 1.5}}));
  CHECK_THROWS(check_responses(LabeledSample{{-0.1}}));
  CHECK_NOTHROW(check_responses(LabeledSample{{0.0, 1.0}}));
  const PredictionTable table(2, 2, {0, 1, 1, 0});
  CHECK_THROWS(run_regression(table, LabeledSample{{0.2, 1.5}}, squared_loss()));
}
