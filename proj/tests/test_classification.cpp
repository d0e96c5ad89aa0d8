#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "mlsa/classification.hpp"

using namespace mlsa;
using namespace mlsa::classification;

namespace {

using Labeling = std::vector<double>;

std::set<Labeling> columns_of(const PredictionTable& table) {
  std::set<Labeling> out;
  for (std::size_t j = 0; j < table.cols(); ++j) out.insert(table.column(j));
  return out;
}

// Brute force over all 2^n labelings, keeping those the predicate accepts.
template <typename Realizable>
std::set<Labeling> brute_force(std::size_t n, Realizable realizable) {
  std::set<Labeling> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Labeling lab(n);
    for (std::size_t i = 0; i < n; ++i) lab[i] = (mask >> i) & 1 ? 1.0 : 0.0;
    if (realizable(lab)) out.insert(lab);
  }
  return out;
}

// Number of maximal runs of ones when points are visited in increasing x.
std::size_t runs_of_ones(const std::vector<double>& xs, const Labeling& lab) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::size_t runs = 0;
  double prev = 0.0;
  for (std::size_t idx : order) {
    if (lab[idx] == 1.0 && prev == 0.0) ++runs;
    prev = lab[idx];
  }
  return runs;
}

Covariates line(std::vector<double> xs) { return Covariates{1, std::move(xs)}; }

}  // namespace

TEST_CASE("classification grid sizes") {
  const auto g1 = classification_grid(1, 20);
  CHECK(g1.size() == 72);
  CHECK(g1.levels().front() == 1.0);
  CHECK(g1.t_max() == 72.0);
  CHECK(g1.gap() == 1.0);
  const auto g2 = classification_grid(2, 100);
  CHECK(g2.size() == 222);
  CHECK(g2.gap() == 1.0);
  CHECK_THROWS(classification_grid(0, 10));
  CHECK_THROWS(classification_grid(1, 2));
}

TEST_CASE("zero-one loss") {
  const auto loss = zero_one_loss();
  CHECK(loss(1, 1) == 0.0);
  CHECK(loss(0, 1) == 1.0);
  CHECK(loss.delta_bound == 1.0);
}

TEST_CASE("thresholds on three points give four labelings") {
  const auto table = restrict_class(ClassDescriptor::parse("thresholds"), line({0.7, 0.1, 0.4}));
  CHECK(table.cols() == 4);
  const std::vector<double> xs{0.7, 0.1, 0.4};
  const auto expected = brute_force(3, [&](const Labeling& lab) {
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        if (xs[a] < xs[b] && lab[a] > lab[b]) return false;
      }
    }
    return true;
  });
  CHECK(columns_of(table) == expected);
}

TEST_CASE("intervals on three points give seven labelings") {
  const std::vector<double> xs{0.5, 0.2, 0.9};
  const auto table = restrict_class(ClassDescriptor::parse("intervals"), line(xs));
  CHECK(table.cols() == 7);
  CHECK(columns_of(table) == brute_force(3, [&](const Labeling& lab) { return runs_of_ones(xs, lab) <= 1; }));
}

TEST_CASE("unions of intervals match brute force") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t k : {1, 2, 3}) {
    for (std::size_t n : {4, 7, 9}) {
      std::vector<double> xs(n);
      for (double& x : xs) x = unif(rng);
      const auto table = restrict_class(ClassDescriptor::parse("unions:" + std::to_string(k)), line(xs));
      const auto expected = brute_force(n, [&](const Labeling& lab) { return runs_of_ones(xs, lab) <= k; });
      CHECK(columns_of(table) == expected);
      CHECK(table.cols() == expected.size());
      CHECK(table.cols() <= sauer_bound(n, 2 * k));
    }
  }
}

TEST_CASE("axis rectangles match brute force") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t n : {3, 5, 7}) {
    Covariates cov{2, {}};
    for (std::size_t i = 0; i < 2 * n; ++i) cov.values.push_back(unif(rng));
    const auto table = restrict_class(ClassDescriptor::parse("rectangles"), cov);
    const auto expected = brute_force(n, [&](const Labeling& lab) {
      double lo0 = 2, hi0 = -1, lo1 = 2, hi1 = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (lab[i] != 1.0) continue;
        lo0 = std::min(lo0, cov.at(i, 0));
        hi0 = std::max(hi0, cov.at(i, 0));
        lo1 = std::min(lo1, cov.at(i, 1));
        hi1 = std::max(hi1, cov.at(i, 1));
      }
      for (std::size_t i = 0; i < n; ++i) {
        const bool inside = cov.at(i, 0) >= lo0 && cov.at(i, 0) <= hi0 && cov.at(i, 1) >= lo1 && cov.at(i, 1) <= hi1;
        if (lab[i] == 0.0 && inside) return false;
      }
      return true;
    });
    CHECK(columns_of(table) == expected);
    CHECK(table.cols() == expected.size());
  }
}

TEST_CASE("explicit classes pass through") {
  const PredictionTable t(3, 2, {0, 1, 1, 1, 0, 0});
  const auto desc = ClassDescriptor::explicit_class(t, 1);
  const auto out = restrict_class(desc, line({0.1, 0.2, 0.3}));
  REQUIRE(out.cols() == 2);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) CHECK(out(i, j) == t(i, j));
  }
  CHECK(desc.vc_dimension() == 1);
  CHECK_THROWS(restrict_class(desc, line({0.1, 0.2})));
}

TEST_CASE("descriptor parsing") {
  CHECK(ClassDescriptor::parse("thresholds").vc_dimension() == 1);
  CHECK(ClassDescriptor::parse("intervals").vc_dimension() == 2);
  CHECK(ClassDescriptor::parse("unions:3").vc_dimension() == 6);
  CHECK(ClassDescriptor::parse("rectangles").vc_dimension() == 4);
  CHECK(ClassDescriptor::parse("rectangles").covariate_dimension() == 2);
  CHECK(ClassDescriptor::parse("unions:3").name() == "unions:3");
  CHECK_THROWS(ClassDescriptor::parse("circles"));
  CHECK_THROWS(ClassDescriptor::parse("unions:0"));
  CHECK_THROWS(ClassDescriptor::parse("unions:x"));
}

TEST_CASE("repeated covariates are rejected") {
  CHECK_THROWS(restrict_class(ClassDescriptor::parse("thresholds"), line({0.1, 0.5, 0.1})));
}

TEST_CASE("sauer bound") {
  CHECK(sauer_bound(3, 1) == 4);
  CHECK(sauer_bound(3, 2) == 7);
  CHECK(sauer_bound(10, 0) == 1);
  CHECK(sauer_bound(5, 9) == 32);
  CHECK(sauer_bound(1000, 500) == std::numeric_limits<std::size_t>::max());
}

TEST_CASE("realizable instances meet the realizable rate") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const char* name : {"thresholds", "intervals"}) {
    const auto desc = ClassDescriptor::parse(name);
    for (std::size_t n : {20, 50, 80}) {
      Covariates cov = line({});
      LabeledSample sample;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = unif(rng);
        cov.values.push_back(x);
        sample.responses.push_back(x > 0.35 && (desc.vc_dimension() == 1 || x < 0.8) ? 1.0 : 0.0);
      }
      const auto run = run_classification(restrict_class(desc, cov), sample, desc.vc_dimension());
      const double nd = static_cast<double>(n);
      CHECK(run.erm == 0.0);
      CHECK(run.output.loo_error <= 200.0 * static_cast<double>(desc.vc_dimension()) * std::log(nd) / nd);
      CHECK(run.corollary.passed());
    }
  }
}

TEST_CASE("single hypothesis oracle inequality") {
  const PredictionTable table(4, 1, {1, 1, 0, 0}, PredictionTable::Duplicates::keep);
  const LabeledSample sample{{1, 0, 0, 1}};
  const auto run = run_classification(table, sample, 1);
  CHECK(run.corollary.lhs == 0.5);
  CHECK(run.corollary.passed());
}

TEST_CASE("thresholds with ten percent flips") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Covariates cov = line({});
  LabeledSample sample;
  for (int i = 0; i < 50; ++i) {
    const double x = unif(rng);
    cov.values.push_back(x);
    const double clean = x >= 0.5 ? 1.0 : 0.0;
    sample.responses.push_back(unif(rng) < 0.1 ? 1.0 - clean : clean);
  }
  const auto run = run_classification(restrict_class(ClassDescriptor::parse("thresholds"), cov), sample, 1);
  CHECK(run.corollary.slack >= 0.0);
  CHECK(run.corollary.rhs ==
        doctest::Approx(8.0 * run.erm / 50.0 + 200.0 * std::log(50.0) / 50.0).epsilon(1e-12));
  CHECK(run.audit.good_fraction >= 0.75);
  CHECK(run.corollary.components.multiplier == doctest::Approx(8.0 / 50.0));
}

TEST_CASE("corollary refuses a mismatched grid") {
  const PredictionTable table(5, 2, {0, 1, 1, 0, 0, 1, 1, 1, 0, 0});
  const LabeledSample sample{{0, 1, 0, 1, 0}};
  const auto out = run_mlsa(table, sample, zero_one_loss(), ToleranceGrid::multiples(1.0, 3), Aggregator::majority());
  CHECK_THROWS(verify_cor_loo01(out, table, sample, 1));
}
