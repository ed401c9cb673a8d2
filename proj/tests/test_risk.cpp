#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "genbound/algorithms.hpp"
#include "genbound/montecarlo.hpp"
#include "genbound/problems.hpp"
#include "genbound/reference.hpp"
#include "genbound/risk.hpp"
#include "genbound/rng.hpp"

using namespace genbound;

namespace {

LossTable zero_one_2x2() {
  // l(w, z) = 1{w != z} on two instances and two hypotheses.
  return LossTable(2, 2, {0, 1, 1, 0}, 1, 0.0, 1.0);
}

}  // namespace

TEST_CASE("loss table validation") {
  CHECK_THROWS_AS(LossTable(1, 1, {2}, 1, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LossTable(1, 1, {0}, 0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LossTable(1, 1, {0}, 1, -0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LossTable(1, 2, {0}, 1, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("empirical risk") {
  // Constant loss c = 0.4.
  const LossTable constant(2, 3, std::vector<std::int64_t>(6, 400), 1000, 0.0, 1.0);
  for (std::uint64_t code = 0; code < 27; ++code) {
    CHECK(empirical_risk(constant, 0, DatasetIndex{code, 3, 3}) ==
          doctest::Approx(0.4).epsilon(1e-15));
  }

  // 0/1 loss, one mistake out of four instances.
  const LossTable loss = zero_one_2x2();
  const std::vector<std::size_t> tuple{0, 0, 1, 0};
  CHECK(empirical_risk(loss, 0, encode_dataset(tuple, 2)) == doctest::Approx(0.25));

  // Seeded random table: integer-sum oracle.
  CounterRng rng(11, 99, 0);
  std::vector<std::int64_t> nums(2 * 3);
  for (auto& v : nums) v = static_cast<std::int64_t>(rng.next_u64() % 1001);
  const LossTable random_loss(2, 3, nums, 1000, 0.0, 1.0);
  const std::vector<std::size_t> s{2, 0, 1};
  const DatasetIndex idx = encode_dataset(s, 3);
  for (std::size_t w = 0; w < 2; ++w) {
    std::int64_t expected = 0;
    for (std::size_t zi : s) expected += nums[w * 3 + zi];
    CHECK(random_loss.empirical_numerator(w, idx) == expected);
    CHECK(empirical_risk(random_loss, w, idx) ==
          static_cast<double>(expected) / (3.0 * 1000.0));
  }
}

TEST_CASE("population risk") {
  const LossTable loss = zero_one_2x2();
  // Point mass picks out a single loss entry.
  CHECK(population_risk(loss, 0, FiniteDistribution::point_mass(2, 1)) == 1.0);
  // Uniform: misclassification fraction.
  CHECK(population_risk(loss, 0, FiniteDistribution::uniform(2)) ==
        doctest::Approx(0.5));

  const LossTable binary(1, 2, {0, 1}, 1, 0.0, 1.0);
  CHECK(population_risk(binary, 0, FiniteDistribution({0.3, 0.7})) ==
        doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("risk summary: independent kernel has zero expected gen error") {
  const FiniteDistribution mu({0.3, 0.7});
  const LossTable loss = zero_one_2x2();
  const std::vector<double> row{0.25, 0.75};
  const auto kernel = StochasticKernel::constant(4, row);
  const RiskSummary summary = exact_risk_summary(mu, 2, kernel, loss);
  CHECK(std::abs(summary.gen_error) <= 1e-12);
  CHECK(summary.abs_gen_error >= std::abs(summary.gen_error) - 1e-12);
  CHECK(summary.gen_error ==
        doctest::Approx(summary.expected_population - summary.expected_empirical)
            .epsilon(1e-15));
}

TEST_CASE("risk summary: ERM empirical risk never beats the best population risk") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const RandomProblem problem = random_problem(seed, 3, 3, 4);
    const auto erm =
        erm_kernel(problem.loss, problem.mu.size(), problem.n, TieRule::kLowestIndex);
    const RiskSummary summary =
        exact_risk_summary(problem.mu, problem.n, erm, problem.loss);
    const auto pop = population_risks(problem.loss, problem.mu);
    CHECK(summary.expected_empirical <=
          *std::min_element(pop.begin(), pop.end()) + 1e-12);
  }
}

TEST_CASE("risk summary: Gibbs at beta=2, n=2 stays within the gen envelope") {
  const RandomProblem problem = random_problem(7, 3, 1, 4);
  const auto gibbs =
      gibbs_kernel(problem.loss, problem.mu.size(), 2,
                   2.0, FiniteDistribution::uniform(problem.loss.num_hypotheses()));
  const RiskSummary summary = exact_risk_summary(problem.mu, 2, gibbs, problem.loss);
  CHECK(std::abs(summary.gen_error) <= 0.5);
}

TEST_CASE("fixed hypothesis: expected empirical risk equals population risk") {
  const RandomProblem problem = random_problem(13, 3, 4, 4);
  const std::uint64_t count = dataset_space_size(problem.mu.size(), problem.n);
  for (std::size_t w = 0; w < problem.loss.num_hypotheses(); ++w) {
    double expected_emp = 0.0;
    for (std::uint64_t code = 0; code < count; ++code) {
      expected_emp += product_probability(problem.mu, code, problem.n) *
                      empirical_risk(problem.loss, w,
                                     DatasetIndex{code, problem.n, problem.mu.size()});
    }
    CHECK(expected_emp ==
          doctest::Approx(population_risk(problem.loss, w, problem.mu))
              .epsilon(1e-12));
  }
}

TEST_CASE("excess risk is nonnegative and vanishes at the population minimizer") {
  const RandomProblem problem = random_problem(17, 3, 2, 4);
  const RiskSummary summary =
      exact_risk_summary(problem.mu, problem.n, problem.kernel, problem.loss);
  CHECK(summary.excess_risk >= 0.0);

  const std::size_t best = argmin_population_risk(problem.loss, problem.mu);
  std::vector<double> row(problem.loss.num_hypotheses(), 0.0);
  row[best] = 1.0;
  const auto point_kernel = StochasticKernel::constant(
      dataset_space_size(problem.mu.size(), problem.n), row);
  const RiskSummary at_best =
      exact_risk_summary(problem.mu, problem.n, point_kernel, problem.loss);
  CHECK(std::abs(at_best.excess_risk) <= 1e-15);
}

TEST_CASE("gen error matches a Monte Carlo estimate within 4 standard errors") {
  const RandomProblem problem = random_problem(23, 3, 3, 4);
  const RiskSummary exact =
      exact_risk_summary(problem.mu, problem.n, problem.kernel, problem.loss);
  const auto estimate = estimate_gen(problem.mu, problem.n, problem.kernel,
                                     problem.loss, 100000, 5);
  CHECK(std::abs(estimate.gen.mean - exact.gen_error) <=
        4.0 * estimate.gen.std_error + 1e-12);
}

TEST_CASE("parallel risk summary agrees with the serial reference") {
  for (std::uint64_t seed = 40; seed < 50; ++seed) {
    const RandomProblem problem = random_problem(seed, 3, 4, 5);
    const RiskSummary fast =
        exact_risk_summary(problem.mu, problem.n, problem.kernel, problem.loss);
    const RiskSummary slow = reference::exact_risk_summary(
        problem.mu, problem.n, problem.kernel, problem.loss);
    CHECK(fast.expected_empirical ==
          doctest::Approx(slow.expected_empirical).epsilon(1e-12));
    CHECK(fast.expected_population ==
          doctest::Approx(slow.expected_population).epsilon(1e-12));
    CHECK(fast.abs_gen_error == doctest::Approx(slow.abs_gen_error).epsilon(1e-12));
    CHECK(std::abs(fast.gen_error - slow.gen_error) <= 1e-14);
  }
}
