#include <doctest.h>

#include <cstdlib>
#include <vector>

#include "genbound/info.hpp"
#include "genbound/montecarlo.hpp"
#include "genbound/parallel.hpp"
#include "genbound/problems.hpp"
#include "genbound/reference.hpp"
#include "genbound/risk.hpp"
#include "genbound/rng.hpp"

using namespace genbound;

namespace {

struct WorkerOverride {
  explicit WorkerOverride(const char* count) {
    setenv("GENBOUND_WORKERS", count, 1);
  }
  ~WorkerOverride() { unsetenv("GENBOUND_WORKERS"); }
};

}  // namespace

TEST_CASE("pairwise sum matches plain summation") {
  std::vector<double> values;
  double plain = 0.0;
  for (int i = 0; i < 10000; ++i) {
    values.push_back(1.0 / (1.0 + i));
    plain += values.back();
  }
  CHECK(pairwise_sum(values) == doctest::Approx(plain).epsilon(1e-12));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("deterministic reductions are identical across worker counts") {
  const RandomProblem problem = random_problem(99, 3, 4, 5);

  double mi1, mi2, lambda1, lambda2;
  RiskSummary risk1, risk2;
  double mc1, mc2;
  {
    WorkerOverride one("1");
    mi1 = io_mutual_information(problem.mu, problem.n, problem.kernel);
    lambda1 = lambda_mutual_information(problem.mu, problem.n, problem.kernel,
                                        problem.loss);
    risk1 = exact_risk_summary(problem.mu, problem.n, problem.kernel, problem.loss);
    mc1 = estimate_gen(problem.mu, problem.n, problem.kernel, problem.loss, 30000, 5)
              .gen.mean;
  }
  {
    WorkerOverride four("4");
    mi2 = io_mutual_information(problem.mu, problem.n, problem.kernel);
    lambda2 = lambda_mutual_information(problem.mu, problem.n, problem.kernel,
                                        problem.loss);
    risk2 = exact_risk_summary(problem.mu, problem.n, problem.kernel, problem.loss);
    mc2 = estimate_gen(problem.mu, problem.n, problem.kernel, problem.loss, 30000, 5)
              .gen.mean;
  }
  CHECK(mi1 == mi2);
  CHECK(lambda1 == lambda2);
  CHECK(risk1.expected_empirical == risk2.expected_empirical);
  CHECK(risk1.expected_population == risk2.expected_population);
  CHECK(risk1.abs_gen_error == risk2.abs_gen_error);
  CHECK(mc1 == mc2);
}

TEST_CASE("worker count override is honored") {
  {
    WorkerOverride three("3");
    CHECK(worker_count() == 3);
  }
  {
    WorkerOverride junk("not-a-number");
    CHECK(worker_count() >= 1);
  }
  CHECK(worker_count() >= 1);
}

TEST_CASE("parallel kernels track the serial reference on larger instances") {
  // |Z| = 4, n = 6: 4096 datasets, enough blocks to split across workers.
  const FiniteDistribution mu = random_distribution(123, 5, 4);
  const auto kernel = random_kernel(123, 6, 4096, 6);

  const double fast = io_mutual_information(mu, 6, kernel);
  const double slow = reference::io_mutual_information(mu, 6, kernel);
  CHECK(fast == doctest::Approx(slow).epsilon(1e-11));

  CounterRng rng(123, 7, 0);
  std::vector<std::int64_t> nums(6 * 4);
  for (auto& v : nums) v = static_cast<std::int64_t>(rng.next_u64() % 1001);
  const LossTable loss(6, 4, std::move(nums), 1000, 0.0, 1.0);
  const RiskSummary fast_risk = exact_risk_summary(mu, 6, kernel, loss);
  const RiskSummary slow_risk = reference::exact_risk_summary(mu, 6, kernel, loss);
  CHECK(fast_risk.expected_population ==
        doctest::Approx(slow_risk.expected_population).epsilon(1e-12));
  CHECK(fast_risk.abs_gen_error ==
        doctest::Approx(slow_risk.abs_gen_error).epsilon(1e-12));
}
