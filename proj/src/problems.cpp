#include "genbound/problems.hpp"

#include <cmath>

#include "genbound/rng.hpp"

namespace genbound {

namespace {

std::vector<double> random_simplex_point(CounterRng& rng, std::size_t size) {
  // Exponential spacings with a floor keep every atom strictly positive.
  std::vector<double> probs(size);
  double total = 0.0;
  for (double& p : probs) {
    p = 0.05 + rng.next_exponential(1.0);
    total += p;
  }
  for (double& p : probs) p /= total;
  return probs;
}

}  // namespace

FiniteDistribution random_distribution(std::uint64_t seed,
                                       std::uint64_t stream_index,
                                       std::size_t size) {
  CounterRng rng(seed, streams::kProblems, stream_index);
  return FiniteDistribution(random_simplex_point(rng, size));
}

StochasticKernel random_kernel(std::uint64_t seed, std::uint64_t stream_index,
                               std::size_t num_inputs, std::size_t num_outputs) {
  CounterRng rng(seed, streams::kProblems, stream_index);
  std::vector<double> rows;
  rows.reserve(num_inputs * num_outputs);
  for (std::size_t i = 0; i < num_inputs; ++i) {
    const auto row = random_simplex_point(rng, num_outputs);
    rows.insert(rows.end(), row.begin(), row.end());
  }
  return StochasticKernel(num_inputs, num_outputs, std::move(rows));
}

RandomProblem random_problem(std::uint64_t seed, std::size_t max_z,
                             std::size_t max_n, std::size_t max_w,
                             std::int64_t denominator) {
  CounterRng rng(seed, streams::kProblems, 0);
  const std::size_t z =
      2 + static_cast<std::size_t>(rng.next_u64() % (max_z >= 2 ? max_z - 1 : 1));
  const std::size_t n =
      1 + static_cast<std::size_t>(rng.next_u64() % max_n);
  const std::size_t w =
      2 + static_cast<std::size_t>(rng.next_u64() % (max_w >= 2 ? max_w - 1 : 1));

  FiniteDistribution mu(random_simplex_point(rng, z));

  std::vector<std::int64_t> numerators(w * z);
  for (auto& num : numerators) {
    num = static_cast<std::int64_t>(rng.next_u64() %
                                    static_cast<std::uint64_t>(denominator + 1));
  }
  LossTable loss(w, z, std::move(numerators), denominator, 0.0, 1.0);

  const std::uint64_t num_datasets = dataset_space_size(z, n);
  switch (seed % 3) {
    case 0: {
      StochasticKernel kernel =
          random_kernel(seed, 1, static_cast<std::size_t>(num_datasets), w);
      return RandomProblem{std::move(mu), std::move(loss), std::move(kernel), n};
    }
    case 1: {
      const double beta = 0.25 + 5.0 * rng.next_unit();
      FiniteDistribution q(random_simplex_point(rng, w));
      StochasticKernel kernel = gibbs_kernel(loss, z, n, beta, q);
      return RandomProblem{std::move(mu), std::move(loss), std::move(kernel), n};
    }
    default: {
      const TieRule rule = seed % 2 == 0 ? TieRule::kLowestIndex
                                         : TieRule::kUniformOverArgmin;
      StochasticKernel kernel = erm_kernel(loss, z, n, rule);
      return RandomProblem{std::move(mu), std::move(loss), std::move(kernel), n};
    }
  }
}

}  // namespace genbound
