#pragma once

#include <cstdint>

#include "genbound/algorithms.hpp"
#include "genbound/kernel.hpp"
#include "genbound/risk.hpp"
#include "genbound/spaces.hpp"

namespace genbound {

/// A seeded (mu, loss, kernel, n) instance for property sweeps. Losses live
/// on the [0, 1] grid so (b - a)/2 = 1/2 is always a valid subgaussian
/// parameter.
struct RandomProblem {
  FiniteDistribution mu;
  LossTable loss;
  StochasticKernel kernel;
  std::size_t n = 1;
};

// Draws sizes |Z| in [2, max_z], n in [1, max_n], |W| in [2, max_w], a
// strictly positive mu, grid losses, and a kernel cycling through random
// rows / Gibbs / ERM by seed so sweeps cover all three shapes.
RandomProblem random_problem(std::uint64_t seed, std::size_t max_z,
                             std::size_t max_n, std::size_t max_w,
                             std::int64_t denominator = 1000);

// Row-stochastic kernel with independent random rows (normalized
// exponentials), for perturbation and data-processing sweeps.
StochasticKernel random_kernel(std::uint64_t seed, std::uint64_t stream_index,
                               std::size_t num_inputs, std::size_t num_outputs);

// Strictly positive random distribution.
FiniteDistribution random_distribution(std::uint64_t seed,
                                       std::uint64_t stream_index,
                                       std::size_t size);

}  // namespace genbound
