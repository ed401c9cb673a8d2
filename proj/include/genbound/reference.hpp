#pragma once

#include <cstdint>

#include "genbound/info.hpp"
#include "genbound/kernel.hpp"
#include "genbound/montecarlo.hpp"
#include "genbound/risk.hpp"
#include "genbound/spaces.hpp"

// Plain single-threaded implementations of the enumeration kernels, kept as
// independent oracles for the parallel versions and as the baseline for the
// benchmark. These take the obvious route (materialize the joint, loop in
// code order) rather than sharing the streaming/reduction machinery.
namespace genbound::reference {

double io_mutual_information(const FiniteDistribution& mu, std::size_t n,
                             const StochasticKernel& kernel);

double lambda_mutual_information(const FiniteDistribution& mu, std::size_t n,
                                 const StochasticKernel& kernel,
                                 const LossTable& loss);

RiskSummary exact_risk_summary(const FiniteDistribution& mu, std::size_t n,
                               const StochasticKernel& kernel,
                               const LossTable& loss);

GenEstimate estimate_gen(const FiniteDistribution& mu, std::size_t n,
                         const StochasticKernel& kernel, const LossTable& loss,
                         std::uint64_t trials, std::uint64_t seed);

}  // namespace genbound::reference
