#pragma once

#include <cstdint>
#include <vector>

#include "genbound/kernel.hpp"
#include "genbound/risk.hpp"
#include "genbound/spaces.hpp"

namespace genbound {

struct EstimateWithCI {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(trials)
  std::uint64_t trials = 0;
  double ci_lo = 0.0;  // mean - 1.96 std_error
  double ci_hi = 0.0;

  static EstimateWithCI from_sums(double sum, double sum_squares,
                                  std::uint64_t trials);
};

struct SamplePair {
  DatasetIndex s;
  std::size_t w = 0;
};

// Trial t draws from the stream (seed, kPairs, t): first the n dataset
// digits, then the hypothesis. Deterministic for any worker count.
std::vector<SamplePair> sample_pairs(const FiniteDistribution& mu, std::size_t n,
                                     const StochasticKernel& kernel,
                                     std::uint64_t trials, std::uint64_t seed);

/// Empirical survival function of |L_mu(W) - L_S(W)| with binomial standard
/// errors.
class TailEstimate {
 public:
  explicit TailEstimate(std::vector<double> abs_gaps);
  // Fraction of trials with |gap| > alpha.
  EstimateWithCI at(double alpha) const;
  std::uint64_t trials() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

struct GenEstimate {
  EstimateWithCI gen;
  EstimateWithCI abs_gen;
  TailEstimate tail;
};

// Per-trial statistic L_mu(W) - L_S(W) with L_mu computed exactly from mu.
// Requires trials >= 100. Shares the trial streams of sample_pairs.
GenEstimate estimate_gen(const FiniteDistribution& mu, std::size_t n,
                         const StochasticKernel& kernel, const LossTable& loss,
                         std::uint64_t trials, std::uint64_t seed);

struct MonitorSelection {
  std::size_t t = 0;  // selected copy, in [1..m]
  int r = 0;          // selected sign, +1 or -1
  std::size_t w = 0;  // hypothesis of the selected copy
};

struct MonitorOutcome {
  std::size_t m = 0;
  std::vector<MonitorSelection> selected;
  // E[max_t |L_mu(W_t) - L_{S_t}(W_t)|]
  EstimateWithCI max_abs_gen_estimate;
  // E[R* (L_{S_T*}(W*) - L_mu(W*))], the signed selected gap
  EstimateWithCI signed_gap_estimate;
};

// Per trial: m independent (S_t, W_t) draws from streams
// (seed, kPairs, trial*m + copy); the selection maximizes
// r (L_mu(W_t) - L_{S_t}(W_t)), ties broken by smallest t then r = +1.
// With m = 1 the trials coincide with estimate_gen's.
MonitorOutcome monitor_experiment(const FiniteDistribution& mu, std::size_t n,
                                  const StochasticKernel& kernel,
                                  const LossTable& loss, std::size_t m,
                                  std::uint64_t trials, std::uint64_t seed);

}  // namespace genbound
