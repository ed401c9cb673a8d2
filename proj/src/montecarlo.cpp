#include "genbound/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "genbound/parallel.hpp"
#include "genbound/rng.hpp"

namespace genbound {

namespace {

// One (S, W) draw from the stream for (seed, index).
SamplePair draw_pair(const FiniteDistribution& mu, std::size_t n,
                     const StochasticKernel& kernel, std::uint64_t seed,
                     std::uint64_t index) {
  CounterRng rng(seed, streams::kPairs, index);
  const std::size_t z = mu.size();
  std::uint64_t code = 0;
  std::uint64_t place = 1;
  for (std::size_t i = 0; i < n; ++i) {
    code += place * rng.next_categorical(mu.probs());
    place *= z;
  }
  const std::size_t w = rng.next_categorical(kernel.row(code));
  return SamplePair{DatasetIndex{code, n, z}, w};
}

}  // namespace

EstimateWithCI EstimateWithCI::from_sums(double sum, double sum_squares,
                                         std::uint64_t trials) {
  EstimateWithCI est;
  est.trials = trials;
  const double nd = static_cast<double>(trials);
  est.mean = sum / nd;
  if (trials > 1) {
    const double variance =
        std::max(0.0, (sum_squares - sum * sum / nd) / (nd - 1.0));
    est.std_error = std::sqrt(variance / nd);
  }
  est.ci_lo = est.mean - 1.96 * est.std_error;
  est.ci_hi = est.mean + 1.96 * est.std_error;
  return est;
}

std::vector<SamplePair> sample_pairs(const FiniteDistribution& mu, std::size_t n,
                                     const StochasticKernel& kernel,
                                     std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  const std::uint64_t num_datasets = checked_enumeration_size(mu.size(), n);
  if (kernel.num_inputs() != num_datasets) {
    throw std::invalid_argument("kernel row count does not match |Z|^n");
  }
  std::vector<SamplePair> pairs(trials);
  parallel_blocks(trials, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t t = begin; t < end; ++t) {
      pairs[t] = draw_pair(mu, n, kernel, seed, t);
    }
  });
  return pairs;
}

TailEstimate::TailEstimate(std::vector<double> abs_gaps)
    : sorted_(std::move(abs_gaps)) {
  std::sort(sorted_.begin(), sorted_.end());
}

EstimateWithCI TailEstimate::at(double alpha) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), alpha);
  const std::uint64_t exceed = static_cast<std::uint64_t>(sorted_.end() - it);
  const double nd = static_cast<double>(sorted_.size());
  EstimateWithCI est;
  est.trials = sorted_.size();
  est.mean = static_cast<double>(exceed) / nd;
  est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / nd);
  est.ci_lo = est.mean - 1.96 * est.std_error;
  est.ci_hi = est.mean + 1.96 * est.std_error;
  return est;
}

GenEstimate estimate_gen(const FiniteDistribution& mu, std::size_t n,
                         const StochasticKernel& kernel, const LossTable& loss,
                         std::uint64_t trials, std::uint64_t seed) {
  if (trials < 100) throw std::invalid_argument("need at least 100 trials");
  const std::uint64_t num_datasets = checked_enumeration_size(mu.size(), n);
  if (kernel.num_inputs() != num_datasets ||
      kernel.num_outputs() != loss.num_hypotheses()) {
    throw std::invalid_argument("kernel does not match problem");
  }
  const auto pop = population_risks(loss, mu);
  const double scale =
      1.0 / (static_cast<double>(n) * static_cast<double>(loss.denominator()));

  std::vector<double> abs_gaps(trials);
  const auto sums = deterministic_vector_sum(
      trials, 4,
      [&](std::uint64_t begin, std::uint64_t end, std::span<double> acc) {
        for (std::uint64_t t = begin; t < end; ++t) {
          const SamplePair pair = draw_pair(mu, n, kernel, seed, t);
          const double emp =
              static_cast<double>(loss.empirical_numerator(pair.w, pair.s)) *
              scale;
          const double gap = pop[pair.w] - emp;
          abs_gaps[t] = std::abs(gap);
          acc[0] += gap;
          acc[1] += gap * gap;
          acc[2] += std::abs(gap);
          acc[3] += gap * gap;
        }
      });

  GenEstimate estimate{
      EstimateWithCI::from_sums(sums[0], sums[1], trials),
      EstimateWithCI::from_sums(sums[2], sums[3], trials),
      TailEstimate(std::move(abs_gaps)),
  };
  return estimate;
}

MonitorOutcome monitor_experiment(const FiniteDistribution& mu, std::size_t n,
                                  const StochasticKernel& kernel,
                                  const LossTable& loss, std::size_t m,
                                  std::uint64_t trials, std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("need at least one copy");
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  const std::uint64_t num_datasets = checked_enumeration_size(mu.size(), n);
  if (kernel.num_inputs() != num_datasets ||
      kernel.num_outputs() != loss.num_hypotheses()) {
    throw std::invalid_argument("kernel does not match problem");
  }
  const auto pop = population_risks(loss, mu);
  const double scale =
      1.0 / (static_cast<double>(n) * static_cast<double>(loss.denominator()));

  MonitorOutcome outcome;
  outcome.m = m;
  outcome.selected.resize(trials);
  const auto sums = deterministic_vector_sum(
      trials, 2,
      [&](std::uint64_t begin, std::uint64_t end, std::span<double> acc) {
        for (std::uint64_t t = begin; t < end; ++t) {
          double best_signed = -std::numeric_limits<double>::infinity();
          MonitorSelection selection;
          for (std::size_t copy = 0; copy < m; ++copy) {
            const SamplePair pair = draw_pair(
                mu, n, kernel, seed, t * static_cast<std::uint64_t>(m) + copy);
            const double emp =
                static_cast<double>(loss.empirical_numerator(pair.w, pair.s)) *
                scale;
            const double gap = pop[pair.w] - emp;
            // argmax over (copy, r) of r * gap; ties keep the earliest copy
            // and prefer r = +1.
            for (int r : {+1, -1}) {
              const double value = r * gap;
              if (value > best_signed) {
                best_signed = value;
                selection = MonitorSelection{copy + 1, r, pair.w};
              }
            }
          }
          outcome.selected[t] = selection;
          acc[0] += best_signed;  // max_t |gap_t|
          acc[1] += best_signed * best_signed;
        }
      });

  outcome.max_abs_gen_estimate = EstimateWithCI::from_sums(sums[0], sums[1], trials);
  // R* (L_S(W*) - L_mu(W*)) = -max_t |gap_t| trial by trial.
  outcome.signed_gap_estimate =
      EstimateWithCI::from_sums(-sums[0], sums[1], trials);
  return outcome;
}

}  // namespace genbound
