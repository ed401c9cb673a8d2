#include "genbound/reference.hpp"

#include <algorithm>
#include <cmath>

#include "genbound/rng.hpp"

namespace genbound::reference {

double io_mutual_information(const FiniteDistribution& mu, std::size_t n,
                             const StochasticKernel& kernel) {
  return genbound::mutual_information(genbound::build_io_joint(mu, n, kernel));
}

double lambda_mutual_information(const FiniteDistribution& mu, std::size_t n,
                                 const StochasticKernel& kernel,
                                 const LossTable& loss) {
  return genbound::mutual_information(
      genbound::build_lambda_joint(mu, n, kernel, loss));
}

RiskSummary exact_risk_summary(const FiniteDistribution& mu, std::size_t n,
                               const StochasticKernel& kernel,
                               const LossTable& loss) {
  const std::uint64_t num_datasets = checked_enumeration_size(mu.size(), n);
  const auto pop = population_risks(loss, mu);
  const double scale =
      1.0 / (static_cast<double>(n) * static_cast<double>(loss.denominator()));

  RiskSummary summary;
  for (std::uint64_t s = 0; s < num_datasets; ++s) {
    const double ps = product_probability(mu, s, n);
    if (ps == 0.0) continue;
    const DatasetIndex idx{s, n, mu.size()};
    const auto row = kernel.row(s);
    for (std::size_t w = 0; w < row.size(); ++w) {
      if (row[w] == 0.0) continue;
      const double weight = ps * row[w];
      const double emp =
          static_cast<double>(loss.empirical_numerator(w, idx)) * scale;
      summary.expected_empirical += weight * emp;
      summary.expected_population += weight * pop[w];
      summary.abs_gen_error += weight * std::abs(pop[w] - emp);
    }
  }
  summary.gen_error = summary.expected_population - summary.expected_empirical;
  summary.excess_risk =
      summary.expected_population - *std::min_element(pop.begin(), pop.end());
  return summary;
}

GenEstimate estimate_gen(const FiniteDistribution& mu, std::size_t n,
                         const StochasticKernel& kernel, const LossTable& loss,
                         std::uint64_t trials, std::uint64_t seed) {
  const auto pop = population_risks(loss, mu);
  const double scale =
      1.0 / (static_cast<double>(n) * static_cast<double>(loss.denominator()));
  const std::size_t z = mu.size();

  double sum = 0.0, sum_sq = 0.0, abs_sum = 0.0;
  std::vector<double> abs_gaps(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    CounterRng rng(seed, streams::kPairs, t);
    std::uint64_t code = 0;
    std::uint64_t place = 1;
    for (std::size_t i = 0; i < n; ++i) {
      code += place * rng.next_categorical(mu.probs());
      place *= z;
    }
    const std::size_t w = rng.next_categorical(kernel.row(code));
    const double emp = static_cast<double>(loss.empirical_numerator(
                           w, DatasetIndex{code, n, z})) *
                       scale;
    const double gap = pop[w] - emp;
    sum += gap;
    sum_sq += gap * gap;
    abs_sum += std::abs(gap);
    abs_gaps[t] = std::abs(gap);
  }
  return GenEstimate{EstimateWithCI::from_sums(sum, sum_sq, trials),
                     EstimateWithCI::from_sums(abs_sum, sum_sq, trials),
                     TailEstimate(std::move(abs_gaps))};
}

}  // namespace genbound::reference
