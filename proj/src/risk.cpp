#include "genbound/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "genbound/parallel.hpp"

namespace genbound {

LossTable::LossTable(std::size_t num_hypotheses, std::size_t num_instances,
                     std::vector<std::int64_t> numerators,
                     std::int64_t denominator, double lower, double upper)
    : num_hypotheses_(num_hypotheses),
      num_instances_(num_instances),
      numerators_(std::move(numerators)),
      denominator_(denominator),
      lower_(lower),
      upper_(upper) {
  if (num_hypotheses_ == 0 || num_instances_ == 0) {
    throw std::invalid_argument("loss table must be non-empty");
  }
  if (numerators_.size() != num_hypotheses_ * num_instances_) {
    throw std::invalid_argument("loss table shape mismatch");
  }
  if (denominator_ < 1) {
    throw std::invalid_argument("loss denominator must be >= 1");
  }
  if (lower_ < 0.0 || upper_ < lower_) {
    throw std::invalid_argument("loss range must satisfy 0 <= lower <= upper");
  }
  const double d = static_cast<double>(denominator_);
  for (std::int64_t num : numerators_) {
    const double v = static_cast<double>(num) / d;
    if (v < lower_ - 1e-15 || v > upper_ + 1e-15) {
      throw std::invalid_argument("loss entry outside declared range");
    }
  }
}

std::int64_t LossTable::empirical_numerator(std::size_t w,
                                            const DatasetIndex& s) const {
  std::int64_t total = 0;
  std::uint64_t code = s.code;
  const std::size_t z = s.z_size;
  for (std::size_t i = 0; i < s.n; ++i) {
    total += numerator(w, static_cast<std::size_t>(code % z));
    code /= z;
  }
  return total;
}

std::int64_t LossTable::empirical_numerator(
    std::size_t w, std::span<const std::size_t> digits) const {
  std::int64_t total = 0;
  for (std::size_t zi : digits) total += numerator(w, zi);
  return total;
}

double empirical_risk(const LossTable& loss, std::size_t w,
                      const DatasetIndex& s) {
  if (w >= loss.num_hypotheses()) throw std::out_of_range("hypothesis index");
  if (s.z_size != loss.num_instances()) {
    throw std::invalid_argument("dataset alphabet does not match loss table");
  }
  return static_cast<double>(loss.empirical_numerator(w, s)) /
         (static_cast<double>(s.n) * static_cast<double>(loss.denominator()));
}

double population_risk(const LossTable& loss, std::size_t w,
                       const FiniteDistribution& mu) {
  if (w >= loss.num_hypotheses()) throw std::out_of_range("hypothesis index");
  if (mu.size() != loss.num_instances()) {
    throw std::invalid_argument("distribution does not match loss table");
  }
  double risk = 0.0;
  for (std::size_t z = 0; z < mu.size(); ++z) {
    risk += mu.prob(z) * loss.value(w, z);
  }
  return risk;
}

std::vector<double> population_risks(const LossTable& loss,
                                     const FiniteDistribution& mu) {
  std::vector<double> risks(loss.num_hypotheses());
  for (std::size_t w = 0; w < risks.size(); ++w) {
    risks[w] = population_risk(loss, w, mu);
  }
  return risks;
}

std::size_t argmin_population_risk(const LossTable& loss,
                                   const FiniteDistribution& mu) {
  const auto risks = population_risks(loss, mu);
  return static_cast<std::size_t>(
      std::min_element(risks.begin(), risks.end()) - risks.begin());
}

RiskSummary exact_risk_summary(const FiniteDistribution& mu, std::size_t n,
                               const StochasticKernel& kernel,
                               const LossTable& loss) {
  const std::uint64_t num_datasets = checked_enumeration_size(mu.size(), n);
  if (kernel.num_inputs() != num_datasets) {
    throw std::invalid_argument("kernel row count does not match |Z|^n");
  }
  if (kernel.num_outputs() != loss.num_hypotheses()) {
    throw std::invalid_argument("kernel output count does not match loss table");
  }
  const auto pop = population_risks(loss, mu);
  const double scale =
      1.0 / (static_cast<double>(n) * static_cast<double>(loss.denominator()));

  // Per dataset: p(s) * sum_w k(s,w) * {L_s(w), L_mu(w), |L_mu(w) - L_s(w)|}.
  const auto sums = deterministic_vector_sum(
      num_datasets, 3,
      [&](std::uint64_t begin, std::uint64_t end, std::span<double> acc) {
        DatasetOdometer odo(begin, mu.size(), n);
        for (std::uint64_t s = begin; s < end; ++s, odo.advance()) {
          const double ps = product_probability(mu, s, n);
          if (ps > 0.0) {
            const auto row = kernel.row(s);
            double emp = 0.0, popw = 0.0, abs_gap = 0.0;
            for (std::size_t w = 0; w < row.size(); ++w) {
              const double pw = row[w];
              if (pw == 0.0) continue;
              const double ls =
                  static_cast<double>(loss.empirical_numerator(w, odo.digits())) *
                  scale;
              emp += pw * ls;
              popw += pw * pop[w];
              abs_gap += pw * std::abs(pop[w] - ls);
            }
            acc[0] += ps * emp;
            acc[1] += ps * popw;
            acc[2] += ps * abs_gap;
          }
        }
      });

  RiskSummary summary;
  summary.expected_empirical = sums[0];
  summary.expected_population = sums[1];
  summary.gen_error = sums[1] - sums[0];
  summary.abs_gen_error = sums[2];
  summary.excess_risk = sums[1] - *std::min_element(pop.begin(), pop.end());
  return summary;
}

}  // namespace genbound
