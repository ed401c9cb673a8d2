#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "genbound/kernel.hpp"
#include "genbound/spaces.hpp"

namespace genbound {

/// Loss values l(w, z) on a rational grid: integer numerators over one shared
/// denominator D, with a declared range [lower, upper], lower >= 0.
///
/// Keeping losses rational makes empirical-risk comparisons and grouping by
/// empirical-risk vectors exact integer operations.
class LossTable {
 public:
  LossTable(std::size_t num_hypotheses, std::size_t num_instances,
            std::vector<std::int64_t> numerators, std::int64_t denominator,
            double lower, double upper);

  std::size_t num_hypotheses() const { return num_hypotheses_; }
  std::size_t num_instances() const { return num_instances_; }
  std::int64_t numerator(std::size_t w, std::size_t z) const {
    return numerators_[w * num_instances_ + z];
  }
  std::int64_t denominator() const { return denominator_; }
  double value(std::size_t w, std::size_t z) const {
    return static_cast<double>(numerator(w, z)) / static_cast<double>(denominator_);
  }
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }
  // (b - a) / 2: a subgaussian parameter valid for any data distribution.
  double bounded_sigma() const { return (upper_ - lower_) / 2.0; }

  // Integer numerator of n * L_s(w); exact for any dataset within capacity.
  std::int64_t empirical_numerator(std::size_t w, const DatasetIndex& s) const;
  std::int64_t empirical_numerator(std::size_t w,
                                   std::span<const std::size_t> digits) const;

 private:
  std::size_t num_hypotheses_;
  std::size_t num_instances_;
  std::vector<std::int64_t> numerators_;
  std::int64_t denominator_;
  double lower_;
  double upper_;
};

struct RiskSummary {
  double expected_empirical = 0.0;
  double expected_population = 0.0;
  double gen_error = 0.0;      // expected_population - expected_empirical
  double abs_gen_error = 0.0;  // E |L_mu(W) - L_S(W)|
  double excess_risk = 0.0;    // expected_population - min_w L_mu(w)
};

double empirical_risk(const LossTable& loss, std::size_t w, const DatasetIndex& s);
double population_risk(const LossTable& loss, std::size_t w,
                       const FiniteDistribution& mu);
std::vector<double> population_risks(const LossTable& loss,
                                     const FiniteDistribution& mu);
// Lowest index attaining the minimum population risk.
std::size_t argmin_population_risk(const LossTable& loss,
                                   const FiniteDistribution& mu);

// Full enumeration over (s, w) weighted by mu^(x)n (s) * kernel(s, w).
RiskSummary exact_risk_summary(const FiniteDistribution& mu, std::size_t n,
                               const StochasticKernel& kernel,
                               const LossTable& loss);

}  // namespace genbound
