#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "genbound/kernel.hpp"
#include "genbound/risk.hpp"
#include "genbound/spaces.hpp"

namespace genbound {

enum class TieRule {
  kLowestIndex,
  kUniformOverArgmin,
};

/// Binary classifiers as a |W| x |X| truth table; rows pairwise distinct.
class HypothesisClassTable {
 public:
  HypothesisClassTable(std::size_t num_hypotheses, std::size_t num_points,
                       std::vector<std::uint8_t> truth);

  static HypothesisClassTable full_class(std::size_t num_points);
  // w_t(x) = 1{x >= t} for t = 1..num_points+1 on X = {1..num_points}.
  static HypothesisClassTable thresholds(std::size_t num_points);
  // 1{a <= x <= b} over all 1 <= a <= b <= num_points, plus the empty set.
  static HypothesisClassTable intervals(std::size_t num_points);

  std::size_t num_hypotheses() const { return num_hypotheses_; }
  std::size_t num_points() const { return num_points_; }
  bool label(std::size_t w, std::size_t x) const {
    return truth_[w * num_points_ + x] != 0;
  }

 private:
  std::size_t num_hypotheses_;
  std::size_t num_points_;
  std::vector<std::uint8_t> truth_;
};

// Empirical risk minimization. Ties are detected by exact integer comparison
// of risk numerators, so rows with equal risk vectors are identical.
StochasticKernel erm_kernel(const LossTable& loss, std::size_t mu_size,
                            std::size_t n, TieRule tie_rule);

// row(s)(w) proportional to exp(-beta * L_s(w)) * q(w), computed with
// max-subtraction.
StochasticKernel gibbs_kernel(const LossTable& loss, std::size_t mu_size,
                              std::size_t n, double beta,
                              const FiniteDistribution& q);

// E[L_S(W)] + (1/beta) * sum_s p(s) KL(row_s || q): the relative-entropy
// regularized empirical risk that the Gibbs kernel minimizes.
double gibbs_objective(const FiniteDistribution& mu, std::size_t n,
                       const StochasticKernel& kernel, const LossTable& loss,
                       double beta, const FiniteDistribution& q);

// Selection probabilities of argmin_w (L_s(w) + N_w) with independent
// exponential noise of mean noise_means[w], integrated in closed form over
// the piecewise-exponential segments between sorted risk breakpoints.
// Exact mode supports at most 64 hypotheses.
StochasticKernel noisy_erm_kernel(const LossTable& loss, std::size_t mu_size,
                                  std::size_t n,
                                  std::span<const double> noise_means);

// Monte Carlo estimate of the same kernel; draw streams are keyed by
// (seed, row, sample) so results do not depend on the worker count.
StochasticKernel noisy_erm_kernel_mc(const LossTable& loss, std::size_t mu_size,
                                     std::size_t n,
                                     std::span<const double> noise_means,
                                     std::uint64_t samples, std::uint64_t seed);

/// Two-stage classification over Z = X x {0,1} with instance code z = 2x + y.
/// The dataset splits as S_1 = first n1 digits (least significant),
/// S_2 = last n2 digits.
struct TwoStagePrefix {
  std::uint64_t s1_code = 0;
  // Lowest-index representative per distinct labeling pattern on S_1.
  std::vector<std::size_t> cover;
  std::size_t pattern_count = 0;
  // s2 code -> distribution over the full hypothesis index space.
  StochasticKernel conditional;
};

struct TwoStageResult {
  StochasticKernel full;  // (n1 + n2)-sample dataset code -> hypothesis
  std::vector<TwoStagePrefix> prefixes;
};

TwoStageResult two_stage_kernel(const HypothesisClassTable& classifiers,
                                const FiniteDistribution& mu_xy, std::size_t n1,
                                std::size_t n2, TieRule tie_rule);

// 0/1 loss l(w, z) = 1{w(x) != y} over Z = X x {0,1}.
LossTable misclassification_loss(const HypothesisClassTable& classifiers);

struct VcStats {
  std::size_t vc_dim = 0;
  std::uint64_t shatter_n = 0;  // max distinct patterns over n-point multisets
};

// Exhaustive shattering search; requires |X| <= 16.
VcStats vc_stats(const HypothesisClassTable& classifiers, std::size_t n);

// Matrix product of two kernels (output space of first = input of second).
StochasticKernel chain_kernel(const StochasticKernel& first,
                              const StochasticKernel& second);

/// k-fold adaptive composition. Stage j is a kernel whose rows are indexed by
/// prior_code * num_datasets + dataset_code, where prior_code is the
/// mixed-radix code of (W_1, ..., W_{j-1}) with W_1 least significant.
struct CompositionPlan {
  std::vector<StochasticKernel> stages;
  std::vector<std::size_t> output_sizes;  // |W_j| per stage
};

struct CompositionResult {
  // dataset code -> mixed-radix code over (W_1, ..., W_k), W_1 least
  // significant.
  StochasticKernel joint;
  std::vector<double> stage_conditional_mi;  // I(S; W_j | W^{j-1})
};

CompositionResult compose_adaptive(const CompositionPlan& plan,
                                   const FiniteDistribution& mu, std::size_t n);

}  // namespace genbound
