#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "genbound/kernel.hpp"
#include "genbound/risk.hpp"
#include "genbound/spaces.hpp"

namespace genbound {

/// Explicit joint probability table over two or three finite coordinates.
/// Flat layout is row-major with the last axis fastest.
class JointPMF {
 public:
  JointPMF(std::vector<std::size_t> dims, std::vector<double> table,
           std::vector<std::string> axis_labels);

  std::size_t rank() const { return dims_.size(); }
  std::size_t dim(std::size_t axis) const { return dims_[axis]; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<double>& table() const { return table_; }
  const std::string& axis_label(std::size_t axis) const { return labels_[axis]; }

  double at(std::size_t i, std::size_t j) const {
    return table_[i * dims_[1] + j];
  }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return table_[(i * dims_[1] + j) * dims_[2] + k];
  }

  FiniteDistribution marginal(std::size_t axis) const;
  // Rank-3 only: marginalize the remaining axis away.
  JointPMF marginal_pair(std::size_t axis_a, std::size_t axis_b) const;
  // Rank-3 only: 2-axis joint of (lone axis, the other two flattened).
  JointPMF flatten(std::size_t lone_axis) const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> table_;
  std::vector<std::string> labels_;
};

/// Grid-certified subgaussian parameter: for every lambda in the grid,
/// log E[e^(lambda (U - EU))] <= lambda^2 sigma^2 / 2 + 1e-9.
struct SubgaussianCertificate {
  double sigma = 0.0;
  std::vector<double> lambda_grid;
  // max over the grid of (log-MGF minus the quadratic) at `sigma`.
  double max_violation = 0.0;
};

// All information quantities are in nats. 0 log 0 is treated as 0.
double entropy(const FiniteDistribution& p);

// D(p || q); requires the same label sets and absolute continuity
// (q = 0 implies p = 0), otherwise throws SupportError.
double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q);

double mutual_information(const JointPMF& joint);  // rank-2

// I of the two non-conditioning axes given the axis `cond_axis`.
double conditional_mi(const JointPMF& joint, std::size_t cond_axis);  // rank-3

// P_{S,W} = mu^(x)n (x) kernel as an explicit table. Subject to the
// enumeration capacity guard.
JointPMF build_io_joint(const FiniteDistribution& mu, std::size_t n,
                        const StochasticKernel& kernel);

// Joint over (S, intermediate, final) for a two-step chain.
JointPMF build_chain_joint(const FiniteDistribution& mu, std::size_t n,
                           const StochasticKernel& first,
                           const StochasticKernel& second);

// I(S;W) for the joint mu^(x)n (x) kernel, computed by streaming enumeration
// with a deterministic parallel reduction (never materializes the joint).
double io_mutual_information(const FiniteDistribution& mu, std::size_t n,
                             const StochasticKernel& kernel);

// Datasets grouped by their exact empirical-risk vectors. Keys are the
// integer numerator sums n*D*L_s(w) per hypothesis, so grouping never
// compares floating point. Group ids follow first occurrence in code order.
struct LambdaGrouping {
  std::vector<std::uint32_t> group_of;  // dataset code -> group id
  std::size_t num_groups = 0;
};

LambdaGrouping lambda_grouping(const LossTable& loss, std::size_t mu_size,
                               std::size_t n);

// Joint over (risk-vector group, W).
JointPMF build_lambda_joint(const FiniteDistribution& mu, std::size_t n,
                            const StochasticKernel& kernel,
                            const LossTable& loss);

// I(Lambda_W(S); W).
double lambda_mutual_information(const FiniteDistribution& mu, std::size_t n,
                                 const StochasticKernel& kernel,
                                 const LossTable& loss);

// Smallest sigma on a bisection grid whose quadratic dominates the centered
// log-MGF of (values, probs) at every lambda in the grid. The grid must be
// symmetric about 0 and reach |lambda| >= 20 / range(values).
SubgaussianCertificate subgaussian_sigma(std::span<const double> values,
                                         const FiniteDistribution& probs,
                                         std::span<const double> lambda_grid);

// Symmetric grid satisfying the subgaussian_sigma preconditions.
std::vector<double> default_lambda_grid(double value_range,
                                        std::size_t points_per_side = 40);

struct DecouplingCheck {
  double lhs = 0.0;  // |E[f(X,Y)] - E[f(Xbar,Ybar)]|
  double rhs = 0.0;  // sqrt(2 sigma^2 I(X;Y))
};

// f is row-major on dim(0) x dim(1) of a rank-2 joint.
DecouplingCheck dv_decoupling_check(const JointPMF& joint,
                                    std::span<const double> f, double sigma);

// log(1 + mean_risk / b): per-hypothesis capacity of an additive
// exponential-noise channel under an input mean constraint.
double exp_channel_capacity_term(double mean_risk, double b);

}  // namespace genbound
