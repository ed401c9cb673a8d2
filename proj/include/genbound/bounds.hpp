#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "genbound/spaces.hpp"

namespace genbound {

/// A named bound value with its anchor label, the inputs it was evaluated
/// from, and an optional comparison against an exactly measured quantity.
struct BoundReport {
  std::string name;
  std::string paper_anchor;
  std::vector<std::pair<std::string, double>> inputs;
  double bound_value = 0.0;
  std::optional<double> measured_value;
  std::optional<bool> satisfied;
  std::optional<double> slack;

  // satisfied = measured <= bound + 1e-9; slack = bound - measured.
  BoundReport& with_measured(double value);
};

/// Parameter bag for the closed-form risk bounds. The source material reuses
/// one symbol for both the Gibbs temperature and the confidence level; they
/// are kept apart here as `beta` and `beta_conf`.
struct ContinuousBoundParams {
  std::optional<std::size_t> d;            // dimension
  std::optional<double> rho;               // Lipschitz constant
  std::optional<double> radius;            // hypothesis norm bound B
  std::optional<double> a;                 // Gaussian width
  std::optional<double> b_width;           // prior width
  std::vector<double> w_o;                 // population minimizer
  std::vector<double> w_q;                 // prior center
  std::optional<double> beta;              // Gibbs inverse temperature
  std::optional<std::size_t> n;            // sample size
  std::optional<double> epsilon;           // mutual-information budget
  std::optional<double> sigma;             // subgaussian constant
  std::optional<double> alpha;             // accuracy
  std::optional<double> beta_conf;         // confidence level
  std::optional<double> g_at_n;            // growth-function value g(n)
  std::optional<std::size_t> vc_dim;       // V
  std::optional<std::size_t> monitor_copies;  // m
  std::optional<std::size_t> preferred_rank;  // i_o, 1-based
  std::optional<std::size_t> k;            // hypothesis count
  std::vector<double> a_grid;              // search grid for the Lipschitz bound
};

// sqrt(2 sigma^2 mi / n). Serves the expected-generalization bound with
// mi = I(S;W), the risk-vector variant with mi = I(Lambda;W), and the
// countable-space variant with mi = H(W).
double mi_gen_bound(double sigma, std::size_t n, double mi);

enum class SampleComplexityKind {
  kIndependent,  // (2 sigma^2 / alpha^2) log(2/beta)
  kThm3,         // (8 sigma^2 / alpha^2) (epsilon/beta + log(2/beta))
};

std::uint64_t sample_complexity(SampleComplexityKind kind, double sigma,
                                double alpha, double beta_conf,
                                std::optional<double> epsilon = std::nullopt);

struct Cor1Check {
  bool eps_ok = false;  // epsilon <= (g(n) - 1) beta log(2/beta)
  bool n_ok = false;    // n / g(n) >= (8 sigma^2 / alpha^2) log(2/beta)
};

Cor1Check cor1_check(double g_at_n, std::size_t n, double epsilon,
                     double beta_conf, double sigma, double alpha);

struct AbsGenBounds {
  double thm4 = 0.0;       // sqrt((2 sigma^2 / n)(epsilon + log 2))
  double russo_zou = 0.0;  // sigma/sqrt(n) + 36 sqrt(2 sigma^2 epsilon / n)
};

AbsGenBounds abs_gen_bounds(double sigma, std::size_t n, double epsilon);

// sqrt((2 sigma^2 d / n) log(2 B sqrt(dn))), the quantized-hypothesis bound
// at covering radius 1/sqrt(n). Throws std::domain_error when
// 2 B sqrt(dn) < 1 (the covering count degenerates).
double covering_bound(double sigma, std::size_t n, std::size_t d, double radius);

// sqrt(V log(n1 + 1) / (2 n2)).
double two_stage_bound(std::size_t vc_dim, std::size_t n1, std::size_t n2);

enum class GibbsBoundVariant {
  kGenEq20,          // |gen| <= beta / 2n
  kMi2Beta,          // I(S;W) <= 2 beta
  kRiskCor2,         // excess <= (1/beta) log(1/Q(w_o)) + beta/2n
  kRiskCor2Zipf,     // excess <= (2 log i_o + 1) / sqrt(n), beta = sqrt(n)
  kRiskCor2Uniform,  // excess <= sqrt(log k / n), beta = 2 sqrt(n log k)
  kRiskCor3,         // excess <= beta/2n + inf_a (a rho sqrt(d) + D/beta)
  kRiskCor3Gauss,    // excess <= d^(1/4) rho^(1/2) (|w_Q - w_o|^2 + 3) / (2 n^(1/4))
};

// The risk variants bound the EXCESS population risk, so callers compare
// them against E[L_mu(W)] - min_w L_mu(w).
BoundReport gibbs_bounds(const ContinuousBoundParams& params,
                         const std::optional<FiniteDistribution>& q,
                         GibbsBoundVariant variant);

enum class NoisyErmBoundVariant {
  kEq24,  // full characterization from the population risks and noise means
  kEq25,  // b_i = i^1.1 / n^(1/3) specialization: min + (i_o^1.1 + 3) / n^(1/3)
};

// Bound on E[L_mu(W)] of noisy ERM with exponential noise. preferred_rank is
// the 1-based index i_o of the population-risk minimizer.
double noisy_erm_bound(std::span<const double> population_risks,
                       std::span<const double> noise_means, std::size_t n,
                       std::size_t preferred_rank, NoisyErmBoundVariant variant);

// sqrt((2 sigma^2 / n)(m epsilon + log 2m)).
double monitor_bound(double sigma, std::size_t n, std::size_t m, double epsilon);

// D(N(w_o, a^2 I_d) || N(w_q, b^2 I_d)) in closed form.
double gaussian_kl(std::size_t d, double a, double b,
                   std::span<const double> w_o, std::span<const double> w_q);

}  // namespace genbound
