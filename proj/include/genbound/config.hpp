#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genbound/algorithms.hpp"
#include "genbound/bounds.hpp"
#include "genbound/report.hpp"
#include "genbound/risk.hpp"
#include "genbound/spaces.hpp"

namespace genbound {

struct ProblemConfig {
  std::vector<double> mu;
  std::size_t n = 1;
  std::vector<std::vector<std::int64_t>> loss_numerators;  // |W| rows of |Z|
  std::int64_t denominator = 1;
  double loss_lower = 0.0;
  double loss_upper = 1.0;
};

enum class AlgorithmKind {
  kIndependent,  // constant rows: q (or uniform) regardless of the data
  kErm,
  kGibbs,
  kNoisyErm,
  kExplicit,  // rows given verbatim
  kTwoStage,
  kCompose,
};

struct AlgorithmConfig {
  AlgorithmKind kind = AlgorithmKind::kErm;
  TieRule tie_rule = TieRule::kLowestIndex;
  std::optional<double> beta;
  std::vector<double> q;
  std::vector<double> noise_means;
  std::optional<std::uint64_t> mc_samples;  // noisy ERM sampling mode
  std::vector<std::vector<double>> rows;
  // two-stage
  std::optional<std::size_t> n1, n2;
  std::vector<std::vector<std::uint8_t>> classifiers;  // truth table over X
  // adaptive composition: per-stage explicit row matrices
  std::vector<std::vector<std::vector<double>>> stages;
};

// One closed-form evaluation for the `bound` subcommand.
struct EvaluationRequest {
  std::string formula;
  ContinuousBoundParams params;
  std::optional<double> mi;
  std::optional<std::size_t> n1, n2;
  std::vector<double> population_risks;
  std::vector<double> noise_means;
  std::vector<double> q;
};

struct AnalysisConfig {
  std::optional<double> sigma;  // default: (loss upper - lower) / 2
  std::vector<std::string> checks;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::size_t monitor_copies = 1;
  std::vector<double> tail_alphas;
  std::vector<EvaluationRequest> evaluations;
  // sweep controls
  std::optional<std::uint64_t> sweep_problems;
  std::size_t sweep_max_z = 3;
  std::size_t sweep_max_n = 4;
  std::size_t sweep_max_w = 5;
};

struct OutputConfig {
  ReportFormat format = ReportFormat::kJson;
  std::optional<std::string> path;
};

struct ExperimentConfig {
  std::optional<ProblemConfig> problem;
  std::optional<AlgorithmConfig> algorithm;
  AnalysisConfig analysis;
  OutputConfig output;
};

// Throws ConfigError carrying a field path, or a line/column diagnostic for
// malformed JSON.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config_file(const std::string& path);

FiniteDistribution make_mu(const ProblemConfig& problem);
LossTable make_loss(const ProblemConfig& problem);

// Builds the kernel for the basic algorithm kinds (not two-stage/compose,
// which have their own result shapes). The seed feeds the noisy-ERM
// Monte Carlo mode.
StochasticKernel build_kernel(const ProblemConfig& problem,
                              const AlgorithmConfig& algorithm,
                              std::uint64_t seed = 0);

}  // namespace genbound
