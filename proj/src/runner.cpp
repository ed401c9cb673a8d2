#include "genbound/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "genbound/config.hpp"
#include "genbound/errors.hpp"
#include "genbound/info.hpp"
#include "genbound/montecarlo.hpp"
#include "genbound/problems.hpp"
#include "genbound/reference.hpp"

namespace genbound::cli {

namespace {

constexpr double kCheckTolerance = 1e-9;

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

double clamp_mi(double mi) {
  if (mi < -1e-9) throw std::invalid_argument("mutual information < 0");
  return std::max(mi, 0.0);
}

struct ProblemContext {
  FiniteDistribution mu;
  LossTable loss;
  StochasticKernel kernel;
  std::size_t n;
  double sigma;
};

ProblemContext make_context(const ExperimentConfig& config) {
  if (!config.problem) throw ConfigError("problem", "required for this subcommand");
  if (!config.algorithm) throw ConfigError("algorithm", "required for this subcommand");
  FiniteDistribution mu = make_mu(*config.problem);
  LossTable loss = make_loss(*config.problem);
  StochasticKernel kernel =
      build_kernel(*config.problem, *config.algorithm, config.analysis.seed);
  const double sigma =
      config.analysis.sigma.value_or(loss.bounded_sigma());
  return ProblemContext{std::move(mu), std::move(loss), std::move(kernel),
                        config.problem->n, sigma};
}

bool wants(const std::vector<std::string>& checks, const std::string& name,
           const std::set<std::string>& defaults) {
  if (checks.empty()) return defaults.contains(name);
  return std::find(checks.begin(), checks.end(), name) != checks.end();
}

// Shared inequality checks for dataset-indexed algorithms.
void append_standard_checks(Report& report, const ProblemContext& ctx,
                            const std::vector<std::string>& checks,
                            const std::set<std::string>& defaults,
                            const RiskSummary& risk) {
  const double n = static_cast<double>(ctx.n);
  std::optional<double> io_mi;
  std::optional<double> lambda_mi;
  auto need_io = [&] {
    if (!io_mi) io_mi = clamp_mi(io_mutual_information(ctx.mu, ctx.n, ctx.kernel));
    return *io_mi;
  };
  auto need_lambda = [&] {
    if (!lambda_mi) {
      lambda_mi =
          clamp_mi(lambda_mutual_information(ctx.mu, ctx.n, ctx.kernel, ctx.loss));
    }
    return *lambda_mi;
  };

  if (wants(checks, "thm1", defaults)) {
    BoundReport bound;
    bound.name = "gen_vs_io_mi";
    bound.paper_anchor = "Theorem 1";
    bound.inputs = {{"sigma", ctx.sigma}, {"n", n}, {"mi", need_io()}};
    bound.bound_value = mi_gen_bound(ctx.sigma, ctx.n, need_io());
    bound.with_measured(std::abs(risk.gen_error));
    report.items.push_back(std::move(bound));
  }
  if (wants(checks, "thm2", defaults)) {
    BoundReport bound;
    bound.name = "gen_vs_lambda_mi";
    bound.paper_anchor = "Theorem 2";
    bound.inputs = {{"sigma", ctx.sigma}, {"n", n}, {"mi", need_lambda()}};
    bound.bound_value = mi_gen_bound(ctx.sigma, ctx.n, need_lambda());
    bound.with_measured(std::abs(risk.gen_error));
    report.items.push_back(std::move(bound));
  }
  if (wants(checks, "eq15", defaults)) {
    BoundReport bound;
    bound.name = "lambda_mi_vs_io_mi";
    bound.paper_anchor = "Eq. (15)";
    bound.inputs = {{"io_mi", need_io()}, {"lambda_mi", need_lambda()}};
    bound.bound_value = need_io();
    bound.with_measured(need_lambda());
    report.items.push_back(std::move(bound));
  }
  if (wants(checks, "thm4", defaults)) {
    BoundReport bound;
    bound.name = "abs_gen_vs_lambda_mi";
    bound.paper_anchor = "Theorem 4";
    bound.inputs = {{"sigma", ctx.sigma}, {"n", n}, {"epsilon", need_lambda()}};
    bound.bound_value = abs_gen_bounds(ctx.sigma, ctx.n, need_lambda()).thm4;
    bound.with_measured(risk.abs_gen_error);
    report.items.push_back(std::move(bound));
  }
  if (wants(checks, "eq16", defaults)) {
    const double h = entropy(build_io_joint(ctx.mu, ctx.n, ctx.kernel).marginal(1));
    BoundReport bound;
    bound.name = "gen_vs_entropy";
    bound.paper_anchor = "Eq. (16)";
    bound.inputs = {{"sigma", ctx.sigma}, {"n", n}, {"entropy", h}};
    bound.bound_value = mi_gen_bound(ctx.sigma, ctx.n, h);
    bound.with_measured(std::abs(risk.gen_error));
    report.items.push_back(std::move(bound));
  }
  if (wants(checks, "erm_min", defaults)) {
    const auto pop = population_risks(ctx.loss, ctx.mu);
    BoundReport bound;
    bound.name = "erm_empirical_vs_min_population";
    bound.paper_anchor = "Eq. (ERM <= min true)";
    bound.inputs = {{"min_population_risk",
                     *std::min_element(pop.begin(), pop.end())}};
    bound.bound_value = *std::min_element(pop.begin(), pop.end());
    bound.with_measured(risk.expected_empirical);
    report.items.push_back(std::move(bound));
  }
}

Report run_mi(const ExperimentConfig& config) {
  const ProblemContext ctx = make_context(config);
  const double io_mi = io_mutual_information(ctx.mu, ctx.n, ctx.kernel);
  const double lambda_mi =
      lambda_mutual_information(ctx.mu, ctx.n, ctx.kernel, ctx.loss);
  Report report;
  report.items.push_back(NamedValue{"io_mutual_information", "Eq. (7)", io_mi});
  report.items.push_back(
      NamedValue{"lambda_mutual_information", "Theorem 2 quantity", lambda_mi});
  BoundReport ordering;
  ordering.name = "lambda_mi_vs_io_mi";
  ordering.paper_anchor = "Eq. (15)";
  ordering.inputs = {{"io_mi", io_mi}, {"lambda_mi", lambda_mi}};
  ordering.bound_value = io_mi;
  ordering.with_measured(lambda_mi);
  report.items.push_back(std::move(ordering));
  return report;
}

Report run_risk(const ExperimentConfig& config) {
  const ProblemContext ctx = make_context(config);
  const RiskSummary risk = exact_risk_summary(ctx.mu, ctx.n, ctx.kernel, ctx.loss);
  Report report;
  report.items.push_back(NamedRisk{"exact_risk_summary", risk});
  append_standard_checks(report, ctx, config.analysis.checks, {}, risk);

  if (wants(config.analysis.checks, "mc_gen", {})) {
    if (config.analysis.trials < 100) {
      throw ConfigError("analysis.trials", "mc_gen needs at least 100 trials");
    }
    const auto estimate = estimate_gen(ctx.mu, ctx.n, ctx.kernel, ctx.loss,
                                       config.analysis.trials,
                                       config.analysis.seed);
    report.items.push_back(NamedEstimate{"gen_mc", estimate.gen});
    report.items.push_back(NamedEstimate{"abs_gen_mc", estimate.abs_gen});
    for (double alpha : config.analysis.tail_alphas) {
      report.items.push_back(NamedEstimate{
          "tail_at_" + format_real(alpha), estimate.tail.at(alpha)});
    }
  }
  return report;
}

Report run_gibbs(const ExperimentConfig& config) {
  if (!config.algorithm || config.algorithm->kind != AlgorithmKind::kGibbs) {
    throw ConfigError("algorithm.kind", "gibbs subcommand needs kind \"gibbs\"");
  }
  const ProblemContext ctx = make_context(config);
  const double beta = *config.algorithm->beta;
  std::vector<double> q_probs = config.algorithm->q;
  if (q_probs.empty()) {
    q_probs.assign(ctx.loss.num_hypotheses(),
                   1.0 / static_cast<double>(ctx.loss.num_hypotheses()));
  }
  const FiniteDistribution q(q_probs);

  const RiskSummary risk = exact_risk_summary(ctx.mu, ctx.n, ctx.kernel, ctx.loss);
  const double io_mi = clamp_mi(io_mutual_information(ctx.mu, ctx.n, ctx.kernel));

  Report report;
  report.items.push_back(NamedValue{"io_mutual_information", "Eq. (7)", io_mi});
  report.items.push_back(NamedRisk{"exact_risk_summary", risk});

  const auto& checks = config.analysis.checks;
  const std::set<std::string> defaults = {"thm1", "eq20", "mi_2beta", "cor2"};
  append_standard_checks(report, ctx, checks, defaults, risk);

  ContinuousBoundParams params;
  params.beta = beta;
  params.n = ctx.n;
  if (wants(checks, "eq20", defaults)) {
    BoundReport bound = gibbs_bounds(params, q, GibbsBoundVariant::kGenEq20);
    bound.with_measured(std::abs(risk.gen_error));
    report.items.push_back(std::move(bound));
  }
  if (wants(checks, "mi_2beta", defaults)) {
    BoundReport bound = gibbs_bounds(params, q, GibbsBoundVariant::kMi2Beta);
    bound.with_measured(io_mi);
    report.items.push_back(std::move(bound));
  }
  if (wants(checks, "cor2", defaults)) {
    params.preferred_rank = argmin_population_risk(ctx.loss, ctx.mu) + 1;
    BoundReport bound = gibbs_bounds(params, q, GibbsBoundVariant::kRiskCor2);
    bound.with_measured(risk.excess_risk);
    report.items.push_back(std::move(bound));
  }
  return report;
}

Report run_noisy_erm(const ExperimentConfig& config) {
  if (!config.algorithm || config.algorithm->kind != AlgorithmKind::kNoisyErm) {
    throw ConfigError("algorithm.kind", "noisy-erm subcommand needs kind \"noisy-erm\"");
  }
  const ProblemContext ctx = make_context(config);
  const auto& b = config.algorithm->noise_means;
  const auto pop = population_risks(ctx.loss, ctx.mu);
  const std::size_t i_o = argmin_population_risk(ctx.loss, ctx.mu) + 1;

  const RiskSummary risk = exact_risk_summary(ctx.mu, ctx.n, ctx.kernel, ctx.loss);
  const double io_mi = clamp_mi(io_mutual_information(ctx.mu, ctx.n, ctx.kernel));

  Report report;
  report.items.push_back(NamedValue{"io_mutual_information", "Eq. (7)", io_mi});
  report.items.push_back(NamedRisk{"exact_risk_summary", risk});

  const auto& checks = config.analysis.checks;
  const std::set<std::string> defaults = {"eq24", "appendix_f"};
  append_standard_checks(report, ctx, checks, defaults, risk);

  if (wants(checks, "eq24", defaults)) {
    BoundReport bound;
    bound.name = "noisy_erm_population_risk";
    bound.paper_anchor = "Corollary 4, Eq. (24)";
    bound.inputs = {{"n", static_cast<double>(ctx.n)},
                    {"i_o", static_cast<double>(i_o)}};
    bound.bound_value =
        noisy_erm_bound(pop, b, ctx.n, i_o, NoisyErmBoundVariant::kEq24);
    bound.with_measured(risk.expected_population);
    report.items.push_back(std::move(bound));
  }
  if (wants(checks, "eq25", defaults)) {
    BoundReport bound;
    bound.name = "noisy_erm_population_risk_schedule";
    bound.paper_anchor = "Eq. (25)";
    bound.inputs = {{"n", static_cast<double>(ctx.n)},
                    {"i_o", static_cast<double>(i_o)}};
    bound.bound_value =
        noisy_erm_bound(pop, b, ctx.n, i_o, NoisyErmBoundVariant::kEq25);
    bound.with_measured(risk.expected_population);
    report.items.push_back(std::move(bound));
  }
  if (wants(checks, "appendix_f", defaults)) {
    double capacity_sum = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      capacity_sum += exp_channel_capacity_term(pop[i], b[i]);
    }
    BoundReport bound;
    bound.name = "io_mi_vs_exp_channel_capacity";
    bound.paper_anchor = "Appendix F chain";
    bound.inputs = {{"capacity_sum", capacity_sum}};
    bound.bound_value = capacity_sum;
    bound.with_measured(io_mi);
    report.items.push_back(std::move(bound));
  }
  return report;
}

Report run_two_stage(const ExperimentConfig& config) {
  if (!config.problem) throw ConfigError("problem", "required");
  if (!config.algorithm || config.algorithm->kind != AlgorithmKind::kTwoStage) {
    throw ConfigError("algorithm.kind", "two-stage subcommand needs kind \"two-stage\"");
  }
  const auto& algorithm = *config.algorithm;
  if (algorithm.classifiers.empty()) {
    throw ConfigError("algorithm.classifiers", "required for two-stage");
  }
  if (!algorithm.n1 || !algorithm.n2) {
    throw ConfigError("algorithm", "n1 and n2 required for two-stage");
  }
  const std::size_t nx = algorithm.classifiers.front().size();
  std::vector<std::uint8_t> truth;
  for (const auto& row : algorithm.classifiers) {
    if (row.size() != nx) {
      throw ConfigError("algorithm.classifiers", "ragged truth table");
    }
    truth.insert(truth.end(), row.begin(), row.end());
  }
  const HypothesisClassTable classifiers(algorithm.classifiers.size(), nx,
                                         std::move(truth));
  const FiniteDistribution mu = make_mu(*config.problem);
  const std::size_t n1 = *algorithm.n1, n2 = *algorithm.n2;

  const auto result =
      two_stage_kernel(classifiers, mu, n1, n2, algorithm.tie_rule);
  const LossTable loss = misclassification_loss(classifiers);
  const auto stats = vc_stats(classifiers, n1);

  Report report;
  report.items.push_back(NamedValue{
      "vc_dim", "Sec. 4.2", static_cast<double>(stats.vc_dim)});
  report.items.push_back(NamedValue{
      "shatter_coefficient", "Sec. 4.2", static_cast<double>(stats.shatter_n)});

  // Worst prefix: conditional MI against the log-pattern-count chain.
  double worst_cond_mi = 0.0;
  double worst_log_patterns = 0.0;
  std::size_t max_patterns = 0;
  double expected_gen = 0.0;
  for (const auto& prefix : result.prefixes) {
    const double p_s1 = product_probability(mu, prefix.s1_code, n1);
    const double cond_mi =
        clamp_mi(io_mutual_information(mu, n2, prefix.conditional));
    worst_cond_mi = std::max(worst_cond_mi, cond_mi);
    worst_log_patterns = std::max(
        worst_log_patterns, std::log(static_cast<double>(prefix.pattern_count)));
    max_patterns = std::max(max_patterns, prefix.pattern_count);
    if (p_s1 > 0.0) {
      expected_gen +=
          p_s1 * exact_risk_summary(mu, n2, prefix.conditional, loss).gen_error;
    }
  }
  report.items.push_back(NamedValue{"max_pattern_count", "Sauer's Lemma",
                                    static_cast<double>(max_patterns)});

  BoundReport cond_bound;
  cond_bound.name = "conditional_mi_vs_pattern_entropy";
  cond_bound.paper_anchor = "Eq. (18) chain";
  cond_bound.inputs = {{"worst_log_patterns", worst_log_patterns}};
  cond_bound.bound_value = worst_log_patterns;
  cond_bound.with_measured(worst_cond_mi);
  report.items.push_back(std::move(cond_bound));

  BoundReport sauer_bound;
  sauer_bound.name = "pattern_entropy_vs_sauer";
  sauer_bound.paper_anchor = "Eq. (18), Sauer step";
  sauer_bound.inputs = {{"V", static_cast<double>(stats.vc_dim)},
                        {"n1", static_cast<double>(n1)}};
  sauer_bound.bound_value = static_cast<double>(stats.vc_dim) *
                            std::log(static_cast<double>(n1) + 1.0);
  sauer_bound.with_measured(worst_log_patterns);
  report.items.push_back(std::move(sauer_bound));

  BoundReport gen_bound;
  gen_bound.name = "two_stage_gen";
  gen_bound.paper_anchor = "Eq. (18)";
  gen_bound.inputs = {{"V", static_cast<double>(stats.vc_dim)},
                      {"n1", static_cast<double>(n1)},
                      {"n2", static_cast<double>(n2)}};
  gen_bound.bound_value = two_stage_bound(stats.vc_dim, n1, n2);
  gen_bound.with_measured(expected_gen);
  report.items.push_back(std::move(gen_bound));
  return report;
}

Report run_compose(const ExperimentConfig& config) {
  if (!config.problem) throw ConfigError("problem", "required");
  if (!config.algorithm || config.algorithm->kind != AlgorithmKind::kCompose) {
    throw ConfigError("algorithm.kind", "compose subcommand needs kind \"compose\"");
  }
  if (config.algorithm->stages.empty()) {
    throw ConfigError("algorithm.stages", "required for compose");
  }
  const FiniteDistribution mu = make_mu(*config.problem);
  const std::size_t n = config.problem->n;

  CompositionPlan plan;
  for (std::size_t j = 0; j < config.algorithm->stages.size(); ++j) {
    const auto& matrix = config.algorithm->stages[j];
    if (matrix.empty() || matrix.front().empty()) {
      throw ConfigError("algorithm.stages[" + std::to_string(j) + "]",
                        "empty stage");
    }
    std::vector<double> flat;
    for (const auto& row : matrix) {
      if (row.size() != matrix.front().size()) {
        throw ConfigError("algorithm.stages[" + std::to_string(j) + "]",
                          "ragged rows");
      }
      flat.insert(flat.end(), row.begin(), row.end());
    }
    try {
      plan.stages.emplace_back(matrix.size(), matrix.front().size(),
                               std::move(flat),
                               "prior code * num_datasets + dataset code");
    } catch (const std::invalid_argument& e) {
      throw ConfigError("algorithm.stages[" + std::to_string(j) + "]", e.what());
    }
    plan.output_sizes.push_back(matrix.front().size());
  }

  const auto result = compose_adaptive(plan, mu, n);
  const double joint_mi = clamp_mi(io_mutual_information(mu, n, result.joint));

  Report report;
  double chain_sum = 0.0;
  for (std::size_t j = 0; j < result.stage_conditional_mi.size(); ++j) {
    chain_sum += result.stage_conditional_mi[j];
    report.items.push_back(NamedValue{
        "conditional_mi_stage_" + std::to_string(j + 1), "Eq. (26)",
        result.stage_conditional_mi[j]});
  }
  report.items.push_back(NamedValue{"joint_mi", "Eq. (26)", joint_mi});

  BoundReport chain;
  chain.name = "chain_rule_identity";
  chain.paper_anchor = "Eq. (26)";
  chain.inputs = {{"sum_terms", chain_sum}, {"joint_mi", joint_mi}};
  chain.bound_value = 1e-10;
  chain.with_measured(std::abs(chain_sum - joint_mi));
  report.items.push_back(std::move(chain));

  // Marginal kernel of the final stage output.
  const std::size_t last = plan.output_sizes.back();
  const std::size_t prefix = result.joint.num_outputs() / last;
  std::vector<double> final_rows(result.joint.num_inputs() * last, 0.0);
  for (std::size_t s = 0; s < result.joint.num_inputs(); ++s) {
    const auto row = result.joint.row(s);
    for (std::size_t code = 0; code < row.size(); ++code) {
      final_rows[s * last + code / prefix] += row[code];
    }
  }
  const StochasticKernel final_kernel(result.joint.num_inputs(), last,
                                      std::move(final_rows));
  const double final_mi = clamp_mi(io_mutual_information(mu, n, final_kernel));
  report.items.push_back(NamedValue{"final_stage_mi", "Eq. (26)", final_mi});

  BoundReport dpi;
  dpi.name = "final_mi_vs_joint_mi";
  dpi.paper_anchor = "Eq. (26), data processing";
  dpi.inputs = {{"joint_mi", joint_mi}};
  dpi.bound_value = joint_mi;
  dpi.with_measured(final_mi);
  report.items.push_back(std::move(dpi));
  return report;
}

Report run_monitor(const ExperimentConfig& config) {
  if (config.analysis.trials == 0) {
    throw ConfigError("analysis.trials", "must be >= 1");
  }
  if (config.analysis.monitor_copies == 0) {
    throw ConfigError("analysis.m", "must be >= 1");
  }
  const ProblemContext ctx = make_context(config);
  const std::size_t m = config.analysis.monitor_copies;
  const double epsilon =
      clamp_mi(lambda_mutual_information(ctx.mu, ctx.n, ctx.kernel, ctx.loss));
  const auto outcome =
      monitor_experiment(ctx.mu, ctx.n, ctx.kernel, ctx.loss, m,
                         config.analysis.trials, config.analysis.seed);

  Report report;
  report.items.push_back(NamedValue{"lambda_mutual_information",
                                    "Theorem 2 quantity", epsilon});
  report.items.push_back(
      NamedEstimate{"max_abs_gen", outcome.max_abs_gen_estimate});
  report.items.push_back(
      NamedEstimate{"signed_selected_gap", outcome.signed_gap_estimate});

  BoundReport bound;
  bound.name = "monitor_max_gen";
  bound.paper_anchor = "Appendix B, Eq. (Emax)";
  bound.inputs = {{"sigma", ctx.sigma},
                  {"n", static_cast<double>(ctx.n)},
                  {"m", static_cast<double>(m)},
                  {"epsilon", epsilon}};
  bound.bound_value = monitor_bound(ctx.sigma, ctx.n, m, epsilon);
  bound.with_measured(outcome.max_abs_gen_estimate.ci_lo);
  report.items.push_back(std::move(bound));
  return report;
}

Report run_sweep(const ExperimentConfig& config) {
  const auto& analysis = config.analysis;
  const std::uint64_t problems = analysis.sweep_problems.value_or(100);
  std::vector<std::string> checks = analysis.checks;
  if (checks.empty()) checks = {"thm1", "thm2", "thm4", "eq15"};

  struct Aggregate {
    std::uint64_t failures = 0;
    double max_violation = -std::numeric_limits<double>::infinity();
  };
  std::map<std::string, Aggregate> aggregates;
  for (const auto& check : checks) aggregates[check];

  const double sigma = analysis.sigma.value_or(0.5);
  for (std::uint64_t i = 0; i < problems; ++i) {
    const RandomProblem problem =
        random_problem(analysis.seed + i + 1, analysis.sweep_max_z,
                       analysis.sweep_max_n, analysis.sweep_max_w);
    const RiskSummary risk =
        exact_risk_summary(problem.mu, problem.n, problem.kernel, problem.loss);
    const double io_mi = clamp_mi(
        io_mutual_information(problem.mu, problem.n, problem.kernel));
    const double lambda_mi = clamp_mi(lambda_mutual_information(
        problem.mu, problem.n, problem.kernel, problem.loss));

    auto record = [&](const std::string& check, double measured, double bound) {
      auto& agg = aggregates[check];
      const double violation = measured - bound;
      agg.max_violation = std::max(agg.max_violation, violation);
      if (violation > kCheckTolerance) ++agg.failures;
    };
    for (const auto& check : checks) {
      if (check == "thm1") {
        record(check, std::abs(risk.gen_error),
               mi_gen_bound(sigma, problem.n, io_mi));
      } else if (check == "thm2") {
        record(check, std::abs(risk.gen_error),
               mi_gen_bound(sigma, problem.n, lambda_mi));
      } else if (check == "thm4") {
        record(check, risk.abs_gen_error,
               abs_gen_bounds(sigma, problem.n, lambda_mi).thm4);
      } else if (check == "eq15") {
        record(check, lambda_mi, io_mi);
      } else {
        throw ConfigError("analysis.checks", "unknown sweep check \"" + check + "\"");
      }
    }
  }

  Report report;
  for (const auto& [check, agg] : aggregates) {
    BoundReport bound;
    bound.name = "sweep_" + check;
    bound.paper_anchor = check == "thm1"   ? "Theorem 1"
                         : check == "thm2" ? "Theorem 2"
                         : check == "thm4" ? "Theorem 4"
                                           : "Eq. (15)";
    bound.inputs = {{"problems", static_cast<double>(problems)},
                    {"max_violation", agg.max_violation},
                    {"tolerance", kCheckTolerance}};
    bound.bound_value = 0.0;
    bound.with_measured(static_cast<double>(agg.failures));
    report.items.push_back(std::move(bound));
  }
  return report;
}

BoundReport evaluation_report(const EvaluationRequest& request) {
  const auto& p = request.params;
  auto need = [&](const std::optional<double>& v, const char* name) {
    if (!v) throw ConfigError("evaluations", std::string("missing ") + name);
    return *v;
  };
  auto need_n = [&](const std::optional<std::size_t>& v, const char* name) {
    if (!v) throw ConfigError("evaluations", std::string("missing ") + name);
    return *v;
  };

  BoundReport report;
  const std::string& f = request.formula;
  if (f == "mi_gen_bound") {
    const double sigma = need(p.sigma, "sigma");
    const std::size_t n = need_n(p.n, "n");
    const double mi = need(request.mi, "mi");
    report.name = f;
    report.paper_anchor = "Theorem 1";
    report.inputs = {{"sigma", sigma}, {"n", static_cast<double>(n)}, {"mi", mi}};
    report.bound_value = mi_gen_bound(sigma, n, mi);
  } else if (f == "sample_complexity_independent" || f == "sample_complexity_thm3") {
    const double sigma = need(p.sigma, "sigma");
    const double alpha = need(p.alpha, "alpha");
    const double beta_conf = need(p.beta_conf, "beta_conf");
    const bool thm3 = f == "sample_complexity_thm3";
    report.name = f;
    report.paper_anchor = thm3 ? "Theorem 3, Eq. (14)" : "Eq. (9)";
    report.inputs = {{"sigma", sigma}, {"alpha", alpha}, {"beta_conf", beta_conf}};
    if (thm3) {
      const double epsilon = need(p.epsilon, "epsilon");
      report.inputs.emplace_back("epsilon", epsilon);
      report.bound_value = static_cast<double>(sample_complexity(
          SampleComplexityKind::kThm3, sigma, alpha, beta_conf, epsilon));
    } else {
      report.bound_value = static_cast<double>(sample_complexity(
          SampleComplexityKind::kIndependent, sigma, alpha, beta_conf));
    }
  } else if (f == "abs_gen_thm4" || f == "abs_gen_russo_zou") {
    const double sigma = need(p.sigma, "sigma");
    const std::size_t n = need_n(p.n, "n");
    const double epsilon = need(p.epsilon, "epsilon");
    const auto bounds = abs_gen_bounds(sigma, n, epsilon);
    report.name = f;
    report.paper_anchor =
        f == "abs_gen_thm4" ? "Theorem 4" : "Russo-Zou Prop. 3.2";
    report.inputs = {{"sigma", sigma},
                     {"n", static_cast<double>(n)},
                     {"epsilon", epsilon}};
    report.bound_value = f == "abs_gen_thm4" ? bounds.thm4 : bounds.russo_zou;
  } else if (f == "covering_bound") {
    const double sigma = need(p.sigma, "sigma");
    const std::size_t n = need_n(p.n, "n");
    const std::size_t d = need_n(p.d, "d");
    const double radius = need(p.radius, "B");
    report.name = f;
    report.paper_anchor = "Sec. 4.1 covering bound";
    report.inputs = {{"sigma", sigma},
                     {"n", static_cast<double>(n)},
                     {"d", static_cast<double>(d)},
                     {"B", radius}};
    report.bound_value = covering_bound(sigma, n, d, radius);
  } else if (f == "two_stage_bound") {
    const std::size_t v = need_n(p.vc_dim, "V");
    const std::size_t n1 = need_n(request.n1, "n1");
    const std::size_t n2 = need_n(request.n2, "n2");
    report.name = f;
    report.paper_anchor = "Eq. (18)";
    report.inputs = {{"V", static_cast<double>(v)},
                     {"n1", static_cast<double>(n1)},
                     {"n2", static_cast<double>(n2)}};
    report.bound_value = two_stage_bound(v, n1, n2);
  } else if (f == "monitor_bound") {
    const double sigma = need(p.sigma, "sigma");
    const std::size_t n = need_n(p.n, "n");
    const std::size_t m = need_n(p.monitor_copies, "m");
    const double epsilon = need(p.epsilon, "epsilon");
    report.name = f;
    report.paper_anchor = "Appendix B, Eq. (Emax)";
    report.inputs = {{"sigma", sigma},
                     {"n", static_cast<double>(n)},
                     {"m", static_cast<double>(m)},
                     {"epsilon", epsilon}};
    report.bound_value = monitor_bound(sigma, n, m, epsilon);
  } else if (f == "gibbs_gen") {
    report = gibbs_bounds(p, std::nullopt, GibbsBoundVariant::kGenEq20);
  } else if (f == "gibbs_mi") {
    report = gibbs_bounds(p, std::nullopt, GibbsBoundVariant::kMi2Beta);
  } else if (f == "gibbs_excess") {
    if (request.q.empty()) throw ConfigError("evaluations", "missing q");
    report = gibbs_bounds(p, FiniteDistribution(request.q),
                          GibbsBoundVariant::kRiskCor2);
  } else if (f == "gibbs_excess_zipf") {
    report = gibbs_bounds(p, std::nullopt, GibbsBoundVariant::kRiskCor2Zipf);
  } else if (f == "gibbs_excess_uniform") {
    report = gibbs_bounds(p, std::nullopt, GibbsBoundVariant::kRiskCor2Uniform);
  } else if (f == "gibbs_excess_lipschitz") {
    report = gibbs_bounds(p, std::nullopt, GibbsBoundVariant::kRiskCor3);
  } else if (f == "gibbs_excess_gauss_prior") {
    report = gibbs_bounds(p, std::nullopt, GibbsBoundVariant::kRiskCor3Gauss);
  } else if (f == "noisy_erm_eq24" || f == "noisy_erm_eq25") {
    const std::size_t n = need_n(p.n, "n");
    const std::size_t i_o = need_n(p.preferred_rank, "i_o");
    const auto variant = f == "noisy_erm_eq24" ? NoisyErmBoundVariant::kEq24
                                               : NoisyErmBoundVariant::kEq25;
    report.name = f;
    report.paper_anchor =
        f == "noisy_erm_eq24" ? "Corollary 4, Eq. (24)" : "Eq. (25)";
    report.inputs = {{"n", static_cast<double>(n)},
                     {"i_o", static_cast<double>(i_o)}};
    report.bound_value = noisy_erm_bound(request.population_risks,
                                         request.noise_means, n, i_o, variant);
  } else if (f == "exp_channel_sum") {
    if (request.population_risks.size() != request.noise_means.size() ||
        request.population_risks.empty()) {
      throw ConfigError("evaluations", "need matching risks and noise_means");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < request.population_risks.size(); ++i) {
      total += exp_channel_capacity_term(request.population_risks[i],
                                         request.noise_means[i]);
    }
    report.name = f;
    report.paper_anchor = "Appendix F";
    report.inputs = {
        {"terms", static_cast<double>(request.population_risks.size())}};
    report.bound_value = total;
  } else {
    throw ConfigError("evaluations", "unknown formula \"" + f + "\"");
  }
  return report;
}

Report run_bound(const ExperimentConfig& config) {
  if (config.analysis.evaluations.empty()) {
    throw ConfigError("analysis.evaluations", "bound subcommand needs evaluations");
  }
  Report report;
  for (const auto& request : config.analysis.evaluations) {
    if (request.formula == "cor1") {
      // Two booleans rather than a bound value.
      const auto& p = request.params;
      auto need = [&](const std::optional<double>& v, const char* name) {
        if (!v) throw ConfigError("evaluations", std::string("missing ") + name);
        return *v;
      };
      if (!p.n) throw ConfigError("evaluations", "missing n");
      const auto check =
          cor1_check(need(p.g_at_n, "g_at_n"), *p.n, need(p.epsilon, "epsilon"),
                     need(p.beta_conf, "beta_conf"), need(p.sigma, "sigma"),
                     need(p.alpha, "alpha"));
      report.items.push_back(
          NamedValue{"cor1_eps_ok", "Corollary 1", check.eps_ok ? 1.0 : 0.0});
      report.items.push_back(
          NamedValue{"cor1_n_ok", "Corollary 1", check.n_ok ? 1.0 : 0.0});
      continue;
    }
    report.items.push_back(evaluation_report(request));
  }
  return report;
}

}  // namespace

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig config = parse_config_file(options.config_path);
    if (options.seed) config.analysis.seed = *options.seed;
    if (options.trials) config.analysis.trials = *options.trials;
    if (options.format) config.output.format = parse_report_format(*options.format);
    if (options.out_path) config.output.path = *options.out_path;

    Report report;
    const std::string& sub = options.subcommand;
    if (sub == "mi") {
      report = run_mi(config);
    } else if (sub == "risk") {
      report = run_risk(config);
    } else if (sub == "bound") {
      report = run_bound(config);
    } else if (sub == "gibbs") {
      report = run_gibbs(config);
    } else if (sub == "noisy-erm") {
      report = run_noisy_erm(config);
    } else if (sub == "two-stage") {
      report = run_two_stage(config);
    } else if (sub == "compose") {
      report = run_compose(config);
    } else if (sub == "monitor") {
      report = run_monitor(config);
    } else if (sub == "sweep") {
      report = run_sweep(config);
    } else {
      err << "unknown subcommand: " << sub << "\n";
      return kExitConfig;
    }

    if (!options.no_timestamp && config.output.format == ReportFormat::kJson) {
      report.timestamp = utc_timestamp();
    }
    const std::string text = emit_report(report, config.output.format);
    if (config.output.path) {
      std::ofstream file(*config.output.path, std::ios::binary);
      if (!file) {
        err << "cannot write report to " << *config.output.path << "\n";
        return kExitError;
      }
      file << text;
    } else {
      out << text;
    }
    return report_has_violation(report) ? kExitViolation : kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace genbound::cli
