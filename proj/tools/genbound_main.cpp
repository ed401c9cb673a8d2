#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "genbound/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis of learning algorithms as stochastic kernels: "
               "input-output mutual information, generalization error, and "
               "the associated bounds"};
  app.require_subcommand(1);

  genbound::cli::RunOptions options;
  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"mi", "Exact input-output and risk-vector mutual information"},
      {"bound", "Evaluate closed-form bounds and sample-complexity formulas"},
      {"risk", "Exact risk summary with optional inequality checks"},
      {"gibbs", "Gibbs algorithm analysis and its bounds"},
      {"noisy-erm", "Noisy ERM analysis and its bounds"},
      {"two-stage", "Two-stage binary classification analysis"},
      {"compose", "Adaptive composition chain-rule analysis"},
      {"monitor", "Parallel-copy monitor experiment"},
      {"sweep", "Seeded random problem sweeps over the core inequalities"},
  };

  for (const auto& [name, description] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", options.config_path, "Experiment config (JSON)")
        ->required();
    sub->add_option("--seed", options.seed, "Override analysis.seed");
    sub->add_option("--trials", options.trials, "Override analysis.trials");
    sub->add_option("--format", options.format, "Report format: json or csv");
    sub->add_option("--out", options.out_path, "Report path (default: stdout)");
    sub->add_flag("--no-timestamp", options.no_timestamp,
                  "Omit the timestamp field from JSON reports");
    sub->callback([&options, name = name] { options.subcommand = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : genbound::cli::kExitConfig;
  }

  return genbound::cli::run(options, std::cout, std::cerr);
}
