#include "genbound/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "genbound/errors.hpp"

namespace genbound {

namespace {

using ordered_json = nlohmann::ordered_json;

// Typed field access that reports the JSON path of whatever is wrong.
class Cursor {
 public:
  Cursor(const ordered_json& node, std::string path)
      : node_(&node), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const ordered_json& raw() const { return *node_; }

  bool has(const char* name) const {
    return node_->is_object() && node_->contains(name);
  }

  Cursor child(const char* name) const {
    if (!node_->is_object()) throw ConfigError(path_, "expected an object");
    if (!node_->contains(name)) {
      throw ConfigError(path_, std::string("missing field \"") + name + "\"");
    }
    return Cursor(node_->at(name), join(name));
  }

  std::optional<Cursor> maybe(const char* name) const {
    if (!has(name)) return std::nullopt;
    return Cursor(node_->at(name), join(name));
  }

  std::size_t array_size() const {
    if (!node_->is_array()) throw ConfigError(path_, "expected an array");
    return node_->size();
  }

  Cursor element(std::size_t i) const {
    return Cursor(node_->at(i), path_ + "[" + std::to_string(i) + "]");
  }

  double as_double() const {
    if (!node_->is_number()) throw ConfigError(path_, "expected a number");
    return node_->get<double>();
  }

  std::int64_t as_int() const {
    if (!node_->is_number_integer()) throw ConfigError(path_, "expected an integer");
    return node_->get<std::int64_t>();
  }

  std::size_t as_size() const {
    const std::int64_t v = as_int();
    if (v < 0) throw ConfigError(path_, "expected a nonnegative integer");
    return static_cast<std::size_t>(v);
  }

  std::uint64_t as_u64() const {
    const std::int64_t v = as_int();
    if (v < 0) throw ConfigError(path_, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  }

  std::string as_string() const {
    if (!node_->is_string()) throw ConfigError(path_, "expected a string");
    return node_->get<std::string>();
  }

  std::vector<double> as_double_array() const {
    std::vector<double> out;
    out.reserve(array_size());
    for (std::size_t i = 0; i < array_size(); ++i) out.push_back(element(i).as_double());
    return out;
  }

 private:
  std::string join(const char* name) const {
    return path_.empty() ? name : path_ + "." + name;
  }

  const ordered_json* node_;
  std::string path_;
};

ProblemConfig parse_problem(const Cursor& cursor) {
  ProblemConfig problem;
  problem.mu = cursor.child("mu").as_double_array();
  problem.n = cursor.child("n").as_size();
  if (problem.n == 0) throw ConfigError(cursor.path() + ".n", "must be >= 1");

  // The loss table is optional: two-stage and compose experiments derive or
  // do not need one.
  if (const auto loss = cursor.maybe("loss")) {
    const Cursor numerators = loss->child("numerators");
    for (std::size_t w = 0; w < numerators.array_size(); ++w) {
      const Cursor row = numerators.element(w);
      std::vector<std::int64_t> values;
      values.reserve(row.array_size());
      for (std::size_t z = 0; z < row.array_size(); ++z) {
        values.push_back(row.element(z).as_int());
      }
      if (values.size() != problem.mu.size()) {
        throw ConfigError(row.path(), "row length must equal |Z| = " +
                                          std::to_string(problem.mu.size()));
      }
      problem.loss_numerators.push_back(std::move(values));
    }
    if (problem.loss_numerators.empty()) {
      throw ConfigError(numerators.path(), "need at least one hypothesis row");
    }
    problem.denominator = loss->child("denominator").as_int();
    if (const auto bounds = loss->maybe("bounds")) {
      if (bounds->array_size() != 2) {
        throw ConfigError(bounds->path(), "expected [lower, upper]");
      }
      problem.loss_lower = bounds->element(0).as_double();
      problem.loss_upper = bounds->element(1).as_double();
    }
  }
  return problem;
}

AlgorithmKind parse_kind(const Cursor& cursor) {
  const std::string kind = cursor.as_string();
  if (kind == "independent") return AlgorithmKind::kIndependent;
  if (kind == "erm") return AlgorithmKind::kErm;
  if (kind == "gibbs") return AlgorithmKind::kGibbs;
  if (kind == "noisy-erm") return AlgorithmKind::kNoisyErm;
  if (kind == "explicit") return AlgorithmKind::kExplicit;
  if (kind == "two-stage") return AlgorithmKind::kTwoStage;
  if (kind == "compose") return AlgorithmKind::kCompose;
  throw ConfigError(cursor.path(), "unknown algorithm kind \"" + kind + "\"");
}

std::vector<std::vector<double>> parse_row_matrix(const Cursor& cursor) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < cursor.array_size(); ++i) {
    rows.push_back(cursor.element(i).as_double_array());
  }
  return rows;
}

AlgorithmConfig parse_algorithm(const Cursor& cursor) {
  AlgorithmConfig algorithm;
  algorithm.kind = parse_kind(cursor.child("kind"));
  if (const auto tie = cursor.maybe("tie_rule")) {
    const std::string rule = tie->as_string();
    if (rule == "lowest-index") {
      algorithm.tie_rule = TieRule::kLowestIndex;
    } else if (rule == "uniform-over-argmin") {
      algorithm.tie_rule = TieRule::kUniformOverArgmin;
    } else {
      throw ConfigError(tie->path(), "unknown tie rule \"" + rule + "\"");
    }
  }
  if (const auto beta = cursor.maybe("beta")) algorithm.beta = beta->as_double();
  if (const auto q = cursor.maybe("q")) algorithm.q = q->as_double_array();
  if (const auto means = cursor.maybe("noise_means")) {
    algorithm.noise_means = means->as_double_array();
  }
  if (const auto samples = cursor.maybe("mc_samples")) {
    algorithm.mc_samples = samples->as_u64();
  }
  if (const auto rows = cursor.maybe("rows")) {
    algorithm.rows = parse_row_matrix(*rows);
  }
  if (const auto n1 = cursor.maybe("n1")) algorithm.n1 = n1->as_size();
  if (const auto n2 = cursor.maybe("n2")) algorithm.n2 = n2->as_size();
  if (const auto classifiers = cursor.maybe("classifiers")) {
    for (std::size_t w = 0; w < classifiers->array_size(); ++w) {
      const Cursor row = classifiers->element(w);
      std::vector<std::uint8_t> bits;
      for (std::size_t x = 0; x < row.array_size(); ++x) {
        const std::int64_t bit = row.element(x).as_int();
        if (bit != 0 && bit != 1) {
          throw ConfigError(row.element(x).path(), "labels must be 0 or 1");
        }
        bits.push_back(static_cast<std::uint8_t>(bit));
      }
      algorithm.classifiers.push_back(std::move(bits));
    }
  }
  if (const auto stages = cursor.maybe("stages")) {
    for (std::size_t j = 0; j < stages->array_size(); ++j) {
      algorithm.stages.push_back(parse_row_matrix(stages->element(j)));
    }
  }
  return algorithm;
}

EvaluationRequest parse_evaluation(const Cursor& cursor) {
  EvaluationRequest request;
  request.formula = cursor.child("formula").as_string();
  ContinuousBoundParams& p = request.params;
  if (const auto v = cursor.maybe("d")) p.d = v->as_size();
  if (const auto v = cursor.maybe("rho")) p.rho = v->as_double();
  if (const auto v = cursor.maybe("B")) p.radius = v->as_double();
  if (const auto v = cursor.maybe("a")) p.a = v->as_double();
  if (const auto v = cursor.maybe("b_width")) p.b_width = v->as_double();
  if (const auto v = cursor.maybe("w_o")) p.w_o = v->as_double_array();
  if (const auto v = cursor.maybe("w_q")) p.w_q = v->as_double_array();
  if (const auto v = cursor.maybe("beta")) p.beta = v->as_double();
  if (const auto v = cursor.maybe("n")) p.n = v->as_size();
  if (const auto v = cursor.maybe("epsilon")) p.epsilon = v->as_double();
  if (const auto v = cursor.maybe("sigma")) p.sigma = v->as_double();
  if (const auto v = cursor.maybe("alpha")) p.alpha = v->as_double();
  if (const auto v = cursor.maybe("beta_conf")) p.beta_conf = v->as_double();
  if (const auto v = cursor.maybe("g_at_n")) p.g_at_n = v->as_double();
  if (const auto v = cursor.maybe("V")) p.vc_dim = v->as_size();
  if (const auto v = cursor.maybe("m")) p.monitor_copies = v->as_size();
  if (const auto v = cursor.maybe("i_o")) p.preferred_rank = v->as_size();
  if (const auto v = cursor.maybe("k")) p.k = v->as_size();
  if (const auto v = cursor.maybe("a_grid")) p.a_grid = v->as_double_array();
  if (const auto v = cursor.maybe("mi")) request.mi = v->as_double();
  if (const auto v = cursor.maybe("n1")) request.n1 = v->as_size();
  if (const auto v = cursor.maybe("n2")) request.n2 = v->as_size();
  if (const auto v = cursor.maybe("population_risks")) {
    request.population_risks = v->as_double_array();
  }
  if (const auto v = cursor.maybe("noise_means")) {
    request.noise_means = v->as_double_array();
  }
  if (const auto v = cursor.maybe("q")) request.q = v->as_double_array();
  return request;
}

AnalysisConfig parse_analysis(const Cursor& cursor) {
  AnalysisConfig analysis;
  if (const auto sigma = cursor.maybe("sigma")) analysis.sigma = sigma->as_double();
  if (const auto checks = cursor.maybe("checks")) {
    for (std::size_t i = 0; i < checks->array_size(); ++i) {
      analysis.checks.push_back(checks->element(i).as_string());
    }
  }
  if (const auto trials = cursor.maybe("trials")) analysis.trials = trials->as_u64();
  if (const auto seed = cursor.maybe("seed")) analysis.seed = seed->as_u64();
  if (const auto m = cursor.maybe("m")) analysis.monitor_copies = m->as_size();
  if (const auto alphas = cursor.maybe("tail_alphas")) {
    analysis.tail_alphas = alphas->as_double_array();
  }
  if (const auto evals = cursor.maybe("evaluations")) {
    for (std::size_t i = 0; i < evals->array_size(); ++i) {
      analysis.evaluations.push_back(parse_evaluation(evals->element(i)));
    }
  }
  if (const auto sweep = cursor.maybe("sweep")) {
    analysis.sweep_problems = sweep->child("problems").as_u64();
    if (const auto z = sweep->maybe("max_z")) analysis.sweep_max_z = z->as_size();
    if (const auto n = sweep->maybe("max_n")) analysis.sweep_max_n = n->as_size();
    if (const auto w = sweep->maybe("max_w")) analysis.sweep_max_w = w->as_size();
  }
  return analysis;
}

OutputConfig parse_output(const Cursor& cursor) {
  OutputConfig output;
  if (const auto format = cursor.maybe("format")) {
    output.format = parse_report_format(format->as_string());
  }
  if (const auto path = cursor.maybe("path")) output.path = path->as_string();
  return output;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

ExperimentConfig parse_config_text(std::string_view text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::ostringstream message;
    message << "malformed JSON at line " << line << ", column " << column;
    throw ConfigError("", message.str());
  }
  const Cursor cursor(root, "");
  if (!root.is_object()) throw ConfigError("", "config must be a JSON object");

  ExperimentConfig config;
  if (const auto problem = cursor.maybe("problem")) {
    config.problem = parse_problem(*problem);
  }
  if (const auto algorithm = cursor.maybe("algorithm")) {
    config.algorithm = parse_algorithm(*algorithm);
  }
  if (const auto analysis = cursor.maybe("analysis")) {
    config.analysis = parse_analysis(*analysis);
  }
  if (const auto output = cursor.maybe("output")) {
    config.output = parse_output(*output);
  }
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

FiniteDistribution make_mu(const ProblemConfig& problem) {
  try {
    return FiniteDistribution(problem.mu);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("problem.mu", e.what());
  }
}

LossTable make_loss(const ProblemConfig& problem) {
  if (problem.loss_numerators.empty()) {
    throw ConfigError("problem.loss", "required for this subcommand");
  }
  std::vector<std::int64_t> flat;
  flat.reserve(problem.loss_numerators.size() * problem.mu.size());
  for (const auto& row : problem.loss_numerators) {
    flat.insert(flat.end(), row.begin(), row.end());
  }
  try {
    return LossTable(problem.loss_numerators.size(), problem.mu.size(),
                     std::move(flat), problem.denominator, problem.loss_lower,
                     problem.loss_upper);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("problem.loss", e.what());
  }
}

StochasticKernel build_kernel(const ProblemConfig& problem,
                              const AlgorithmConfig& algorithm,
                              std::uint64_t seed) {
  const LossTable loss = make_loss(problem);
  const std::size_t z = problem.mu.size();
  const std::size_t nw = loss.num_hypotheses();
  const std::uint64_t num_datasets = checked_enumeration_size(z, problem.n);

  switch (algorithm.kind) {
    case AlgorithmKind::kIndependent: {
      std::vector<double> row = algorithm.q;
      if (row.empty()) {
        row.assign(nw, 1.0 / static_cast<double>(nw));
      }
      if (row.size() != nw) {
        throw ConfigError("algorithm.q", "length must equal |W|");
      }
      return StochasticKernel::constant(num_datasets, row);
    }
    case AlgorithmKind::kErm:
      return erm_kernel(loss, z, problem.n, algorithm.tie_rule);
    case AlgorithmKind::kGibbs: {
      if (!algorithm.beta) throw ConfigError("algorithm.beta", "required for gibbs");
      std::vector<double> q = algorithm.q;
      if (q.empty()) q.assign(nw, 1.0 / static_cast<double>(nw));
      if (q.size() != nw) throw ConfigError("algorithm.q", "length must equal |W|");
      return gibbs_kernel(loss, z, problem.n, *algorithm.beta,
                          FiniteDistribution(std::move(q)));
    }
    case AlgorithmKind::kNoisyErm: {
      if (algorithm.noise_means.size() != nw) {
        throw ConfigError("algorithm.noise_means", "need one mean per hypothesis");
      }
      if (algorithm.mc_samples) {
        return noisy_erm_kernel_mc(loss, z, problem.n, algorithm.noise_means,
                                   *algorithm.mc_samples, seed);
      }
      return noisy_erm_kernel(loss, z, problem.n, algorithm.noise_means);
    }
    case AlgorithmKind::kExplicit: {
      if (algorithm.rows.size() != num_datasets) {
        throw ConfigError("algorithm.rows",
                          "need one row per dataset code (" +
                              std::to_string(num_datasets) + ")");
      }
      std::vector<double> flat;
      flat.reserve(num_datasets * nw);
      for (std::size_t i = 0; i < algorithm.rows.size(); ++i) {
        if (algorithm.rows[i].size() != nw) {
          throw ConfigError("algorithm.rows[" + std::to_string(i) + "]",
                            "length must equal |W|");
        }
        flat.insert(flat.end(), algorithm.rows[i].begin(), algorithm.rows[i].end());
      }
      try {
        return StochasticKernel(num_datasets, nw, std::move(flat));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("algorithm.rows", e.what());
      }
    }
    case AlgorithmKind::kTwoStage:
    case AlgorithmKind::kCompose:
      throw ConfigError("algorithm.kind",
                        "two-stage/compose are driven by their own subcommands");
  }
  throw ConfigError("algorithm.kind", "unhandled kind");
}

}  // namespace genbound
