#include "genbound/algorithms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "genbound/errors.hpp"
#include "genbound/info.hpp"
#include "genbound/parallel.hpp"
#include "genbound/rng.hpp"

namespace genbound {

HypothesisClassTable::HypothesisClassTable(std::size_t num_hypotheses,
                                           std::size_t num_points,
                                           std::vector<std::uint8_t> truth)
    : num_hypotheses_(num_hypotheses),
      num_points_(num_points),
      truth_(std::move(truth)) {
  if (num_hypotheses_ == 0 || num_points_ == 0) {
    throw std::invalid_argument("hypothesis class must be non-empty");
  }
  if (truth_.size() != num_hypotheses_ * num_points_) {
    throw std::invalid_argument("truth table shape mismatch");
  }
  for (std::uint8_t v : truth_) {
    if (v > 1) throw std::invalid_argument("truth table entries must be 0/1");
  }
  std::unordered_set<std::string> rows;
  for (std::size_t w = 0; w < num_hypotheses_; ++w) {
    std::string row(reinterpret_cast<const char*>(truth_.data() + w * num_points_),
                    num_points_);
    if (!rows.insert(row).second) {
      throw std::invalid_argument("duplicate classifier row " + std::to_string(w));
    }
  }
}

HypothesisClassTable HypothesisClassTable::full_class(std::size_t num_points) {
  if (num_points > 16) throw CapacityError("full class limited to |X| <= 16");
  const std::size_t count = std::size_t{1} << num_points;
  std::vector<std::uint8_t> truth(count * num_points);
  for (std::size_t w = 0; w < count; ++w) {
    for (std::size_t x = 0; x < num_points; ++x) {
      truth[w * num_points + x] = static_cast<std::uint8_t>((w >> x) & 1);
    }
  }
  return HypothesisClassTable(count, num_points, std::move(truth));
}

HypothesisClassTable HypothesisClassTable::thresholds(std::size_t num_points) {
  const std::size_t count = num_points + 1;
  std::vector<std::uint8_t> truth(count * num_points);
  for (std::size_t w = 0; w < count; ++w) {
    const std::size_t t = w + 1;  // w_t(x) = 1{x >= t}, x in {1..num_points}
    for (std::size_t x = 0; x < num_points; ++x) {
      truth[w * num_points + x] = static_cast<std::uint8_t>(x + 1 >= t);
    }
  }
  return HypothesisClassTable(count, num_points, std::move(truth));
}

HypothesisClassTable HypothesisClassTable::intervals(std::size_t num_points) {
  std::vector<std::uint8_t> truth;
  std::size_t count = 0;
  auto add = [&](std::size_t a, std::size_t b) {
    for (std::size_t x = 0; x < num_points; ++x) {
      truth.push_back(static_cast<std::uint8_t>(a <= x + 1 && x + 1 <= b));
    }
    ++count;
  };
  add(1, 0);  // empty interval
  for (std::size_t a = 1; a <= num_points; ++a) {
    for (std::size_t b = a; b <= num_points; ++b) add(a, b);
  }
  return HypothesisClassTable(count, num_points, std::move(truth));
}

namespace {

// Distributes the row mass over argmin entries per the tie rule.
void fill_argmin_row(std::span<const std::int64_t> scores, TieRule tie_rule,
                     std::span<double> row) {
  const std::int64_t best = *std::min_element(scores.begin(), scores.end());
  std::fill(row.begin(), row.end(), 0.0);
  if (tie_rule == TieRule::kLowestIndex) {
    for (std::size_t w = 0; w < scores.size(); ++w) {
      if (scores[w] == best) {
        row[w] = 1.0;
        return;
      }
    }
  }
  std::size_t ties = 0;
  for (std::int64_t v : scores) ties += (v == best);
  const double mass = 1.0 / static_cast<double>(ties);
  for (std::size_t w = 0; w < scores.size(); ++w) {
    if (scores[w] == best) row[w] = mass;
  }
}

}  // namespace

StochasticKernel erm_kernel(const LossTable& loss, std::size_t mu_size,
                            std::size_t n, TieRule tie_rule) {
  if (loss.num_instances() != mu_size) {
    throw std::invalid_argument("loss table does not match instance space");
  }
  const std::uint64_t num_datasets = checked_enumeration_size(mu_size, n);
  const std::size_t nw = loss.num_hypotheses();
  std::vector<double> rows(num_datasets * nw);
  parallel_blocks(num_datasets, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<std::int64_t> scores(nw);
    DatasetOdometer odo(begin, mu_size, n);
    for (std::uint64_t s = begin; s < end; ++s, odo.advance()) {
      for (std::size_t w = 0; w < nw; ++w) {
        scores[w] = loss.empirical_numerator(w, odo.digits());
      }
      fill_argmin_row(scores, tie_rule, {rows.data() + s * nw, nw});
    }
  });
  return StochasticKernel(num_datasets, nw, std::move(rows));
}

StochasticKernel gibbs_kernel(const LossTable& loss, std::size_t mu_size,
                              std::size_t n, double beta,
                              const FiniteDistribution& q) {
  if (loss.num_instances() != mu_size) {
    throw std::invalid_argument("loss table does not match instance space");
  }
  if (q.size() != loss.num_hypotheses()) {
    throw std::invalid_argument("prior does not match hypothesis space");
  }
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  const std::uint64_t num_datasets = checked_enumeration_size(mu_size, n);
  const std::size_t nw = loss.num_hypotheses();
  const double scale =
      beta / (static_cast<double>(n) * static_cast<double>(loss.denominator()));
  std::vector<double> rows(num_datasets * nw);
  parallel_blocks(num_datasets, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<double> exponent(nw);
    DatasetOdometer odo(begin, mu_size, n);
    for (std::uint64_t s = begin; s < end; ++s, odo.advance()) {
      double max_exponent = -std::numeric_limits<double>::infinity();
      for (std::size_t w = 0; w < nw; ++w) {
        exponent[w] =
            -scale * static_cast<double>(loss.empirical_numerator(w, odo.digits()));
        if (q.prob(w) > 0.0) max_exponent = std::max(max_exponent, exponent[w]);
      }
      double total = 0.0;
      double* row = rows.data() + s * nw;
      for (std::size_t w = 0; w < nw; ++w) {
        row[w] = q.prob(w) > 0.0 ? q.prob(w) * std::exp(exponent[w] - max_exponent)
                                 : 0.0;
        total += row[w];
      }
      for (std::size_t w = 0; w < nw; ++w) row[w] /= total;
    }
  });
  return StochasticKernel(num_datasets, nw, std::move(rows));
}

double gibbs_objective(const FiniteDistribution& mu, std::size_t n,
                       const StochasticKernel& kernel, const LossTable& loss,
                       double beta, const FiniteDistribution& q) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const std::uint64_t num_datasets = checked_enumeration_size(mu.size(), n);
  if (kernel.num_inputs() != num_datasets ||
      kernel.num_outputs() != loss.num_hypotheses()) {
    throw std::invalid_argument("kernel does not match problem");
  }
  const double loss_scale =
      1.0 / (static_cast<double>(n) * static_cast<double>(loss.denominator()));
  return deterministic_sum(num_datasets, [&](std::uint64_t s) {
    const double ps = product_probability(mu, s, n);
    if (ps == 0.0) return 0.0;
    const auto row = kernel.row(s);
    const DatasetIndex idx{s, n, mu.size()};
    double emp = 0.0;
    double kl = 0.0;
    for (std::size_t w = 0; w < row.size(); ++w) {
      if (row[w] == 0.0) continue;
      if (q.prob(w) == 0.0) {
        throw SupportError("kernel places mass outside the prior support");
      }
      emp += row[w] * static_cast<double>(loss.empirical_numerator(w, idx)) *
             loss_scale;
      kl += row[w] * std::log(row[w] / q.prob(w));
    }
    return ps * (emp + kl / beta);
  });
}

StochasticKernel noisy_erm_kernel(const LossTable& loss, std::size_t mu_size,
                                  std::size_t n,
                                  std::span<const double> noise_means) {
  if (loss.num_instances() != mu_size) {
    throw std::invalid_argument("loss table does not match instance space");
  }
  const std::size_t nw = loss.num_hypotheses();
  if (noise_means.size() != nw) {
    throw std::invalid_argument("need one noise mean per hypothesis");
  }
  if (nw > 64) {
    throw std::invalid_argument("exact noisy ERM supports at most 64 hypotheses");
  }
  for (double b : noise_means) {
    if (!(b > 0.0)) throw std::invalid_argument("noise means must be positive");
  }
  const std::uint64_t num_datasets = checked_enumeration_size(mu_size, n);
  const double loss_scale =
      1.0 / (static_cast<double>(n) * static_cast<double>(loss.denominator()));

  std::vector<double> rates(nw);
  for (std::size_t w = 0; w < nw; ++w) rates[w] = 1.0 / noise_means[w];

  std::vector<double> rows(num_datasets * nw);
  parallel_blocks(num_datasets, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<double> risks(nw);
    std::vector<std::size_t> order(nw);
    DatasetOdometer odo(begin, mu_size, n);
    for (std::uint64_t s = begin; s < end; ++s, odo.advance()) {
      for (std::size_t w = 0; w < nw; ++w) {
        risks[w] = static_cast<double>(loss.empirical_numerator(w, odo.digits())) *
                   loss_scale;
      }
      for (std::size_t w = 0; w < nw; ++w) order[w] = w;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return risks[a] < risks[b]; });

      double* row = rows.data() + s * nw;
      for (std::size_t j = 0; j < nw; ++j) {
        // P(W = j | s) = integral over t of the density of L_j + N_j times
        // P(L_i + N_i > t) for all i != j. The integrand is a single
        // exponential on each segment between sorted risk values.
        double lambda = rates[j];
        double shift = risks[j] * rates[j];
        std::size_t next = 0;
        while (next < nw && risks[order[next]] <= risks[j]) {
          if (order[next] != j) {
            lambda += rates[order[next]];
            shift += risks[order[next]] * rates[order[next]];
          }
          ++next;
        }
        double t0 = risks[j];
        double prob = 0.0;
        while (true) {
          const double head = rates[j] / lambda * std::exp(shift - lambda * t0);
          if (next == nw) {
            prob += head;
            break;
          }
          const double t1 = risks[order[next]];
          prob += head - rates[j] / lambda * std::exp(shift - lambda * t1);
          while (next < nw && risks[order[next]] == t1) {
            lambda += rates[order[next]];
            shift += t1 * rates[order[next]];
            ++next;
          }
          t0 = t1;
        }
        row[j] = prob;
      }
      // The segment integrals already sum to 1 up to rounding; tidy the row.
      double total = 0.0;
      for (std::size_t w = 0; w < nw; ++w) total += row[w];
      for (std::size_t w = 0; w < nw; ++w) row[w] /= total;
    }
  });
  return StochasticKernel(num_datasets, nw, std::move(rows));
}

StochasticKernel noisy_erm_kernel_mc(const LossTable& loss, std::size_t mu_size,
                                     std::size_t n,
                                     std::span<const double> noise_means,
                                     std::uint64_t samples, std::uint64_t seed) {
  if (loss.num_instances() != mu_size) {
    throw std::invalid_argument("loss table does not match instance space");
  }
  const std::size_t nw = loss.num_hypotheses();
  if (noise_means.size() != nw) {
    throw std::invalid_argument("need one noise mean per hypothesis");
  }
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  for (double b : noise_means) {
    if (!(b > 0.0)) throw std::invalid_argument("noise means must be positive");
  }
  const std::uint64_t num_datasets = checked_enumeration_size(mu_size, n);
  const double loss_scale =
      1.0 / (static_cast<double>(n) * static_cast<double>(loss.denominator()));

  std::vector<double> rows(num_datasets * nw, 0.0);
  std::vector<double> risks_all(num_datasets * nw);
  parallel_blocks(num_datasets, [&](std::uint64_t begin, std::uint64_t end) {
    DatasetOdometer odo(begin, mu_size, n);
    for (std::uint64_t s = begin; s < end; ++s, odo.advance()) {
      for (std::size_t w = 0; w < nw; ++w) {
        risks_all[s * nw + w] =
            static_cast<double>(loss.empirical_numerator(w, odo.digits())) *
            loss_scale;
      }
    }
  });

  // Trials are flattened as row * samples + draw so any partition over
  // workers yields the same counts.
  const std::uint64_t total_draws = num_datasets * samples;
  std::vector<std::int64_t> counts(num_datasets * nw, 0);
  parallel_blocks(total_draws, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      const std::uint64_t s = i / samples;
      CounterRng rng(seed, streams::kNoisyErm, i);
      const double* risks = risks_all.data() + s * nw;
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_w = 0;
      for (std::size_t w = 0; w < nw; ++w) {
        const double noisy = risks[w] + rng.next_exponential(noise_means[w]);
        if (noisy < best) {
          best = noisy;
          best_w = w;
        }
      }
#pragma omp atomic
      counts[s * nw + best_w] += 1;
    }
  });

  for (std::uint64_t s = 0; s < num_datasets; ++s) {
    for (std::size_t w = 0; w < nw; ++w) {
      rows[s * nw + w] = static_cast<double>(counts[s * nw + w]) /
                         static_cast<double>(samples);
    }
  }
  return StochasticKernel(num_datasets, nw, std::move(rows));
}

LossTable misclassification_loss(const HypothesisClassTable& classifiers) {
  const std::size_t nx = classifiers.num_points();
  const std::size_t nw = classifiers.num_hypotheses();
  std::vector<std::int64_t> numerators(nw * 2 * nx);
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t z = 0; z < 2 * nx; ++z) {
      const std::size_t x = z / 2;
      const bool y = (z % 2) == 1;
      numerators[w * 2 * nx + z] = classifiers.label(w, x) != y ? 1 : 0;
    }
  }
  return LossTable(nw, 2 * nx, std::move(numerators), 1, 0.0, 1.0);
}

TwoStageResult two_stage_kernel(const HypothesisClassTable& classifiers,
                                const FiniteDistribution& mu_xy, std::size_t n1,
                                std::size_t n2, TieRule tie_rule) {
  const std::size_t nx = classifiers.num_points();
  const std::size_t z_size = 2 * nx;
  if (mu_xy.size() != z_size) {
    throw std::invalid_argument("mu must be over X x {0,1} with |Z| = 2|X|");
  }
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("both splits must be non-empty");
  if (n1 > 63) throw CapacityError("patterns limited to n1 <= 63");
  checked_enumeration_size(z_size, n1 + n2);
  const std::uint64_t num_s1 = dataset_space_size(z_size, n1);
  const std::uint64_t num_s2 = dataset_space_size(z_size, n2);
  const std::size_t nw = classifiers.num_hypotheses();
  const LossTable loss = misclassification_loss(classifiers);

  std::vector<TwoStagePrefix> prefixes;
  prefixes.reserve(num_s1);
  for (std::uint64_t s1 = 0; s1 < num_s1; ++s1) {
    const DatasetIndex idx{s1, n1, z_size};
    const auto digits = idx.digits();

    std::vector<std::size_t> cover;
    std::unordered_set<std::uint64_t> seen;
    for (std::size_t w = 0; w < nw; ++w) {
      std::uint64_t pattern = 0;
      for (std::size_t i = 0; i < n1; ++i) {
        pattern |= static_cast<std::uint64_t>(classifiers.label(w, digits[i] / 2))
                   << i;
      }
      if (seen.insert(pattern).second) cover.push_back(w);
    }

    std::vector<double> rows(num_s2 * nw, 0.0);
    std::vector<std::int64_t> scores(cover.size());
    std::vector<double> cover_row(cover.size());
    DatasetOdometer odo(0, z_size, n2);
    for (std::uint64_t s2 = 0; s2 < num_s2; ++s2, odo.advance()) {
      for (std::size_t c = 0; c < cover.size(); ++c) {
        scores[c] = loss.empirical_numerator(cover[c], odo.digits());
      }
      fill_argmin_row(scores, tie_rule, cover_row);
      for (std::size_t c = 0; c < cover.size(); ++c) {
        rows[s2 * nw + cover[c]] = cover_row[c];
      }
    }
    const std::size_t pattern_count = cover.size();
    prefixes.push_back(TwoStagePrefix{
        s1, std::move(cover), pattern_count,
        StochasticKernel(num_s2, nw, std::move(rows), "second-split dataset code")});
  }

  const std::uint64_t num_full = num_s1 * num_s2;
  std::vector<double> full_rows(num_full * nw);
  for (std::uint64_t s = 0; s < num_full; ++s) {
    const std::uint64_t s1 = s % num_s1;
    const std::uint64_t s2 = s / num_s1;
    const auto row = prefixes[s1].conditional.row(s2);
    std::copy(row.begin(), row.end(), full_rows.begin() + s * nw);
  }
  return TwoStageResult{StochasticKernel(num_full, nw, std::move(full_rows)),
                        std::move(prefixes)};
}

namespace {

std::uint64_t pattern_count(const HypothesisClassTable& classifiers,
                            std::uint32_t mask) {
  std::unordered_set<std::uint64_t> patterns;
  for (std::size_t w = 0; w < classifiers.num_hypotheses(); ++w) {
    std::uint64_t key = 0;
    std::size_t bit = 0;
    for (std::size_t x = 0; x < classifiers.num_points(); ++x) {
      if (mask & (std::uint32_t{1} << x)) {
        key |= static_cast<std::uint64_t>(classifiers.label(w, x)) << bit;
        ++bit;
      }
    }
    patterns.insert(key);
  }
  return patterns.size();
}

}  // namespace

VcStats vc_stats(const HypothesisClassTable& classifiers, std::size_t n) {
  const std::size_t nx = classifiers.num_points();
  if (nx > 16) throw CapacityError("exact VC computation limited to |X| <= 16");
  if (n == 0) throw std::invalid_argument("n must be positive");

  VcStats stats;
  stats.shatter_n = 1;
  const std::uint32_t num_masks = std::uint32_t{1} << nx;
  for (std::uint32_t mask = 1; mask < num_masks; ++mask) {
    const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
    const std::uint64_t patterns = pattern_count(classifiers, mask);
    if (size <= n) stats.shatter_n = std::max(stats.shatter_n, patterns);
    if (size > stats.vc_dim && size < 64 &&
        patterns == (std::uint64_t{1} << size)) {
      stats.vc_dim = size;
    }
  }
  return stats;
}

StochasticKernel chain_kernel(const StochasticKernel& first,
                              const StochasticKernel& second) {
  if (first.num_outputs() != second.num_inputs()) {
    throw std::invalid_argument("chain dimension mismatch");
  }
  const std::size_t ni = first.num_inputs();
  const std::size_t nm = first.num_outputs();
  const std::size_t no = second.num_outputs();
  std::vector<double> rows(ni * no, 0.0);
  parallel_blocks(ni, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      double* out = rows.data() + i * no;
      for (std::size_t m = 0; m < nm; ++m) {
        const double p = first.at(i, m);
        if (p == 0.0) continue;
        const auto second_row = second.row(m);
        for (std::size_t o = 0; o < no; ++o) out[o] += p * second_row[o];
      }
    }
  });
  return StochasticKernel(ni, no, std::move(rows), first.input_description());
}

CompositionResult compose_adaptive(const CompositionPlan& plan,
                                   const FiniteDistribution& mu, std::size_t n) {
  if (plan.stages.empty()) throw std::invalid_argument("empty composition plan");
  if (plan.output_sizes.size() != plan.stages.size()) {
    throw std::invalid_argument("output size per stage required");
  }
  const std::uint64_t num_datasets = checked_enumeration_size(mu.size(), n);

  std::uint64_t total_outputs = 1;
  for (std::size_t j = 0; j < plan.stages.size(); ++j) {
    if (plan.stages[j].num_outputs() != plan.output_sizes[j]) {
      throw std::invalid_argument("stage " + std::to_string(j) +
                                  " output size mismatch");
    }
    if (plan.stages[j].num_inputs() != total_outputs * num_datasets) {
      throw std::invalid_argument("stage " + std::to_string(j) +
                                  " arity does not chain");
    }
    if (total_outputs > kMaxExactEnumeration / plan.output_sizes[j]) {
      throw CapacityError("composite output space too large");
    }
    total_outputs *= plan.output_sizes[j];
  }
  if (num_datasets > kMaxExactEnumeration / total_outputs) {
    throw CapacityError("composition joint too large for exact enumeration");
  }

  std::vector<double> mu_s(num_datasets);
  for (std::uint64_t s = 0; s < num_datasets; ++s) {
    mu_s[s] = product_probability(mu, s, n);
  }

  // prior[s * prior_size + p] = P(W^{j-1} = p | S = s)
  std::vector<double> prior(num_datasets, 1.0);
  std::uint64_t prior_size = 1;
  std::vector<double> stage_mi;
  for (std::size_t j = 0; j < plan.stages.size(); ++j) {
    const StochasticKernel& stage = plan.stages[j];
    const std::size_t nw = plan.output_sizes[j];

    std::vector<double> table(num_datasets * prior_size * nw);
    std::vector<double> next(num_datasets * prior_size * nw);
    parallel_blocks(num_datasets, [&](std::uint64_t begin, std::uint64_t end) {
      for (std::uint64_t s = begin; s < end; ++s) {
        for (std::uint64_t p = 0; p < prior_size; ++p) {
          const double weight = prior[s * prior_size + p];
          const auto row = stage.row(p * num_datasets + s);
          for (std::size_t w = 0; w < nw; ++w) {
            const double joint_w = weight * row[w];
            table[(s * prior_size + p) * nw + w] = mu_s[s] * joint_w;
            // new prior code = p + prior_size * w
            next[s * (prior_size * nw) + (p + prior_size * w)] = joint_w;
          }
        }
      }
    });

    const JointPMF stage_joint(
        {static_cast<std::size_t>(num_datasets),
         static_cast<std::size_t>(prior_size), nw},
        std::move(table),
        {"S", "W^" + std::to_string(j), "W_" + std::to_string(j + 1)});
    stage_mi.push_back(conditional_mi(stage_joint, 1));

    prior = std::move(next);
    prior_size *= nw;
  }

  return CompositionResult{
      StochasticKernel(num_datasets, prior_size, std::move(prior)),
      std::move(stage_mi)};
}

}  // namespace genbound
