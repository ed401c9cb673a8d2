#include "genbound/info.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "genbound/errors.hpp"
#include "genbound/parallel.hpp"

namespace genbound {

namespace {

constexpr double kJointTolerance = 1e-10;

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace

JointPMF::JointPMF(std::vector<std::size_t> dims, std::vector<double> table,
                   std::vector<std::string> axis_labels)
    : dims_(std::move(dims)), table_(std::move(table)), labels_(std::move(axis_labels)) {
  if (dims_.size() != 2 && dims_.size() != 3) {
    throw std::invalid_argument("joint must have 2 or 3 axes");
  }
  if (labels_.size() != dims_.size()) {
    throw std::invalid_argument("axis label count mismatch");
  }
  std::size_t cells = 1;
  for (std::size_t d : dims_) {
    if (d == 0) throw std::invalid_argument("empty axis");
    cells *= d;
  }
  if (table_.size() != cells) throw std::invalid_argument("table size mismatch");
  double total = 0.0;
  for (double p : table_) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative joint entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kJointTolerance) {
    throw std::invalid_argument("joint total is " + std::to_string(total) +
                                ", not 1");
  }
}

FiniteDistribution JointPMF::marginal(std::size_t axis) const {
  if (axis >= rank()) throw std::out_of_range("axis");
  std::vector<double> sums(dims_[axis], 0.0);
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < rank(); ++a) stride *= dims_[a];
  const std::size_t period = stride * dims_[axis];
  for (std::size_t i = 0; i < table_.size(); ++i) {
    sums[(i % period) / stride] += table_[i];
  }
  // Renormalize away the joint's own tolerance so the result meets the
  // tighter distribution invariant.
  double total = 0.0;
  for (double s : sums) total += s;
  std::vector<std::string> labels(dims_[axis]);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = labels_[axis] + "=" + std::to_string(i);
  }
  for (double& s : sums) s /= total;
  return FiniteDistribution(std::move(labels), std::move(sums));
}

JointPMF JointPMF::marginal_pair(std::size_t axis_a, std::size_t axis_b) const {
  if (rank() != 3) throw std::invalid_argument("marginal_pair needs 3 axes");
  if (axis_a >= 3 || axis_b >= 3 || axis_a == axis_b) {
    throw std::invalid_argument("bad axis pair");
  }
  std::vector<double> out(dims_[axis_a] * dims_[axis_b], 0.0);
  for (std::size_t i = 0; i < dims_[0]; ++i) {
    for (std::size_t j = 0; j < dims_[1]; ++j) {
      for (std::size_t k = 0; k < dims_[2]; ++k) {
        const std::size_t idx[3] = {i, j, k};
        out[idx[axis_a] * dims_[axis_b] + idx[axis_b]] += at(i, j, k);
      }
    }
  }
  return JointPMF({dims_[axis_a], dims_[axis_b]}, std::move(out),
                  {labels_[axis_a], labels_[axis_b]});
}

JointPMF JointPMF::flatten(std::size_t lone_axis) const {
  if (rank() != 3) throw std::invalid_argument("flatten needs 3 axes");
  if (lone_axis >= 3) throw std::out_of_range("axis");
  std::size_t other[2];
  std::size_t pos = 0;
  for (std::size_t a = 0; a < 3; ++a) {
    if (a != lone_axis) other[pos++] = a;
  }
  std::vector<double> out(table_.size(), 0.0);
  const std::size_t combined = dims_[other[0]] * dims_[other[1]];
  for (std::size_t i = 0; i < dims_[0]; ++i) {
    for (std::size_t j = 0; j < dims_[1]; ++j) {
      for (std::size_t k = 0; k < dims_[2]; ++k) {
        const std::size_t idx[3] = {i, j, k};
        const std::size_t col = idx[other[0]] * dims_[other[1]] + idx[other[1]];
        out[idx[lone_axis] * combined + col] = at(i, j, k);
      }
    }
  }
  return JointPMF({dims_[lone_axis], combined}, std::move(out),
                  {labels_[lone_axis],
                   labels_[other[0]] + "," + labels_[other[1]]});
}

double entropy(const FiniteDistribution& p) {
  double h = 0.0;
  for (double pi : p.probs()) h -= xlogx(pi);
  return h;
}

double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q) {
  if (p.labels() != q.labels()) {
    throw std::invalid_argument("relative entropy needs identical label sets");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.prob(i);
    if (pi == 0.0) continue;
    const double qi = q.prob(i);
    if (qi == 0.0) {
      throw SupportError("absolute continuity violated at label " + p.label(i));
    }
    d += pi * std::log(pi / qi);
  }
  return d;
}

double mutual_information(const JointPMF& joint) {
  if (joint.rank() != 2) throw std::invalid_argument("need a 2-axis joint");
  const std::size_t nx = joint.dim(0), ny = joint.dim(1);
  std::vector<double> px(nx, 0.0), py(ny, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double p = joint.at(i, j);
      px[i] += p;
      py[j] += p;
    }
  }
  double mi = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    if (px[i] == 0.0) continue;
    for (std::size_t j = 0; j < ny; ++j) {
      const double p = joint.at(i, j);
      if (p > 0.0) mi += p * std::log(p / (px[i] * py[j]));
    }
  }
  return mi;
}

double conditional_mi(const JointPMF& joint, std::size_t cond_axis) {
  if (joint.rank() != 3) throw std::invalid_argument("need a 3-axis joint");
  if (cond_axis >= 3) throw std::out_of_range("axis");
  std::size_t ax = 3, bx = 3;
  for (std::size_t a = 0; a < 3; ++a) {
    if (a == cond_axis) continue;
    (ax == 3 ? ax : bx) = a;
  }
  const std::size_t na = joint.dim(ax), nb = joint.dim(bx), nz = joint.dim(cond_axis);
  auto entry = [&](std::size_t a, std::size_t b, std::size_t z) {
    std::size_t idx[3];
    idx[ax] = a;
    idx[bx] = b;
    idx[cond_axis] = z;
    return joint.at(idx[0], idx[1], idx[2]);
  };
  double mi = 0.0;
  std::vector<double> pa(na), pb(nb);
  for (std::size_t z = 0; z < nz; ++z) {
    std::fill(pa.begin(), pa.end(), 0.0);
    std::fill(pb.begin(), pb.end(), 0.0);
    double pz = 0.0;
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t b = 0; b < nb; ++b) {
        const double p = entry(a, b, z);
        pa[a] += p;
        pb[b] += p;
        pz += p;
      }
    }
    if (pz == 0.0) continue;
    for (std::size_t a = 0; a < na; ++a) {
      if (pa[a] == 0.0) continue;
      for (std::size_t b = 0; b < nb; ++b) {
        const double p = entry(a, b, z);
        if (p > 0.0) mi += p * std::log(p * pz / (pa[a] * pb[b]));
      }
    }
  }
  return mi;
}

JointPMF build_io_joint(const FiniteDistribution& mu, std::size_t n,
                        const StochasticKernel& kernel) {
  const std::uint64_t num_datasets = checked_enumeration_size(mu.size(), n);
  if (kernel.num_inputs() != num_datasets) {
    throw std::invalid_argument("kernel row count does not match |Z|^n");
  }
  const std::size_t nw = kernel.num_outputs();
  std::vector<double> table(num_datasets * nw);
  parallel_blocks(num_datasets, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t s = begin; s < end; ++s) {
      const double ps = product_probability(mu, s, n);
      const auto row = kernel.row(s);
      for (std::size_t w = 0; w < nw; ++w) table[s * nw + w] = ps * row[w];
    }
  });
  return JointPMF({static_cast<std::size_t>(num_datasets), nw}, std::move(table),
                  {"S", "W"});
}

JointPMF build_chain_joint(const FiniteDistribution& mu, std::size_t n,
                           const StochasticKernel& first,
                           const StochasticKernel& second) {
  const std::uint64_t num_datasets = checked_enumeration_size(mu.size(), n);
  if (first.num_inputs() != num_datasets) {
    throw std::invalid_argument("first kernel row count does not match |Z|^n");
  }
  if (second.num_inputs() != first.num_outputs()) {
    throw std::invalid_argument("chain dimension mismatch");
  }
  const std::size_t na = first.num_outputs();
  const std::size_t nb = second.num_outputs();
  std::vector<double> table(num_datasets * na * nb);
  parallel_blocks(num_datasets, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t s = begin; s < end; ++s) {
      const double ps = product_probability(mu, s, n);
      for (std::size_t a = 0; a < na; ++a) {
        const double pa = ps * first.at(s, a);
        for (std::size_t b = 0; b < nb; ++b) {
          table[(s * na + a) * nb + b] = pa * second.at(a, b);
        }
      }
    }
  });
  return JointPMF({static_cast<std::size_t>(num_datasets), na, nb},
                  std::move(table), {"S", "W~", "W"});
}

double io_mutual_information(const FiniteDistribution& mu, std::size_t n,
                             const StochasticKernel& kernel) {
  const std::uint64_t num_datasets = checked_enumeration_size(mu.size(), n);
  if (kernel.num_inputs() != num_datasets) {
    throw std::invalid_argument("kernel row count does not match |Z|^n");
  }
  const std::size_t nw = kernel.num_outputs();

  const auto pw = deterministic_vector_sum(
      num_datasets, nw,
      [&](std::uint64_t begin, std::uint64_t end, std::span<double> acc) {
        for (std::uint64_t s = begin; s < end; ++s) {
          const double ps = product_probability(mu, s, n);
          if (ps == 0.0) continue;
          const auto row = kernel.row(s);
          for (std::size_t w = 0; w < nw; ++w) acc[w] += ps * row[w];
        }
      });

  std::vector<double> log_pw(nw, 0.0);
  for (std::size_t w = 0; w < nw; ++w) {
    log_pw[w] = pw[w] > 0.0 ? std::log(pw[w]) : 0.0;
  }

  // I(S;W) = sum_s p(s) * KL(row_s || P_W)
  return deterministic_sum(num_datasets, [&](std::uint64_t s) {
    const double ps = product_probability(mu, s, n);
    if (ps == 0.0) return 0.0;
    const auto row = kernel.row(s);
    double kl = 0.0;
    for (std::size_t w = 0; w < nw; ++w) {
      if (row[w] > 0.0) kl += row[w] * (std::log(row[w]) - log_pw[w]);
    }
    return ps * kl;
  });
}

LambdaGrouping lambda_grouping(const LossTable& loss, std::size_t mu_size,
                               std::size_t n) {
  if (loss.num_instances() != mu_size) {
    throw std::invalid_argument("loss table does not match instance space");
  }
  const std::uint64_t num_datasets = checked_enumeration_size(mu_size, n);
  const std::size_t nw = loss.num_hypotheses();

  std::vector<std::int64_t> keys(num_datasets * nw);
  parallel_blocks(num_datasets, [&](std::uint64_t begin, std::uint64_t end) {
    DatasetOdometer odo(begin, mu_size, n);
    for (std::uint64_t s = begin; s < end; ++s, odo.advance()) {
      for (std::size_t w = 0; w < nw; ++w) {
        keys[s * nw + w] = loss.empirical_numerator(w, odo.digits());
      }
    }
  });

  // First-occurrence group ids in dataset-code order.
  LambdaGrouping grouping;
  grouping.group_of.resize(num_datasets);
  std::unordered_map<std::string, std::uint32_t> ids;
  ids.reserve(static_cast<std::size_t>(num_datasets));
  std::string key_bytes(nw * sizeof(std::int64_t), '\0');
  for (std::uint64_t s = 0; s < num_datasets; ++s) {
    std::memcpy(key_bytes.data(), keys.data() + s * nw, key_bytes.size());
    const auto [it, inserted] =
        ids.emplace(key_bytes, static_cast<std::uint32_t>(ids.size()));
    grouping.group_of[s] = it->second;
  }
  grouping.num_groups = ids.size();
  return grouping;
}

JointPMF build_lambda_joint(const FiniteDistribution& mu, std::size_t n,
                            const StochasticKernel& kernel,
                            const LossTable& loss) {
  const std::uint64_t num_datasets = checked_enumeration_size(mu.size(), n);
  if (kernel.num_inputs() != num_datasets) {
    throw std::invalid_argument("kernel row count does not match |Z|^n");
  }
  if (kernel.num_outputs() != loss.num_hypotheses()) {
    throw std::invalid_argument("kernel output count does not match loss table");
  }
  const auto grouping = lambda_grouping(loss, mu.size(), n);
  const std::size_t nw = kernel.num_outputs();
  std::vector<double> table(grouping.num_groups * nw, 0.0);
  for (std::uint64_t s = 0; s < num_datasets; ++s) {
    const double ps = product_probability(mu, s, n);
    if (ps == 0.0) continue;
    const auto row = kernel.row(s);
    double* cell = table.data() + grouping.group_of[s] * nw;
    for (std::size_t w = 0; w < nw; ++w) cell[w] += ps * row[w];
  }
  return JointPMF({grouping.num_groups, nw}, std::move(table), {"Lambda", "W"});
}

double lambda_mutual_information(const FiniteDistribution& mu, std::size_t n,
                                 const StochasticKernel& kernel,
                                 const LossTable& loss) {
  return mutual_information(build_lambda_joint(mu, n, kernel, loss));
}

namespace {

// log E[e^(lambda (U - EU))] by log-sum-exp over the atoms.
double centered_log_mgf(std::span<const double> values,
                        std::span<const double> probs, double mean,
                        double lambda) {
  double max_exponent = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (probs[i] > 0.0) {
      max_exponent = std::max(max_exponent, lambda * (values[i] - mean));
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (probs[i] > 0.0) {
      total += probs[i] * std::exp(lambda * (values[i] - mean) - max_exponent);
    }
  }
  return max_exponent + std::log(total);
}

}  // namespace

SubgaussianCertificate subgaussian_sigma(std::span<const double> values,
                                         const FiniteDistribution& probs,
                                         std::span<const double> lambda_grid) {
  if (values.size() != probs.size()) {
    throw std::invalid_argument("values do not match distribution");
  }
  if (lambda_grid.empty()) throw std::invalid_argument("empty lambda grid");

  std::vector<double> grid(lambda_grid.begin(), lambda_grid.end());
  std::sort(grid.begin(), grid.end());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double mirror = -grid[grid.size() - 1 - i];
    if (std::abs(grid[i] - mirror) > 1e-12 * std::max(1.0, std::abs(grid[i]))) {
      throw std::invalid_argument("lambda grid must be symmetric about 0");
    }
  }
  double lo_value = std::numeric_limits<double>::infinity();
  double hi_value = -std::numeric_limits<double>::infinity();
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw std::invalid_argument("non-finite value");
    mean += probs.prob(i) * values[i];
    if (probs.prob(i) > 0.0) {
      lo_value = std::min(lo_value, values[i]);
      hi_value = std::max(hi_value, values[i]);
    }
  }
  const double range = hi_value - lo_value;
  if (range > 0.0 && grid.back() * range < 20.0 - 1e-9) {
    throw std::invalid_argument("lambda grid must reach 20 / range(values)");
  }

  std::vector<double> mgf(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mgf[i] = centered_log_mgf(values, probs.probs(), mean, grid[i]);
  }

  auto violation_at = [&](double sigma) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, mgf[i] - grid[i] * grid[i] * sigma * sigma / 2.0);
    }
    return worst;
  };

  double needed_sq = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] != 0.0 && mgf[i] > 0.0) {
      needed_sq = std::max(needed_sq, 2.0 * mgf[i] / (grid[i] * grid[i]));
    }
  }
  double hi = std::sqrt(needed_sq);
  double lo = 0.0;
  if (violation_at(lo) > 0.0) {
    for (int iter = 0; iter < 100 && hi - lo > 1e-14 * std::max(1.0, hi); ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (violation_at(mid) <= 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  } else {
    hi = 0.0;
  }

  SubgaussianCertificate cert;
  cert.sigma = hi;
  cert.lambda_grid = std::move(grid);
  cert.max_violation = violation_at(hi);
  return cert;
}

std::vector<double> default_lambda_grid(double value_range,
                                        std::size_t points_per_side) {
  if (points_per_side == 0) throw std::invalid_argument("empty grid requested");
  const double reach = value_range > 0.0 ? 22.0 / value_range : 10.0;
  const double lo = reach / 1024.0;
  std::vector<double> grid;
  grid.reserve(2 * points_per_side + 1);
  grid.push_back(0.0);
  const double step = std::log(reach / lo) /
                      static_cast<double>(std::max<std::size_t>(points_per_side - 1, 1));
  for (std::size_t i = 0; i < points_per_side; ++i) {
    const double lambda = lo * std::exp(step * static_cast<double>(i));
    grid.push_back(lambda);
    grid.push_back(-lambda);
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

DecouplingCheck dv_decoupling_check(const JointPMF& joint,
                                    std::span<const double> f, double sigma) {
  if (joint.rank() != 2) throw std::invalid_argument("need a 2-axis joint");
  if (f.size() != joint.dim(0) * joint.dim(1)) {
    throw std::invalid_argument("f table shape mismatch");
  }
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  const std::size_t nx = joint.dim(0), ny = joint.dim(1);
  std::vector<double> px(nx, 0.0), py(ny, 0.0);
  double coupled = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double p = joint.at(i, j);
      px[i] += p;
      py[j] += p;
      coupled += p * f[i * ny + j];
    }
  }
  double decoupled = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      decoupled += px[i] * py[j] * f[i * ny + j];
    }
  }
  DecouplingCheck check;
  check.lhs = std::abs(coupled - decoupled);
  check.rhs = std::sqrt(2.0 * sigma * sigma * mutual_information(joint));
  return check;
}

double exp_channel_capacity_term(double mean_risk, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("noise mean must be positive");
  if (!(mean_risk >= 0.0)) throw std::invalid_argument("mean risk must be >= 0");
  return std::log1p(mean_risk / b);
}

}  // namespace genbound
