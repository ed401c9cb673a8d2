#include "genbound/spaces.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "genbound/errors.hpp"

namespace genbound {

namespace {

constexpr double kNormalizationTolerance = 1e-12;

std::vector<std::string> index_labels(std::size_t size) {
  std::vector<std::string> labels;
  labels.reserve(size);
  for (std::size_t i = 0; i < size; ++i) labels.push_back(std::to_string(i));
  return labels;
}

// Sequences the size read before the move.
FiniteDistribution with_index_labels(std::vector<double> probs) {
  auto labels = index_labels(probs.size());
  return FiniteDistribution(std::move(labels), std::move(probs));
}

}  // namespace

FiniteDistribution::FiniteDistribution(std::vector<std::string> labels,
                                       std::vector<double> probs)
    : labels_(std::move(labels)), probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument("distribution must have at least one atom");
  }
  if (labels_.size() != probs_.size()) {
    throw std::invalid_argument("label count does not match probability count");
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("negative probability");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw std::invalid_argument("probabilities sum to " + std::to_string(total) +
                                ", not 1");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) {
      throw std::invalid_argument("duplicate label: " + label);
    }
  }
}

FiniteDistribution::FiniteDistribution(std::vector<double> probs)
    : FiniteDistribution(with_index_labels(std::move(probs))) {}

FiniteDistribution FiniteDistribution::uniform(std::size_t size) {
  if (size == 0) throw std::invalid_argument("empty space");
  return FiniteDistribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

FiniteDistribution FiniteDistribution::point_mass(std::size_t size,
                                                  std::size_t index) {
  if (index >= size) throw std::invalid_argument("point mass index out of range");
  std::vector<double> probs(size, 0.0);
  probs[index] = 1.0;
  return FiniteDistribution(std::move(probs));
}

std::size_t DatasetIndex::digit(std::size_t i) const {
  std::uint64_t value = code;
  for (std::size_t k = 0; k < i; ++k) value /= z_size;
  return static_cast<std::size_t>(value % z_size);
}

std::vector<std::size_t> DatasetIndex::digits() const {
  std::vector<std::size_t> out(n);
  std::uint64_t value = code;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<std::size_t>(value % z_size);
    value /= z_size;
  }
  return out;
}

std::uint64_t dataset_space_size(std::size_t z_size, std::size_t n) {
  if (z_size == 0) throw std::invalid_argument("instance space is empty");
  if (n == 0) throw std::invalid_argument("dataset size must be positive");
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (size > UINT64_MAX / z_size) {
      throw CapacityError("|Z|^n overflows 64-bit unsigned");
    }
    size *= z_size;
  }
  return size;
}

std::uint64_t checked_enumeration_size(std::size_t z_size, std::size_t n) {
  const std::uint64_t size = dataset_space_size(z_size, n);
  if (size > kMaxExactEnumeration) {
    throw CapacityError(
        "dataset space too large for exact enumeration (|Z|^n > 2^31); "
        "use the Monte Carlo path");
  }
  return size;
}

DatasetIndex encode_dataset(std::span<const std::size_t> tuple,
                            std::size_t z_size) {
  if (tuple.empty()) throw std::invalid_argument("empty dataset tuple");
  dataset_space_size(z_size, tuple.size());  // capacity check
  std::uint64_t code = 0;
  std::uint64_t place = 1;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] >= z_size) {
      throw std::domain_error("dataset entry " + std::to_string(tuple[i]) +
                              " out of range for |Z| = " + std::to_string(z_size));
    }
    code += place * tuple[i];
    place *= z_size;
  }
  return DatasetIndex{code, tuple.size(), z_size};
}

std::vector<std::size_t> decode_dataset(const DatasetIndex& s) {
  return s.digits();
}

double product_probability(const FiniteDistribution& mu, const DatasetIndex& s) {
  if (s.z_size != mu.size()) {
    throw std::invalid_argument("dataset alphabet does not match distribution");
  }
  return product_probability(mu, s.code, s.n);
}

double product_probability(const FiniteDistribution& mu, std::uint64_t code,
                           std::size_t n) {
  const std::size_t z = mu.size();
  double p = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    p *= mu.prob(static_cast<std::size_t>(code % z));
    code /= z;
  }
  return p;
}

DatasetOdometer::DatasetOdometer(std::uint64_t start_code, std::size_t z_size,
                                 std::size_t n)
    : digits_(n), code_(start_code), z_size_(z_size) {
  std::uint64_t value = start_code;
  for (std::size_t i = 0; i < n; ++i) {
    digits_[i] = static_cast<std::size_t>(value % z_size);
    value /= z_size;
  }
}

void DatasetOdometer::advance() {
  ++code_;
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (++digits_[i] < z_size_) return;
    digits_[i] = 0;
  }
}

}  // namespace genbound
