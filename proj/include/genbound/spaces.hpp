#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace genbound {

/// Probability vector over a labeled finite space.
///
/// Construction validates that probabilities are nonnegative, sum to one
/// within 1e-12, and that labels are pairwise distinct. Instances are
/// immutable afterwards.
class FiniteDistribution {
 public:
  FiniteDistribution(std::vector<std::string> labels, std::vector<double> probs);
  explicit FiniteDistribution(std::vector<double> probs);

  static FiniteDistribution uniform(std::size_t size);
  static FiniteDistribution point_mass(std::size_t size, std::size_t index);

  std::size_t size() const { return probs_.size(); }
  double prob(std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> probs_;
};

/// Mixed-radix code of a dataset tuple (Z_1, ..., Z_n) in Z^n.
///
/// Digit convention: Z_1 is the least-significant digit, so
/// code = sum_i index(Z_i) * z_size^(i-1).
struct DatasetIndex {
  std::uint64_t code = 0;
  std::size_t n = 0;
  std::size_t z_size = 0;

  std::size_t digit(std::size_t i) const;
  std::vector<std::size_t> digits() const;
};

// Exact enumeration is refused above this many datasets.
inline constexpr std::uint64_t kMaxExactEnumeration = std::uint64_t{1} << 31;

// |Z|^n; throws CapacityError if the value overflows 64-bit unsigned.
std::uint64_t dataset_space_size(std::size_t z_size, std::size_t n);

// |Z|^n with the enumeration guard applied. Throws CapacityError with a
// hint to use the Monte Carlo path when |Z|^n > 2^31.
std::uint64_t checked_enumeration_size(std::size_t z_size, std::size_t n);

DatasetIndex encode_dataset(std::span<const std::size_t> tuple, std::size_t z_size);
std::vector<std::size_t> decode_dataset(const DatasetIndex& s);

// mu^(x)n evaluated at s: the product of mu over the digits of s.
double product_probability(const FiniteDistribution& mu, const DatasetIndex& s);
double product_probability(const FiniteDistribution& mu, std::uint64_t code,
                           std::size_t n);

/// Incrementally walks dataset codes in ascending order, maintaining the
/// digit vector. Used by enumeration loops so each step is O(1) amortized
/// instead of a full decode.
class DatasetOdometer {
 public:
  DatasetOdometer(std::uint64_t start_code, std::size_t z_size, std::size_t n);

  std::span<const std::size_t> digits() const { return digits_; }
  std::uint64_t code() const { return code_; }
  void advance();

 private:
  std::vector<std::size_t> digits_;
  std::uint64_t code_;
  std::size_t z_size_;
};

}  // namespace genbound
