#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <omp.h>

namespace genbound {

// Number of OpenMP workers. GENBOUND_WORKERS overrides the hardware default.
int worker_count();

// Fixed block length for deterministic reductions. Items are cut into blocks
// of this size; each block partial is accumulated serially in index order and
// the partials are then combined pairwise in block order, so results are
// bit-identical for any worker count.
inline constexpr std::uint64_t kReductionBlock = 4096;

// Pairwise summation in a fixed association order.
double pairwise_sum(std::span<const double> values);

namespace detail {

inline std::uint64_t block_count(std::uint64_t items) {
  return (items + kReductionBlock - 1) / kReductionBlock;
}

}  // namespace detail

// Runs fn(begin, end) over disjoint index ranges. fn must only write to
// locations owned by its range.
template <typename BlockFn>
void parallel_blocks(std::uint64_t count, BlockFn&& fn) {
  if (count == 0) return;
  const std::int64_t blocks = static_cast<std::int64_t>(detail::block_count(count));
  const int workers = worker_count();
#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kReductionBlock;
    const std::uint64_t end = std::min(begin + kReductionBlock, count);
    fn(begin, end);
  }
}

// Deterministic parallel reduction of a width-sized accumulator.
// fn(begin, end, acc) adds the contribution of items [begin, end) into acc.
template <typename BlockFn>
std::vector<double> deterministic_vector_sum(std::uint64_t count,
                                             std::size_t width, BlockFn&& fn) {
  const std::uint64_t blocks = detail::block_count(count);
  std::vector<double> partials(blocks * width, 0.0);
  parallel_blocks(count, [&](std::uint64_t begin, std::uint64_t end) {
    std::span<double> acc(partials.data() + (begin / kReductionBlock) * width,
                          width);
    fn(begin, end, acc);
  });
  std::vector<double> result(width, 0.0);
  std::vector<double> column(blocks);
  for (std::size_t w = 0; w < width; ++w) {
    for (std::uint64_t b = 0; b < blocks; ++b) column[b] = partials[b * width + w];
    result[w] = pairwise_sum(column);
  }
  return result;
}

// Deterministic parallel sum of term(i) over i in [0, count).
template <typename TermFn>
double deterministic_sum(std::uint64_t count, TermFn&& term) {
  auto result = deterministic_vector_sum(
      count, 1, [&](std::uint64_t begin, std::uint64_t end, std::span<double> acc) {
        double local = 0.0;
        for (std::uint64_t i = begin; i < end; ++i) local += term(i);
        acc[0] += local;
      });
  return result[0];
}

}  // namespace genbound
