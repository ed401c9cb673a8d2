#include "genbound/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace genbound {

namespace {
constexpr double kRowTolerance = 1e-10;
}

StochasticKernel::StochasticKernel(std::size_t num_inputs,
                                   std::size_t num_outputs,
                                   std::vector<double> rows,
                                   std::string input_description)
    : num_inputs_(num_inputs),
      num_outputs_(num_outputs),
      rows_(std::move(rows)),
      input_description_(std::move(input_description)) {
  if (num_inputs_ == 0 || num_outputs_ == 0) {
    throw std::invalid_argument("kernel must have inputs and outputs");
  }
  if (rows_.size() != num_inputs_ * num_outputs_) {
    throw std::invalid_argument("kernel shape mismatch");
  }
  for (std::size_t i = 0; i < num_inputs_; ++i) {
    double total = 0.0;
    for (std::size_t o = 0; o < num_outputs_; ++o) {
      const double p = rows_[i * num_outputs_ + o];
      if (!(p >= 0.0)) {
        throw std::invalid_argument("negative kernel entry in row " +
                                    std::to_string(i));
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kRowTolerance) {
      throw std::invalid_argument("kernel row " + std::to_string(i) +
                                  " sums to " + std::to_string(total));
    }
  }
}

StochasticKernel StochasticKernel::identity(std::size_t size) {
  std::vector<double> rows(size * size, 0.0);
  for (std::size_t i = 0; i < size; ++i) rows[i * size + i] = 1.0;
  return StochasticKernel(size, size, std::move(rows));
}

StochasticKernel StochasticKernel::constant(std::size_t num_inputs,
                                            std::span<const double> row) {
  std::vector<double> rows;
  rows.reserve(num_inputs * row.size());
  for (std::size_t i = 0; i < num_inputs; ++i) {
    rows.insert(rows.end(), row.begin(), row.end());
  }
  return StochasticKernel(num_inputs, row.size(), std::move(rows));
}

}  // namespace genbound
