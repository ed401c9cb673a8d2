#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace genbound {

/// Row-stochastic matrix: one probability vector over outputs per input index.
///
/// Rows are validated at construction (entries >= 0, each row sums to 1
/// within 1e-10) and immutable afterwards. `input_description` records what
/// indexes the rows, e.g. "dataset code" or
/// "prior code * num_datasets + dataset code".
class StochasticKernel {
 public:
  StochasticKernel(std::size_t num_inputs, std::size_t num_outputs,
                   std::vector<double> rows,
                   std::string input_description = "dataset code");

  static StochasticKernel identity(std::size_t size);
  // Every row equal to `row`: the output ignores the input.
  static StochasticKernel constant(std::size_t num_inputs,
                                   std::span<const double> row);

  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t num_outputs() const { return num_outputs_; }
  std::span<const double> row(std::size_t input) const {
    return {rows_.data() + input * num_outputs_, num_outputs_};
  }
  double at(std::size_t input, std::size_t output) const {
    return rows_[input * num_outputs_ + output];
  }
  const std::string& input_description() const { return input_description_; }

 private:
  std::size_t num_inputs_;
  std::size_t num_outputs_;
  std::vector<double> rows_;
  std::string input_description_;
};

}  // namespace genbound
