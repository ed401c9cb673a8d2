#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace genbound {

// Stream ids for the counter-based generator. Draws depend only on
// (seed, stream, index), never on thread assignment, so parallel and serial
// runs produce identical samples.
namespace streams {
inline constexpr std::uint64_t kPairs = 1;        // (S, W) sampling; index = trial*m + copy
inline constexpr std::uint64_t kNoisyErm = 2;     // Monte Carlo kernel rows; index = row*samples + draw
inline constexpr std::uint64_t kProblems = 3;     // random problem generation
inline constexpr std::uint64_t kPerturbations = 4;
}  // namespace streams

/// Counter-based random stream (splitmix64). The initial state is a hash of
/// (seed, stream, index); subsequent draws walk the splitmix sequence.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
      : state_(mix(mix(mix(seed) ^ stream) ^ index)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return finalize(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_exponential(double mean) {
    return -mean * std::log1p(-next_unit());
  }

  // Inverse-CDF draw; assumes probs sums to 1.
  std::size_t next_categorical(std::span<const double> probs) {
    const double u = next_unit();
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cumulative += probs[i];
      if (u < cumulative) return i;
    }
    return probs.size() - 1;
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    return finalize(x);
  }

  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace genbound
