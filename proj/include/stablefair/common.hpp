#pragma once

#include <cstdint>
#include <stdexcept>

namespace stablefair {

// Raised when an experiment configuration is malformed or inconsistent.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when input data cannot be loaded or is unusable for the requested
// operation (bad CSV cells, degenerate splits, all-zero features, ...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a training run that must succeed fails to reach tolerance.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// SplitMix64 finalizer; decorrelates nearby integer inputs.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seed for derived stream `counter` of a master seed. Every repetition,
// probe, or data draw gets its own counter so all streams are independent
// and the whole pipeline is reproducible from one integer.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  return splitmix64(master + (counter + 1) * 0x9E3779B97F4A7C15ull);
}

}  // namespace stablefair
