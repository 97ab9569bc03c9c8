#pragma once

#include <cstdint>
#include <random>

#include "stablefair/core.hpp"

namespace stablefair {

// Two-group Gaussian-cluster generator with a controllable disparity in
// positive-label rates. Group z is drawn Bernoulli(minority_frac), the label
// y is +1 with probability pos_rate_z, and features concentrate around
//   mean(z, y) = y * separation * e0 + z * group_shift * e1
// with independent per-coordinate noise. Draws are rejected back into the
// closed unit ball, so kappa^2 = 1 bounds k(x,x) for the linear kernel over
// everything this generator can produce (dataset, replacements, eval points).
struct SyntheticSpec {
  int n = 200;
  int dim = 4;
  double minority_frac = 0.5;  // Pr[z = 1]
  double pos_rate0 = 0.5;      // Pr[y = +1 | z = 0]
  double pos_rate1 = 0.5;      // Pr[y = +1 | z = 1]
  double separation = 0.45;    // class-mean offset along axis 0
  double group_shift = 0.15;   // group-1 mean offset along axis 1 (needs dim >= 2)
  double noise = 0.16;         // per-coordinate standard deviation
};

void validate(const SyntheticSpec& spec);

// One draw from the generator's law, advancing `rng`.
Sample draw_sample(const SyntheticSpec& spec, std::mt19937_64& rng);

// Dataset of spec.n independent draws. Deterministic given `seed`.
Dataset generate(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace stablefair
