#pragma once

#include <optional>

namespace stablefair {

enum class LossKind { Hinge, Squared, Logistic, ZeroOne };

// Loss identifier plus the score bound B required by the squared loss (its
// Lipschitz certificate only holds on |score| <= B).
struct LossSpec {
  LossKind kind = LossKind::Logistic;
  std::optional<double> score_bound{};  // B; required by Squared, must be > 0
};

// Pointwise loss L(score, y) with y in {-1, +1}:
//   Hinge     max(0, 1 - y*score)
//   Squared   (score - y)^2           (scores outside [-B, B] are accepted;
//                                      callers check realized score ranges)
//   Logistic  ln(1 + exp(-y*score))   (overflow-safe)
//   ZeroOne   1 iff sign mismatch     (requires score in {-1, +1} exactly)
double loss(const LossSpec& spec, double score, int y);

// Derivative of the loss in its score argument. The hinge subgradient at the
// kink y*score == 1 is fixed to 0. ZeroOne has no usable gradient and throws.
double loss_grad(const LossSpec& spec, double score, int y);

// Lipschitz constant of the loss in its score argument: Hinge 1, Logistic 1,
// ZeroOne 1/2 (scores restricted to {-1,+1}), Squared 2B+2 on |score| <= B.
double admissibility_constant(const LossSpec& spec);

}  // namespace stablefair
