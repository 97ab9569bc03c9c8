#include "stablefair/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stablefair {

namespace {

void check_label(int y) {
  if (y != 1 && y != -1) {
    throw std::invalid_argument("loss: label must be -1 or +1, got " +
                                std::to_string(y));
  }
}

double require_score_bound(const LossSpec& spec) {
  if (!spec.score_bound || !(*spec.score_bound > 0.0)) {
    throw std::invalid_argument("squared loss: a positive score_bound is required");
  }
  return *spec.score_bound;
}

// ln(1 + e^t) without overflow for large |t|.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// 1 / (1 + e^-t) evaluated stably.
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

double loss(const LossSpec& spec, double score, int y) {
  check_label(y);
  if (!std::isfinite(score)) throw std::invalid_argument("loss: non-finite score");
  switch (spec.kind) {
    case LossKind::Hinge:
      return std::max(0.0, 1.0 - y * score);
    case LossKind::Squared:
      require_score_bound(spec);
      return (score - y) * (score - y);
    case LossKind::Logistic:
      return softplus(-y * score);
    case LossKind::ZeroOne:
      if (score != 1.0 && score != -1.0) {
        throw std::invalid_argument("zero-one loss: score must be -1 or +1");
      }
      return score == static_cast<double>(y) ? 0.0 : 1.0;
  }
  throw std::logic_error("loss: unknown loss kind");
}

double loss_grad(const LossSpec& spec, double score, int y) {
  check_label(y);
  if (!std::isfinite(score)) throw std::invalid_argument("loss_grad: non-finite score");
  switch (spec.kind) {
    case LossKind::Hinge: {
      const double margin = y * score;
      if (margin < 1.0) return -static_cast<double>(y);
      return 0.0;  // flat region, and 0 by convention exactly at the kink
    }
    case LossKind::Squared:
      require_score_bound(spec);
      return 2.0 * (score - y);
    case LossKind::Logistic:
      return -static_cast<double>(y) * sigmoid(-y * score);
    case LossKind::ZeroOne:
      throw std::domain_error("zero-one loss has no usable gradient");
  }
  throw std::logic_error("loss_grad: unknown loss kind");
}

double admissibility_constant(const LossSpec& spec) {
  switch (spec.kind) {
    case LossKind::Hinge:
      return 1.0;
    case LossKind::Logistic:
      return 1.0;
    case LossKind::ZeroOne:
      return 0.5;
    case LossKind::Squared:
      return 2.0 * require_score_bound(spec) + 2.0;
  }
  throw std::logic_error("admissibility_constant: unknown loss kind");
}

}  // namespace stablefair
