#include "stablefair/fairness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stablefair {

double statistical_rate(const std::vector<int>& predictions,
                        const std::vector<int>& groups) {
  if (predictions.size() != groups.size()) {
    throw std::invalid_argument("statistical_rate: predictions/groups length mismatch");
  }
  if (predictions.empty()) {
    throw std::invalid_argument("statistical_rate: empty input");
  }
  std::size_t count[2] = {0, 0};
  std::size_t positive[2] = {0, 0};
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const int g = groups[i];
    if (g != 0 && g != 1) {
      throw std::invalid_argument("statistical_rate: group values must be 0 or 1, got " +
                                  std::to_string(g));
    }
    if (predictions[i] != 1 && predictions[i] != -1) {
      throw std::invalid_argument("statistical_rate: predictions must be -1 or +1");
    }
    ++count[g];
    if (predictions[i] == 1) ++positive[g];
  }
  if (count[0] == 0 || count[1] == 0) {
    throw std::invalid_argument("statistical_rate: a group is absent from the data");
  }
  const double p0 = static_cast<double>(positive[0]) / static_cast<double>(count[0]);
  const double p1 = static_cast<double>(positive[1]) / static_cast<double>(count[1]);
  if (p0 == 0.0 && p1 == 0.0) return 1.0;  // nobody gets +1: parity by convention
  if (p0 == 0.0 || p1 == 0.0) return 0.0;  // one-sided: worst possible rate
  return std::min(p0 / p1, p1 / p0);
}

double covariance_constraint_scores(const std::vector<double>& scores,
                                    const std::vector<int>& groups, double c) {
  if (scores.size() != groups.size()) {
    throw std::invalid_argument("covariance_constraint: scores/groups length mismatch");
  }
  if (scores.empty()) {
    throw std::invalid_argument("covariance_constraint: empty input");
  }
  if (c < 0.0) {
    throw std::invalid_argument("covariance_constraint: threshold c must be >= 0");
  }
  const double n = static_cast<double>(groups.size());
  double zbar = 0.0;
  for (int g : groups) zbar += static_cast<double>(g);
  zbar /= n;
  double cov = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    cov += (static_cast<double>(groups[i]) - zbar) * scores[i];
  }
  cov /= n;
  return std::abs(cov) - c;
}

double covariance_constraint(const Classifier& f, const Dataset& data, double c) {
  if (data.num_groups() != 2) {
    throw std::invalid_argument(
        "covariance_constraint: dataset must declare exactly 2 groups, has " +
        std::to_string(data.num_groups()));
  }
  std::vector<double> scores;
  scores.reserve(data.size());
  for (const auto& s : data.samples()) scores.push_back(score(f, s.x));
  return covariance_constraint_scores(scores, data.groups(), c);
}

double fairness_penalty(const Classifier& f, const Dataset& data,
                        const FairnessSpec& spec) {
  if (spec.kind == FairnessKind::None) {
    throw std::invalid_argument("fairness_penalty: no constraint kind selected");
  }
  if (spec.mu < 0.0) {
    throw std::invalid_argument("fairness_penalty: mu must be >= 0");
  }
  const double omega = covariance_constraint(f, data, spec.threshold);
  return spec.mu * std::max(0.0, omega);
}

}  // namespace stablefair
