#pragma once

#include <vector>

#include "stablefair/core.hpp"

namespace stablefair {

enum class FairnessKind { None, CovarianceParity };

// Fairness constraint selector. `threshold` is the covariance budget c >= 0;
// `mu` is the penalty weight used when the constraint is applied as a
// soft penalty instead of a hard constraint.
struct FairnessSpec {
  FairnessKind kind = FairnessKind::None;
  double threshold = 0.1;
  double mu = 0.0;
};

// Statistical rate gamma = min(p0/p1, p1/p0) where p_g is the fraction of
// group g receiving the +1 prediction. Requires exactly the two groups
// {0, 1}, both nonempty. Degenerate cases: both rates zero -> 1; exactly one
// rate zero -> 0. Always lies in [0, 1].
double statistical_rate(const std::vector<int>& predictions,
                        const std::vector<int>& groups);

// Covariance constraint value on raw scores:
//   Omega(scores) = | (1/N) sum_i (z_i - zbar) * scores_i | - c.
// Convex and, at c = 0, positively homogeneous in the scores.
double covariance_constraint_scores(const std::vector<double>& scores,
                                    const std::vector<int>& groups, double c);

// Omega(f) over a dataset with exactly two declared groups.
double covariance_constraint(const Classifier& f, const Dataset& data, double c);

// mu * max(0, Omega(f)). Requires an actual constraint kind (not None).
double fairness_penalty(const Classifier& f, const Dataset& data,
                        const FairnessSpec& spec);

}  // namespace stablefair
