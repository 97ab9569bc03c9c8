#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "stablefair/core.hpp"
#include "stablefair/solver.hpp"

namespace stablefair {

// Constants feeding the closed-form bounds. kappa_sq is kappa^2 (an upper
// bound on k(x,x) over the domain), B bounds the RKHS norm of the comparison
// classifier, G bounds the coefficient-space loss gradient of linear models.
struct BoundInputs {
  double sigma = 1.0;
  double kappa_sq = 1.0;
  double lambda = 0.0;
  int n = 1;
  double B = 0.0;
  double G = 0.0;
  double delta = 0.05;
};

// Uniform-stability bound sigma^2 * kappa^2 / (lambda * N) for RKHS-norm
// regularized programs. Requires lambda > 0: the unregularized program
// certifies nothing.
double stability_bound_rkhs(const BoundInputs& in);

// Linear-model variant G^2 / (lambda * N); with G = sigma*kappa the two
// bounds coincide.
double stability_bound_linear(const BoundInputs& in);

// High-probability generalization bound
//   8 * sqrt((2*sigma^2*kappa^2/(lambda*N) + 1/N) * ln(8/delta)),
// and the linear-model variant with G^2 in place of sigma^2*kappa^2.
double generalization_bound_highprob(const BoundInputs& in);
double generalization_bound_highprob_linear(const BoundInputs& in);

// Excess-risk bound sigma^2*kappa^2/(lambda*N) + lambda*B^2, its minimizing
// lambda* = sigma*kappa/(B*sqrt(N)), and the bound's value 2*sigma*kappa*B/sqrt(N)
// at that choice.
double excess_risk_bound(const BoundInputs& in);
double optimal_lambda(const BoundInputs& in);
double excess_risk_bound_at_optimal(const BoundInputs& in);

// Slack added to every empirical bound comparison: the solver stops at
// gradient norm <= tol, the objective is 2*lambda strongly convex in its
// coefficients, so each trained model sits within tol/(2*lambda) of the exact
// minimizer and a two-model loss comparison moves by at most
// 2 * sigma * kappa * tol / (2*lambda).
double solver_allowance(double sigma, double kappa, double lambda, double tol);

// Empirical estimate of G = sup ||d/dw L(<w,x>, y)||_2 over the data and
// randomly sampled weight vectors, next to the analytic ceiling sigma*kappa
// with kappa = max ||x||. The estimate approaches G from below; for the
// squared loss sampled weights are rescaled into the certified score range.
struct GEstimate {
  double empirical = 0.0;
  double ceiling = 0.0;
};
GEstimate estimate_G(const LossSpec& loss, const Dataset& data,
                     int classifier_samples, std::uint64_t seed);

using ReplacementSampler = std::function<Sample(std::mt19937_64&)>;

// Measured uniform stability: trains on the full dataset, then for each probe
// replaces one uniformly chosen sample via `sampler`, retrains, and records
// the worst loss difference over `eval_set` plus the RKHS distance between
// the two models. beta_hat and norm_gap are the maxima across probes.
struct StabilityProbeResult {
  double beta_hat = 0.0;
  double norm_gap = 0.0;
  std::vector<double> probe_beta;
  std::vector<double> probe_norm;
};
StabilityProbeResult empirical_uniform_stability(const Dataset& data,
                                                 const TrainConfig& config,
                                                 int probes,
                                                 const ReplacementSampler& sampler,
                                                 const Dataset& eval_set,
                                                 std::uint64_t seed);

// Counts eval points where |g(x)| exceeds the margin threshold yet the two
// classifiers disagree in sign, and reports the empirical mass of the
// low-margin region |g(x)| <= threshold. When the threshold dominates the
// realized score gap between g and g_swapped, the count must be zero.
struct AgreementResult {
  int violations = 0;
  double low_margin_mass = 0.0;
};
AgreementResult prediction_agreement_check(const Classifier& g,
                                           const Classifier& g_swapped,
                                           const Dataset& eval_set,
                                           double margin_threshold);

// Prediction-stability score across classifiers trained on resampled data:
//   (1/(n*(n-1))) * sum over ordered pairs (i,j), i != j, of the number of
//   eval points whose predicted labels differ between classifier i and j.
double stab_metric(const std::vector<Classifier>& classifiers, const Dataset& eval_set);

// risk(holdout) - risk(train); positive when the model overfits.
double generalization_gap(const Classifier& f, const Dataset& train,
                          const Dataset& holdout, const LossSpec& loss);

// Convex functional given by value/gradient callbacks over coefficient space.
struct ConvexFunctional {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
};

// Bregman divergence F(f) - F(g) - <f - g, grad F(g)>. Nonnegative for
// convex F; equals ||f - g||^2 when F is the squared Euclidean norm.
double bregman(const ConvexFunctional& F, const Eigen::VectorXd& f,
               const Eigen::VectorXd& g);

// Repeated-split experiment: one shared test set, `reps` training sets
// resampled from the remaining pool (or drawn via fresh_train_source when
// set), one trained classifier per repetition.
struct ProtocolParams {
  double test_frac = 0.2;
  double train_frac = 0.75;
  int reps = 50;
  int probes = 0;  // uniform-stability probes; 0 skips beta_hat entirely
  std::uint64_t seed = 0;
  // Overrides the kappa^2 measured on the data when the generating process
  // guarantees a domain-wide bound (e.g. unit-ball features).
  std::optional<double> domain_kappa_sq{};
  // Independent-resample mode: repetition r trains on fresh_train_source(seed_r).
  std::function<Dataset(std::uint64_t)> fresh_train_source{};
  // Replacement draw for probes; defaults to a uniform pick from the test set.
  ReplacementSampler replacement_sampler{};
};

struct StabilityReport {
  double lambda = 0.0;
  int reps = 0;
  double acc_mean = 0.0;
  double acc_std = 0.0;
  double gamma_mean = 0.0;
  double gamma_std = 0.0;
  double gen_gap = 0.0;                    // mean test-minus-train risk
  std::optional<double> stab{};            // needs >= 2 repetitions
  std::optional<double> beta_hat{};        // needs probes >= 1 and lambda > 0
  std::optional<double> norm_gap{};
  std::optional<double> beta_bound{};      // needs lambda > 0
  std::optional<double> allowance{};
};

StabilityReport run_stability_suite(const Dataset& data, const TrainConfig& config,
                                    const ProtocolParams& protocol);

// Fraction of eval points whose predicted label matches the true label.
double accuracy(const Classifier& f, const Dataset& eval_set);

}  // namespace stablefair
