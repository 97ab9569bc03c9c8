#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "stablefair/core.hpp"
#include "stablefair/fairness.hpp"
#include "stablefair/losses.hpp"

namespace stablefair {

// How the fairness term enters the program:
//   Constrained  minimize risk + lambda*||f||^2 subject to Omega(f) <= 0,
//                solved by exterior quadratic-penalty continuation;
//   Penalty      minimize risk + lambda*||f||^2 + mu*max(0, Omega(f)).
enum class SolveMode { Constrained, Penalty };

struct TrainConfig {
  LossSpec loss{};
  KernelSpec kernel{};
  double lambda = 0.01;  // RKHS-norm regularization weight; >= 0
  FairnessSpec fairness{};
  SolveMode mode = SolveMode::Constrained;
  int max_iters = 50000;
  double step_size = 1.0;       // initial Armijo step
  double tol = 1e-6;            // gradient-norm and feasibility tolerance
  double penalty_growth = 10.0; // continuation factor for the penalty weight
  std::uint64_t seed = 0;       // reserved for stochastic variants; the
                                // full-batch solver is deterministic
  bool record_trace = false;    // capture per-step subproblem objective values
};

struct TrainResult {
  Classifier classifier;
  double objective_value = 0.0;                 // risk + reg (+ soft penalty)
  std::optional<double> constraint_value{};     // Omega(f); set when a
                                                // constraint kind is active
  int iterations = 0;                           // accepted descent steps
  double stationarity_gap = 0.0;  // gradient norm; at a soft-penalty kink,
                                  // distance from zero to the subdifferential
  double max_abs_score = 0.0;                   // realized sup |f(x_i)| on the
                                                // training set
  bool converged = false;
  std::vector<double> trace;                    // filled when record_trace;
                                                // non-increasing within each
                                                // continuation leg
};

// (1/N) sum_i L(f(x_i), y_i).
double empirical_risk(const Classifier& f, const Dataset& data, const LossSpec& spec);

// empirical_risk + lambda*||f||_k^2, plus the soft fairness penalty when the
// config runs in Penalty mode with an active constraint kind.
double objective(const Classifier& f, const Dataset& data, const TrainConfig& config);

// Full-batch gradient descent with Armijo backtracking. The linear kernel is
// trained directly in weight space (the regularized optimum lies in the span
// of the data, so this is the same function class); other kernels are trained
// over the dual coefficients of an expansion anchored at the training points.
// In Constrained mode the covariance constraint is enforced by growing a
// quadratic penalty until the violation falls below tol. Non-convergence
// within max_iters returns the best iterate with converged = false.
TrainResult train(const Dataset& data, const TrainConfig& config);

// (lambda, ||f_lambda||_k) for each entry of an ascending positive grid,
// each trained from scratch. Throws SolverError if any run fails to converge.
std::vector<std::pair<double, double>> norm_path(const Dataset& data,
                                                 TrainConfig config,
                                                 const std::vector<double>& lambdas);

}  // namespace stablefair
