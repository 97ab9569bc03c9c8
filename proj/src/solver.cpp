#include "stablefair/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "stablefair/common.hpp"

namespace stablefair {

namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr double kMinStep = 1e-18;
constexpr double kMaxPenaltyWeight = 1e12;

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// One convex objective in coefficient space. `scores` is always M * coef with
// M the feature matrix (linear path) or the Gram matrix (dual path). `grad`
// returns a descent DIRECTION: the Euclidean gradient on the linear path, the
// Gram-preconditioned (functional) gradient on the dual path, where the
// objective is 2*lambda strongly convex in the RKHS metric no matter how fast
// the Gram spectrum decays. `sq` gives that direction's squared metric norm,
// which equals the directional derivative used by the Armijo test and the
// stationarity measure.
struct CoefObjective {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
  std::function<double(const Eigen::VectorXd&)> sq;
};

struct DescentResult {
  Eigen::VectorXd coef;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Gradient descent with Armijo backtracking. The step doubles after each
// accepted move and halves until sufficient decrease, so smooth regions run
// near the ideal step while nonsmooth kinks degrade gracefully.
DescentResult minimize(const CoefObjective& obj, Eigen::VectorXd coef,
                       double step0, double tol, int max_iters,
                       std::vector<double>* trace) {
  DescentResult res;
  double fx = obj.value(coef);
  Eigen::VectorXd g = obj.grad(coef);
  double gsq = obj.sq(g);
  double gn = std::sqrt(gsq);
  double step = step0;
  if (trace) trace->push_back(fx);
  int it = 0;
  while (it < max_iters && gn > tol) {
    step = std::min(step * 2.0, 1e9);
    bool accepted = false;
    while (step >= kMinStep) {
      Eigen::VectorXd cand = coef - step * g;
      const double fc = obj.value(cand);
      if (fc <= fx - kArmijoSlope * step * gsq) {
        coef = std::move(cand);
        fx = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent direction left (nonsmooth stall)
    g = obj.grad(coef);
    gsq = obj.sq(g);
    gn = std::sqrt(gsq);
    ++it;
    if (trace) trace->push_back(fx);
  }
  res.coef = std::move(coef);
  res.value = fx;
  res.grad_norm = gn;
  res.iterations = it;
  res.converged = gn <= tol;
  return res;
}

void validate_config(const Dataset& data, const TrainConfig& config) {
  if (data.size() == 0) throw std::invalid_argument("train: empty dataset");
  if (config.loss.kind == LossKind::ZeroOne) {
    throw std::invalid_argument("train: the zero-one loss is not trainable");
  }
  if (config.loss.kind == LossKind::Squared) {
    if (!config.loss.score_bound || !(*config.loss.score_bound > 0.0)) {
      throw std::invalid_argument("train: squared loss needs a positive score_bound");
    }
  }
  if (config.lambda < 0.0) throw std::invalid_argument("train: lambda must be >= 0");
  if (!(config.tol > 0.0)) throw std::invalid_argument("train: tol must be > 0");
  if (!(config.step_size > 0.0)) throw std::invalid_argument("train: step_size must be > 0");
  if (config.max_iters < 1) throw std::invalid_argument("train: max_iters must be >= 1");
  if (config.fairness.kind != FairnessKind::None) {
    if (!(config.penalty_growth > 1.0)) {
      throw std::invalid_argument("train: penalty_growth must be > 1");
    }
    if (config.fairness.threshold < 0.0) {
      throw std::invalid_argument("train: fairness threshold must be >= 0");
    }
    if (data.num_groups() != 2) {
      throw std::invalid_argument("train: covariance fairness needs exactly 2 groups");
    }
    if (config.mode == SolveMode::Penalty && config.fairness.mu < 0.0) {
      throw std::invalid_argument("train: penalty weight mu must be >= 0");
    }
  }
}

}  // namespace

double empirical_risk(const Classifier& f, const Dataset& data, const LossSpec& spec) {
  if (data.size() == 0) throw std::invalid_argument("empirical_risk: empty dataset");
  double total = 0.0;
  for (const auto& s : data.samples()) total += loss(spec, score(f, s.x), s.y);
  return total / static_cast<double>(data.size());
}

double objective(const Classifier& f, const Dataset& data, const TrainConfig& config) {
  double val = empirical_risk(f, data, config.loss) +
               config.lambda * rkhs_norm_sq(f);
  if (config.mode == SolveMode::Penalty && config.fairness.kind != FairnessKind::None) {
    val += fairness_penalty(f, data, config.fairness);
  }
  return val;
}

TrainResult train(const Dataset& data, const TrainConfig& config) {
  validate_config(data, config);
  const auto n = static_cast<Eigen::Index>(data.size());
  const double n_d = static_cast<double>(n);
  const bool linear_path = config.kernel.kind == KernelKind::Linear;

  // M maps coefficients to scores: the feature matrix on the linear path,
  // the Gram matrix (built once per run) on the dual path.
  Eigen::MatrixXd M;
  if (linear_path) {
    M.resize(n, data.dim());
    for (Eigen::Index i = 0; i < n; ++i) M.row(i) = data[static_cast<std::size_t>(i)].x;
  } else {
    M = gram_matrix(config.kernel, data.feature_vectors());
  }

  Eigen::VectorXd labels(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    labels[i] = static_cast<double>(data[static_cast<std::size_t>(i)].y);
  }

  // Group-deviation weights for the covariance term: gw_i = (z_i - zbar)/N,
  // so the constraint is |gw . scores| - c and its coefficient-space gradient
  // direction is h = M^T gw.
  const bool fair = config.fairness.kind != FairnessKind::None;
  Eigen::VectorXd gw = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd h;
  if (fair) {
    double zbar = 0.0;
    for (const auto& s : data.samples()) zbar += static_cast<double>(s.z);
    zbar /= n_d;
    for (Eigen::Index i = 0; i < n; ++i) {
      gw[i] = (static_cast<double>(data[static_cast<std::size_t>(i)].z) - zbar) / n_d;
    }
    if (linear_path) h = M.transpose() * gw;
  }
  const double c = config.fairness.threshold;

  // Metric of the direction space: Euclidean for primal weights, the Gram
  // form a . (K b) for dual coefficients (the RKHS inner product).
  auto mdot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return linear_path ? a.dot(b) : a.dot(M * b);
  };

  auto scores_of = [&](const Eigen::VectorXd& coef) -> Eigen::VectorXd {
    return M * coef;
  };
  auto risk_of = [&](const Eigen::VectorXd& scores) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      total += loss(config.loss, scores[i], data[static_cast<std::size_t>(i)].y);
    }
    return total / n_d;
  };
  auto reg_of = [&](const Eigen::VectorXd& coef, const Eigen::VectorXd& scores) {
    // Dual path: alpha^T K alpha == alpha . scores since scores = K alpha.
    return linear_path ? coef.squaredNorm() : coef.dot(scores);
  };
  auto omega_of = [&](const Eigen::VectorXd& scores) {
    return std::abs(gw.dot(scores)) - c;
  };

  // rho > 0 selects the Constrained quadratic penalty (rho/2)*max(0,Omega)^2;
  // rho == 0 with Penalty mode selects the soft penalty mu*max(0,Omega).
  auto make_objective = [&](double rho) {
    CoefObjective obj;
    obj.value = [&, rho](const Eigen::VectorXd& coef) {
      const Eigen::VectorXd scores = scores_of(coef);
      double val = risk_of(scores) + config.lambda * reg_of(coef, scores);
      if (fair) {
        const double viol = std::max(0.0, omega_of(scores));
        if (config.mode == SolveMode::Constrained) {
          val += 0.5 * rho * viol * viol;
        } else {
          val += config.fairness.mu * viol;
        }
      }
      return val;
    };
    obj.grad = [&, rho](const Eigen::VectorXd& coef) {
      const Eigen::VectorXd scores = scores_of(coef);
      Eigen::VectorXd lg(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        lg[i] = loss_grad(config.loss, scores[i], data[static_cast<std::size_t>(i)].y);
      }
      double slope = 0.0;
      if (fair) {
        const double cov = gw.dot(scores);
        const double omega = std::abs(cov) - c;
        if (omega > 0.0) {
          slope = (config.mode == SolveMode::Constrained ? rho * omega
                                                         : config.fairness.mu) *
                  sign_of(cov);
        }
      }
      if (linear_path) {
        Eigen::VectorXd g = (M.transpose() * lg) / n_d + 2.0 * config.lambda * coef;
        if (slope != 0.0) g += slope * h;
        return g;
      }
      // Dual coefficient gradient is K * (this); dropping the leading K is
      // exactly the functional-gradient preconditioning.
      Eigen::VectorXd d = lg / n_d + 2.0 * config.lambda * coef;
      if (slope != 0.0) d += slope * gw;
      return d;
    };
    obj.sq = [&](const Eigen::VectorXd& g) { return mdot(g, g); };
    return obj;
  };

  TrainResult result;
  std::vector<double>* trace = config.record_trace ? &result.trace : nullptr;
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(linear_path ? data.dim() : n);
  DescentResult last;
  bool feasible_enough = true;
  int budget = config.max_iters;

  if (fair && config.mode == SolveMode::Constrained) {
    double rho = 1.0;
    for (;;) {
      last = minimize(make_objective(rho), std::move(coef), config.step_size,
                      config.tol, budget, trace);
      coef = std::move(last.coef);
      result.iterations += last.iterations;
      budget -= last.iterations;
      const double viol = std::max(0.0, omega_of(scores_of(coef)));
      feasible_enough = viol <= config.tol;
      if (feasible_enough || budget <= 0 || !last.converged) break;
      if (rho >= kMaxPenaltyWeight) break;
      rho *= config.penalty_growth;
    }
  } else {
    last = minimize(make_objective(0.0), std::move(coef), config.step_size,
                    config.tol, budget, trace);
    coef = std::move(last.coef);
    result.iterations = last.iterations;

    // The soft penalty mu*max(0, |v| - c) with v = gw . scores is piecewise
    // smooth with kinks on the hyperplanes |v| = c, and its minimizer often
    // sits exactly there, where no gradient norm can certify optimality.
    // Project onto the nearest kink, polish along it (the penalty is
    // identically 0 on that manifold), and certify first-order optimality by
    // the distance from zero to the subdifferential.
    const bool kink_prone = fair && config.mode == SolveMode::Penalty &&
                            config.fairness.mu > 0.0;
    // Kink normal in direction space: moving the coefficients along it is the
    // steepest way to change v = gw . scores.
    const Eigen::VectorXd& kvec = linear_path ? h : gw;
    const double kn2 = kink_prone ? mdot(kvec, kvec) : 0.0;
    if (kink_prone && !last.converged && kn2 > 0.0) {
      const double mu = config.fairness.mu;
      CoefObjective smooth;  // risk + lambda * reg, penalty omitted
      smooth.value = [&](const Eigen::VectorXd& cf) {
        const Eigen::VectorXd scores = scores_of(cf);
        return risk_of(scores) + config.lambda * reg_of(cf, scores);
      };
      smooth.grad = [&](const Eigen::VectorXd& cf) {
        const Eigen::VectorXd scores = scores_of(cf);
        Eigen::VectorXd lg(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          lg[i] = loss_grad(config.loss, scores[i], data[static_cast<std::size_t>(i)].y);
        }
        if (linear_path) {
          return Eigen::VectorXd((M.transpose() * lg) / n_d + 2.0 * config.lambda * cf);
        }
        return Eigen::VectorXd(lg / n_d + 2.0 * config.lambda * cf);
      };
      smooth.sq = [&](const Eigen::VectorXd& g) { return mdot(g, g); };
      CoefObjective manifold;  // descent restricted to the kink hyperplane
      manifold.value = smooth.value;
      manifold.grad = [&](const Eigen::VectorXd& cf) {
        Eigen::VectorXd g = smooth.grad(cf);
        g -= kvec * (mdot(kvec, g) / kn2);
        return g;
      };
      manifold.sq = smooth.sq;

      double v = gw.dot(scores_of(coef));
      const double side = c > 0.0 ? (v >= 0.0 ? 1.0 : -1.0) : 0.0;
      const double target = side * c;
      Eigen::VectorXd pinned = coef + kvec * ((target - v) / kn2);
      DescentResult pol = minimize(manifold, std::move(pinned), config.step_size,
                                   0.5 * config.tol, config.max_iters, nullptr);
      v = gw.dot(scores_of(pol.coef));
      pol.coef += kvec * ((target - v) / kn2);  // undo round-off drift off the kink

      // Penalty slope interval at the kink: [0, mu] on the +c side, [-mu, 0]
      // on the -c side, [-mu, mu] when c = 0 collapses both.
      const double d_lo = side > 0.0 ? 0.0 : -mu;
      const double d_hi = side < 0.0 ? 0.0 : mu;
      const Eigen::VectorXd gF = smooth.grad(pol.coef);
      const double d_star = std::clamp(-mdot(kvec, gF) / kn2, d_lo, d_hi);
      const Eigen::VectorXd resid = gF + d_star * kvec;
      const double gap = std::sqrt(mdot(resid, resid));
      result.iterations += pol.iterations;
      if (gap <= config.tol) {
        coef = std::move(pol.coef);
        last.grad_norm = gap;
        last.converged = true;
      } else if (pol.value <= last.value) {
        coef = std::move(pol.coef);  // keep the better iterate, still flagged
        last.grad_norm = std::min(last.grad_norm, gap);
      }
    }
  }

  if (linear_path) {
    result.classifier = LinearClassifier{coef};
  } else {
    result.classifier = KernelClassifier{coef, data.feature_vectors(), config.kernel};
  }
  const Eigen::VectorXd final_scores = scores_of(coef);
  result.max_abs_score = final_scores.size() ? final_scores.cwiseAbs().maxCoeff() : 0.0;
  result.stationarity_gap = last.grad_norm;
  result.converged = last.converged && feasible_enough;
  result.objective_value = objective(result.classifier, data, config);
  if (fair) result.constraint_value = omega_of(final_scores);
  return result;
}

std::vector<std::pair<double, double>> norm_path(const Dataset& data,
                                                 TrainConfig config,
                                                 const std::vector<double>& lambdas) {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0)) {
      throw std::invalid_argument("norm_path: every lambda must be > 0");
    }
    if (i > 0 && lambdas[i] <= lambdas[i - 1]) {
      throw std::invalid_argument("norm_path: lambdas must be strictly ascending");
    }
  }
  std::vector<std::pair<double, double>> path;
  path.reserve(lambdas.size());
  for (double lambda : lambdas) {
    config.lambda = lambda;
    TrainResult res = train(data, config);
    if (!res.converged) {
      throw SolverError("norm_path: training did not converge at lambda = " +
                        std::to_string(lambda));
    }
    path.emplace_back(lambda, std::sqrt(rkhs_norm_sq(res.classifier)));
  }
  return path;
}

}  // namespace stablefair
