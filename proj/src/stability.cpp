#include "stablefair/stability.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stablefair/common.hpp"
#include "stablefair/fairness.hpp"

namespace stablefair {

namespace {

void require_positive_lambda(double lambda, const char* who) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument(std::string(who) +
                                ": lambda must be > 0 (nothing is certified at 0)");
  }
}

void require_positive_n(int n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": N must be >= 1");
}

double mean_of(const std::vector<double>& v) {
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(v.size());
}

// Population standard deviation; a single repetition reports 0 spread.
double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double total = 0.0;
  for (double x : v) total += (x - m) * (x - m);
  return std::sqrt(total / static_cast<double>(v.size()));
}

}  // namespace

double stability_bound_rkhs(const BoundInputs& in) {
  require_positive_lambda(in.lambda, "stability_bound_rkhs");
  require_positive_n(in.n, "stability_bound_rkhs");
  if (!(in.sigma > 0.0) || !(in.kappa_sq > 0.0)) {
    throw std::invalid_argument("stability_bound_rkhs: sigma and kappa_sq must be > 0");
  }
  return in.sigma * in.sigma * in.kappa_sq / (in.lambda * static_cast<double>(in.n));
}

double stability_bound_linear(const BoundInputs& in) {
  require_positive_lambda(in.lambda, "stability_bound_linear");
  require_positive_n(in.n, "stability_bound_linear");
  if (!(in.G > 0.0)) {
    throw std::invalid_argument("stability_bound_linear: G must be > 0");
  }
  return in.G * in.G / (in.lambda * static_cast<double>(in.n));
}

namespace {

double highprob_bound(double squared_rate, const BoundInputs& in) {
  if (!(in.delta > 0.0 && in.delta < 1.0)) {
    throw std::invalid_argument("generalization_bound: delta must lie in (0, 1)");
  }
  const double n = static_cast<double>(in.n);
  return 8.0 * std::sqrt((2.0 * squared_rate / (in.lambda * n) + 1.0 / n) *
                         std::log(8.0 / in.delta));
}

}  // namespace

double generalization_bound_highprob(const BoundInputs& in) {
  require_positive_lambda(in.lambda, "generalization_bound_highprob");
  require_positive_n(in.n, "generalization_bound_highprob");
  return highprob_bound(in.sigma * in.sigma * in.kappa_sq, in);
}

double generalization_bound_highprob_linear(const BoundInputs& in) {
  require_positive_lambda(in.lambda, "generalization_bound_highprob_linear");
  require_positive_n(in.n, "generalization_bound_highprob_linear");
  if (!(in.G > 0.0)) {
    throw std::invalid_argument("generalization_bound_highprob_linear: G must be > 0");
  }
  return highprob_bound(in.G * in.G, in);
}

double excess_risk_bound(const BoundInputs& in) {
  require_positive_lambda(in.lambda, "excess_risk_bound");
  require_positive_n(in.n, "excess_risk_bound");
  if (!(in.B > 0.0)) {
    throw std::invalid_argument("excess_risk_bound: B must be > 0 (degenerate otherwise)");
  }
  return in.sigma * in.sigma * in.kappa_sq / (in.lambda * static_cast<double>(in.n)) +
         in.lambda * in.B * in.B;
}

double optimal_lambda(const BoundInputs& in) {
  require_positive_n(in.n, "optimal_lambda");
  if (!(in.B > 0.0) || !(in.sigma > 0.0) || !(in.kappa_sq > 0.0)) {
    throw std::invalid_argument("optimal_lambda: sigma, kappa_sq and B must be > 0");
  }
  return in.sigma * std::sqrt(in.kappa_sq) /
         (in.B * std::sqrt(static_cast<double>(in.n)));
}

double excess_risk_bound_at_optimal(const BoundInputs& in) {
  // Value of the excess-risk bound at optimal_lambda, in closed form.
  optimal_lambda(in);  // validates
  return 2.0 * in.sigma * std::sqrt(in.kappa_sq) * in.B /
         std::sqrt(static_cast<double>(in.n));
}

double solver_allowance(double sigma, double kappa, double lambda, double tol) {
  require_positive_lambda(lambda, "solver_allowance");
  if (!(tol > 0.0)) throw std::invalid_argument("solver_allowance: tol must be > 0");
  const double coef_error = tol / (2.0 * lambda);
  return 2.0 * sigma * kappa * coef_error;
}

GEstimate estimate_G(const LossSpec& loss_spec, const Dataset& data,
                     int classifier_samples, std::uint64_t seed) {
  if (classifier_samples < 1) {
    throw std::invalid_argument("estimate_G: classifier_samples must be >= 1");
  }
  if (data.size() == 0) throw std::invalid_argument("estimate_G: empty dataset");
  if (loss_spec.kind == LossKind::ZeroOne) {
    throw std::invalid_argument("estimate_G: the zero-one loss has no gradient");
  }
  const double sigma = admissibility_constant(loss_spec);
  std::vector<double> norms;
  norms.reserve(data.size());
  double kappa = 0.0;
  for (const auto& s : data.samples()) {
    norms.push_back(s.x.norm());
    kappa = std::max(kappa, norms.back());
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = 0.0;
  for (int t = 0; t < classifier_samples; ++t) {
    Eigen::VectorXd w(data.dim());
    for (int j = 0; j < data.dim(); ++j) w[j] = gauss(rng);
    if (loss_spec.kind == LossKind::Squared) {
      // Rescale into the certified range |<w,x>| <= B so the gradient bound
      // 2B+2 applies to every sampled model.
      const double B = *loss_spec.score_bound;
      double max_score = 0.0;
      for (const auto& s : data.samples()) {
        max_score = std::max(max_score, std::abs(w.dot(s.x)));
      }
      if (max_score > B) w *= B / max_score;
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& s = data[i];
      best = std::max(best, std::abs(loss_grad(loss_spec, w.dot(s.x), s.y)) * norms[i]);
    }
  }
  return GEstimate{best, sigma * kappa};
}

StabilityProbeResult empirical_uniform_stability(const Dataset& data,
                                                 const TrainConfig& config,
                                                 int probes,
                                                 const ReplacementSampler& sampler,
                                                 const Dataset& eval_set,
                                                 std::uint64_t seed) {
  if (probes < 1) throw std::invalid_argument("empirical_uniform_stability: probes must be >= 1");
  require_positive_lambda(config.lambda, "empirical_uniform_stability");
  if (eval_set.size() == 0) {
    throw std::invalid_argument("empirical_uniform_stability: empty eval set");
  }
  if (!sampler) {
    throw std::invalid_argument("empirical_uniform_stability: missing replacement sampler");
  }

  const TrainResult base = train(data, config);
  if (!base.converged) {
    throw SolverError("empirical_uniform_stability: base training did not converge");
  }
  std::vector<double> base_losses;
  base_losses.reserve(eval_set.size());
  for (const auto& s : eval_set.samples()) {
    base_losses.push_back(loss(config.loss, score(base.classifier, s.x), s.y));
  }

  StabilityProbeResult out;
  out.probe_beta.reserve(static_cast<std::size_t>(probes));
  out.probe_norm.reserve(static_cast<std::size_t>(probes));
  for (int p = 0; p < probes; ++p) {
    // Each probe draws from its own derived stream so probes are independent
    // and their order never matters.
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
    std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
    const std::size_t i = pick(rng);
    const Dataset swapped = swap_sample(data, i, sampler(rng));
    const TrainResult probe = train(swapped, config);
    if (!probe.converged) {
      throw SolverError("empirical_uniform_stability: probe " + std::to_string(p) +
                        " did not converge");
    }
    double worst = 0.0;
    for (std::size_t e = 0; e < eval_set.size(); ++e) {
      const auto& s = eval_set[e];
      const double l = loss(config.loss, score(probe.classifier, s.x), s.y);
      worst = std::max(worst, std::abs(l - base_losses[e]));
    }
    out.probe_beta.push_back(worst);
    out.probe_norm.push_back(rkhs_distance(base.classifier, probe.classifier));
    out.beta_hat = std::max(out.beta_hat, out.probe_beta.back());
    out.norm_gap = std::max(out.norm_gap, out.probe_norm.back());
  }
  return out;
}

AgreementResult prediction_agreement_check(const Classifier& g,
                                           const Classifier& g_swapped,
                                           const Dataset& eval_set,
                                           double margin_threshold) {
  if (eval_set.size() == 0) {
    throw std::invalid_argument("prediction_agreement_check: empty eval set");
  }
  if (margin_threshold < 0.0) {
    throw std::invalid_argument("prediction_agreement_check: threshold must be >= 0");
  }
  AgreementResult res;
  std::size_t low = 0;
  for (const auto& s : eval_set.samples()) {
    const double sg = score(g, s.x);
    if (std::abs(sg) <= margin_threshold) {
      ++low;
      continue;
    }
    if (predict_score(sg) != predict(g_swapped, s.x)) ++res.violations;
  }
  res.low_margin_mass = static_cast<double>(low) / static_cast<double>(eval_set.size());
  return res;
}

double stab_metric(const std::vector<Classifier>& classifiers, const Dataset& eval_set) {
  const std::size_t n = classifiers.size();
  if (n < 2) throw std::invalid_argument("stab_metric: needs at least 2 classifiers");
  if (eval_set.size() == 0) throw std::invalid_argument("stab_metric: empty eval set");
  std::vector<std::vector<int>> preds(n);
  for (std::size_t i = 0; i < n; ++i) {
    preds[i].reserve(eval_set.size());
    for (const auto& s : eval_set.samples()) preds[i].push_back(predict(classifiers[i], s.x));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      int disagreements = 0;
      for (std::size_t e = 0; e < eval_set.size(); ++e) {
        if (preds[i][e] != preds[j][e]) ++disagreements;
      }
      total += 2.0 * disagreements;  // ordered pairs count both (i,j) and (j,i)
    }
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double generalization_gap(const Classifier& f, const Dataset& train_set,
                          const Dataset& holdout, const LossSpec& loss_spec) {
  return empirical_risk(f, holdout, loss_spec) - empirical_risk(f, train_set, loss_spec);
}

double bregman(const ConvexFunctional& F, const Eigen::VectorXd& f,
               const Eigen::VectorXd& g) {
  if (!F.value || !F.grad) throw std::invalid_argument("bregman: missing callbacks");
  if (f.size() != g.size()) throw std::invalid_argument("bregman: dimension mismatch");
  const double d = F.value(f) - F.value(g) - (f - g).dot(F.grad(g));
  if (!std::isfinite(d)) throw std::domain_error("bregman: non-finite value");
  return d;
}

double accuracy(const Classifier& f, const Dataset& eval_set) {
  if (eval_set.size() == 0) throw std::invalid_argument("accuracy: empty eval set");
  std::size_t hits = 0;
  for (const auto& s : eval_set.samples()) {
    if (predict(f, s.x) == s.y) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(eval_set.size());
}

StabilityReport run_stability_suite(const Dataset& data, const TrainConfig& config,
                                    const ProtocolParams& protocol) {
  if (protocol.reps < 1) throw std::invalid_argument("stability suite: reps must be >= 1");
  if (protocol.probes < 0) throw std::invalid_argument("stability suite: probes must be >= 0");

  // Shared test side; the full remainder is the resampling pool.
  auto [pool, test] = split(data, protocol.test_frac, 1.0, derive_seed(protocol.seed, 0));

  StabilityReport report;
  report.lambda = config.lambda;
  report.reps = protocol.reps;

  std::vector<Classifier> classifiers;
  classifiers.reserve(static_cast<std::size_t>(protocol.reps));
  std::vector<double> accs, gammas, gaps;
  std::optional<Dataset> first_train;

  const std::vector<int> test_groups = test.groups();
  for (int r = 0; r < protocol.reps; ++r) {
    const std::uint64_t rep_seed = derive_seed(protocol.seed, 1000 + static_cast<std::uint64_t>(r));
    Dataset train_set = protocol.fresh_train_source
                            ? protocol.fresh_train_source(rep_seed)
                            : sample_fraction(pool, protocol.train_frac, rep_seed);
    TrainResult res = train(train_set, config);
    if (!res.converged) {
      throw SolverError("stability suite: repetition " + std::to_string(r) +
                        " did not converge (gap " + std::to_string(res.stationarity_gap) +
                        ")");
    }
    accs.push_back(accuracy(res.classifier, test));
    std::vector<int> preds;
    preds.reserve(test.size());
    for (const auto& s : test.samples()) preds.push_back(predict(res.classifier, s.x));
    gammas.push_back(statistical_rate(preds, test_groups));
    gaps.push_back(generalization_gap(res.classifier, train_set, test, config.loss));
    classifiers.push_back(std::move(res.classifier));
    if (r == 0) first_train.emplace(std::move(train_set));
  }

  report.acc_mean = mean_of(accs);
  report.acc_std = std_of(accs);
  report.gamma_mean = mean_of(gammas);
  report.gamma_std = std_of(gammas);
  report.gen_gap = mean_of(gaps);
  if (protocol.reps >= 2) report.stab = stab_metric(classifiers, test);

  if (config.lambda > 0.0) {
    const double sigma = admissibility_constant(config.loss);
    const double kap_sq = protocol.domain_kappa_sq
                              ? *protocol.domain_kappa_sq
                              : kappa_sq(config.kernel, data.feature_vectors());
    BoundInputs in;
    in.sigma = sigma;
    in.kappa_sq = kap_sq;
    in.lambda = config.lambda;
    in.n = static_cast<int>(first_train->size());
    report.beta_bound = stability_bound_rkhs(in);
    report.allowance = solver_allowance(sigma, std::sqrt(kap_sq), config.lambda, config.tol);

    if (protocol.probes >= 1) {
      ReplacementSampler sampler = protocol.replacement_sampler;
      if (!sampler) {
        // Default: redraw uniformly from the held-out test side.
        sampler = [&test](std::mt19937_64& rng) {
          std::uniform_int_distribution<std::size_t> pick(0, test.size() - 1);
          return test[pick(rng)];
        };
      }
      StabilityProbeResult probes = empirical_uniform_stability(
          *first_train, config, protocol.probes, sampler, test,
          derive_seed(protocol.seed, 2000));
      report.beta_hat = probes.beta_hat;
      report.norm_gap = probes.norm_gap;
    }
  }
  return report;
}

}  // namespace stablefair
