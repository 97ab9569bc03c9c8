#include "stablefair/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stablefair/common.hpp"
#include "stablefair/sweep.hpp"

namespace stablefair {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct CliOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<double> lambdas;
  std::optional<int> reps;
};

ExperimentConfig load_with_overrides(const CliOptions& opts) {
  ExperimentConfig cfg = parse_config(opts.config);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.out) cfg.out_dir = *opts.out;
  if (!opts.lambdas.empty()) {
    for (double l : opts.lambdas) {
      if (l < 0.0) throw ConfigError("--lambda values must be >= 0");
    }
    cfg.lambdas = opts.lambdas;
  }
  if (opts.reps) {
    if (*opts.reps < 1) throw ConfigError("--reps must be >= 1");
    cfg.reps = *opts.reps;
  }
  return cfg;
}

int do_train(const ExperimentConfig& cfg) {
  const PreparedData prepared = prepare_data(cfg);
  TrainConfig train_cfg = cfg.train;
  train_cfg.lambda = cfg.lambdas.front();
  const TrainResult res = train(prepared.data, train_cfg);
  std::cout << "lambda           " << fmt(train_cfg.lambda) << '\n'
            << "samples          " << prepared.data.size() << '\n'
            << "iterations       " << res.iterations << '\n'
            << "objective        " << fmt(res.objective_value) << '\n'
            << "stationarity gap " << fmt(res.stationarity_gap) << '\n'
            << "rkhs norm        " << fmt(std::sqrt(rkhs_norm_sq(res.classifier))) << '\n'
            << "max |score|      " << fmt(res.max_abs_score) << '\n'
            << "train accuracy   " << fmt(accuracy(res.classifier, prepared.data)) << '\n';
  if (res.constraint_value) {
    std::cout << "constraint       " << fmt(*res.constraint_value) << '\n';
  }
  if (!res.converged) {
    std::cerr << "solver did not converge within " << train_cfg.max_iters
              << " iterations\n";
    return 3;
  }
  return 0;
}

int do_evaluate(const ExperimentConfig& cfg) {
  const PreparedData prepared = prepare_data(cfg);
  auto [train_set, test_set] =
      split(prepared.data, cfg.test_frac, cfg.train_frac, derive_seed(cfg.seed, 0));
  TrainConfig train_cfg = cfg.train;
  train_cfg.lambda = cfg.lambdas.front();
  const TrainResult res = train(train_set, train_cfg);
  if (!res.converged) {
    std::cerr << "solver did not converge within " << train_cfg.max_iters
              << " iterations\n";
    return 3;
  }
  std::vector<int> preds;
  preds.reserve(test_set.size());
  for (const auto& s : test_set.samples()) preds.push_back(predict(res.classifier, s.x));
  std::cout << "lambda          " << fmt(train_cfg.lambda) << '\n'
            << "train samples   " << train_set.size() << '\n'
            << "test samples    " << test_set.size() << '\n'
            << "test accuracy   " << fmt(accuracy(res.classifier, test_set)) << '\n'
            << "statistical rate " << fmt(statistical_rate(preds, test_set.groups())) << '\n'
            << "train risk      " << fmt(empirical_risk(res.classifier, train_set, train_cfg.loss)) << '\n'
            << "test risk       " << fmt(empirical_risk(res.classifier, test_set, train_cfg.loss)) << '\n'
            << "gen gap         "
            << fmt(generalization_gap(res.classifier, train_set, test_set, train_cfg.loss))
            << '\n';
  return 0;
}

int do_sweep(const ExperimentConfig& cfg) {
  const SweepOutputs out = run_sweep(cfg);
  std::cout << "lambda    acc_mean  gamma_mean  stab      beta_hat  beta_bound\n";
  for (const auto& r : out.rows) {
    std::cout << fmt(r.lambda) << '\t' << fmt(r.acc_mean) << '\t' << fmt(r.gamma_mean)
              << '\t' << (r.stab ? fmt(*r.stab) : "-") << '\t'
              << (r.beta_hat ? fmt(*r.beta_hat) : "-") << '\t'
              << (r.beta_bound ? fmt(*r.beta_bound) : "-") << '\n';
  }
  std::cout << "wrote " << out.csv_path << '\n' << "wrote " << out.svg_path << '\n';
  return 0;
}

int do_certify(const ExperimentConfig& cfg) {
  for (double l : cfg.lambdas) {
    if (!(l > 0.0)) {
      throw ConfigError("certify: every lambda must be > 0 (nothing is certified at 0)");
    }
  }
  const PreparedData prepared = prepare_data(cfg);
  const int probes = cfg.probes >= 1 ? cfg.probes : 10;

  ProtocolParams protocol;
  protocol.test_frac = cfg.test_frac;
  protocol.train_frac = cfg.train_frac;
  protocol.reps = 1;
  protocol.probes = probes;
  protocol.seed = cfg.seed;
  protocol.replacement_sampler = probe_replacement_sampler(cfg);
  if (cfg.source == ExperimentConfig::Source::Synthetic || cfg.normalize) {
    protocol.domain_kappa_sq = 1.0;
  }

  bool all_pass = true;
  TrainConfig train_cfg = cfg.train;
  for (double lambda : cfg.lambdas) {
    train_cfg.lambda = lambda;
    const StabilityReport r = run_stability_suite(prepared.data, train_cfg, protocol);
    const bool pass = *r.beta_hat <= *r.beta_bound + *r.allowance;
    all_pass = all_pass && pass;
    std::cout << "lambda=" << fmt(lambda) << " beta_hat=" << fmt(*r.beta_hat)
              << " bound=" << fmt(*r.beta_bound) << " allowance=" << fmt(*r.allowance)
              << " norm_gap=" << fmt(*r.norm_gap) << (pass ? " PASS" : " FAIL")
              << '\n';
  }
  if (!all_pass) {
    std::cerr << "certification failed: measured stability exceeds the bound\n";
    return 1;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Stability-certified fair classification toolkit"};
  app.require_subcommand(1);
  CliOptions opts;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "experiment config file")->required();
    sub->add_option("--seed", opts.seed, "master seed override");
    sub->add_option("--out", opts.out, "output directory override");
    sub->add_option("--lambda", opts.lambdas, "lambda grid override")->delimiter(',');
    sub->add_option("--reps", opts.reps, "repetition count override");
  };
  CLI::App* cmd_train = app.add_subcommand("train", "fit one classifier on the full dataset");
  CLI::App* cmd_eval = app.add_subcommand("evaluate", "train on a split and score the test side");
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "repeated-split experiment across the lambda grid");
  CLI::App* cmd_cert = app.add_subcommand("certify", "check measured stability against the bound");
  for (CLI::App* sub : {cmd_train, cmd_eval, cmd_sweep, cmd_cert}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const ExperimentConfig cfg = load_with_overrides(opts);
    if (cmd_train->parsed()) return do_train(cfg);
    if (cmd_eval->parsed()) return do_evaluate(cfg);
    if (cmd_sweep->parsed()) return do_sweep(cfg);
    return do_certify(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace stablefair
