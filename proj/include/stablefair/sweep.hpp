#pragma once

#include <string>
#include <vector>

#include "stablefair/config.hpp"
#include "stablefair/stability.hpp"

namespace stablefair {

// Materializes the configured data source (CSV or synthetic), optionally
// normalized to unit max-norm. The normalization factor is 1 when no
// rescaling was requested.
struct PreparedData {
  Dataset data;
  double normalize_factor = 1.0;
};
PreparedData prepare_data(const ExperimentConfig& cfg);

// Probe replacements redraw from the generating law when the source is
// synthetic; for file data the returned sampler is empty and the suite falls
// back to a uniform pick from the held-out test set.
ReplacementSampler probe_replacement_sampler(const ExperimentConfig& cfg);

// Runs the repeated-split suite once per grid lambda and writes report.csv
// plus stab_vs_lambda.svg under cfg.out_dir. Deterministic given the config:
// rerunning produces byte-identical files.
struct SweepOutputs {
  std::vector<StabilityReport> rows;
  std::string csv_path;
  std::string svg_path;
};
SweepOutputs run_sweep(const ExperimentConfig& cfg);

}  // namespace stablefair
