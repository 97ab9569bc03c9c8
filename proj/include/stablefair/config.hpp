#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stablefair/csv.hpp"
#include "stablefair/solver.hpp"
#include "stablefair/synthetic.hpp"

namespace stablefair {

// Everything one sweep/training run needs, parsed from a sectioned
// `key = value` config file. Unknown sections or keys are errors.
struct ExperimentConfig {
  enum class Source { Csv, Synthetic };

  // [data]
  Source source = Source::Synthetic;
  std::string path;        // csv source only
  CsvSchema schema;        // csv source only
  bool normalize = true;   // rescale features to unit max-norm before use
  SyntheticSpec synth;     // synthetic source only

  // [model]
  TrainConfig train;       // train.lambda is overridden per grid entry

  // [sweep]
  std::vector<double> lambdas{0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
  int reps = 50;
  double test_frac = 0.2;
  double train_frac = 0.75;
  int probes = 0;
  std::uint64_t seed = 0;

  // [output]
  std::string out_dir = "out";
};

// Parses the config file at `path`. Throws ConfigError with the offending
// line for syntax problems, unknown keys, or out-of-range values.
ExperimentConfig parse_config(const std::string& path);

// Parses config text directly (the file loader calls this).
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace stablefair
