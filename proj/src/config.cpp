#include "stablefair/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stablefair/common.hpp"

namespace stablefair {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value) {
  std::string t = value;
  if (!t.empty() && t.front() == '+') t.erase(t.begin());
  double out{};
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
    throw ConfigError("config: key '" + key + "': '" + value + "' is not a number");
  }
  return out;
}

long long to_int(const std::string& key, const std::string& value) {
  long long out{};
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("config: key '" + key + "': '" + value + "' is not an integer");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: key '" + key + "': '" + value + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

LossKind parse_loss(const std::string& value) {
  if (value == "hinge") return LossKind::Hinge;
  if (value == "squared") return LossKind::Squared;
  if (value == "logistic") return LossKind::Logistic;
  if (value == "zero_one") return LossKind::ZeroOne;
  throw ConfigError("config: unknown loss '" + value + "'");
}

KernelKind parse_kernel(const std::string& value) {
  if (value == "linear") return KernelKind::Linear;
  if (value == "rbf") return KernelKind::GaussianRBF;
  if (value == "multiquadric") return KernelKind::Multiquadric;
  if (value == "inverse_multiquadric") return KernelKind::InverseMultiquadric;
  throw ConfigError("config: unknown kernel '" + value + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  std::size_t line_no = 0;
  bool lambdas_set = false;

  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config: line " + std::to_string(line_no) +
                          ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "data" && section != "model" && section != "sweep" &&
          section != "output") {
        throw ConfigError("config: line " + std::to_string(line_no) +
                          ": unknown section '" + section + "'");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config: line " + std::to_string(line_no) +
                        ": empty key or value");
    }
    if (section.empty()) {
      throw ConfigError("config: line " + std::to_string(line_no) +
                        ": key '" + key + "' appears before any section");
    }

    if (section == "data") {
      if (key == "source") {
        if (value == "csv") cfg.source = ExperimentConfig::Source::Csv;
        else if (value == "synthetic") cfg.source = ExperimentConfig::Source::Synthetic;
        else throw ConfigError("config: unknown data source '" + value + "'");
      } else if (key == "path") cfg.path = value;
      else if (key == "features") cfg.schema.feature_columns = split_list(value);
      else if (key == "sensitive") cfg.schema.sensitive_column = value;
      else if (key == "label") cfg.schema.label_column = value;
      else if (key == "normalize") cfg.normalize = to_bool(key, value);
      else if (key == "n") cfg.synth.n = static_cast<int>(to_int(key, value));
      else if (key == "dim") cfg.synth.dim = static_cast<int>(to_int(key, value));
      else if (key == "minority_frac") cfg.synth.minority_frac = to_double(key, value);
      else if (key == "pos_rate0") cfg.synth.pos_rate0 = to_double(key, value);
      else if (key == "pos_rate1") cfg.synth.pos_rate1 = to_double(key, value);
      else if (key == "separation") cfg.synth.separation = to_double(key, value);
      else if (key == "group_shift") cfg.synth.group_shift = to_double(key, value);
      else if (key == "noise") cfg.synth.noise = to_double(key, value);
      else throw ConfigError("config: unknown key '" + key + "' in [data]");
    } else if (section == "model") {
      if (key == "loss") cfg.train.loss.kind = parse_loss(value);
      else if (key == "score_bound") cfg.train.loss.score_bound = to_double(key, value);
      else if (key == "kernel") cfg.train.kernel.kind = parse_kernel(value);
      else if (key == "kernel_c") cfg.train.kernel.c = to_double(key, value);
      else if (key == "mode") {
        if (value == "constrained") cfg.train.mode = SolveMode::Constrained;
        else if (value == "penalty") cfg.train.mode = SolveMode::Penalty;
        else throw ConfigError("config: unknown mode '" + value + "'");
      } else if (key == "constraint") {
        if (value == "covariance") cfg.train.fairness.kind = FairnessKind::CovarianceParity;
        else if (value == "none") cfg.train.fairness.kind = FairnessKind::None;
        else throw ConfigError("config: unknown constraint '" + value + "'");
      } else if (key == "threshold") cfg.train.fairness.threshold = to_double(key, value);
      else if (key == "mu") cfg.train.fairness.mu = to_double(key, value);
      else if (key == "max_iters") cfg.train.max_iters = static_cast<int>(to_int(key, value));
      else if (key == "step_size") cfg.train.step_size = to_double(key, value);
      else if (key == "tol") cfg.train.tol = to_double(key, value);
      else if (key == "penalty_growth") cfg.train.penalty_growth = to_double(key, value);
      else throw ConfigError("config: unknown key '" + key + "' in [model]");
    } else if (section == "sweep") {
      if (key == "lambdas") {
        cfg.lambdas.clear();
        for (const auto& item : split_list(value)) {
          cfg.lambdas.push_back(to_double(key, item));
        }
        lambdas_set = true;
      } else if (key == "reps") cfg.reps = static_cast<int>(to_int(key, value));
      else if (key == "test_frac") cfg.test_frac = to_double(key, value);
      else if (key == "train_frac") cfg.train_frac = to_double(key, value);
      else if (key == "probes") cfg.probes = static_cast<int>(to_int(key, value));
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
      else throw ConfigError("config: unknown key '" + key + "' in [sweep]");
    } else {  // output
      if (key == "dir") cfg.out_dir = value;
      else throw ConfigError("config: unknown key '" + key + "' in [output]");
    }
  }

  // Cross-field validation that does not depend on the data itself.
  if (cfg.source == ExperimentConfig::Source::Csv) {
    if (cfg.path.empty()) throw ConfigError("config: csv source needs 'path'");
    if (cfg.schema.feature_columns.empty()) {
      throw ConfigError("config: csv source needs 'features'");
    }
  }
  if (lambdas_set && cfg.lambdas.empty()) {
    throw ConfigError("config: 'lambdas' must list at least one value");
  }
  for (double l : cfg.lambdas) {
    if (l < 0.0) throw ConfigError("config: lambdas must be >= 0");
  }
  if (cfg.reps < 1) throw ConfigError("config: reps must be >= 1");
  if (cfg.probes < 0) throw ConfigError("config: probes must be >= 0");
  if (!(cfg.test_frac > 0.0 && cfg.test_frac < 1.0)) {
    throw ConfigError("config: test_frac must lie in (0, 1)");
  }
  if (!(cfg.train_frac > 0.0 && cfg.train_frac <= 1.0)) {
    throw ConfigError("config: train_frac must lie in (0, 1]");
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace stablefair
