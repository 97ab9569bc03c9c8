#include "stablefair/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "stablefair/common.hpp"

namespace stablefair {

Dataset::Dataset(std::vector<Sample> samples, int dim, int num_groups)
    : samples_(std::move(samples)), dim_(dim), num_groups_(num_groups) {
  if (dim_ < 1) throw std::invalid_argument("Dataset: dim must be >= 1");
  if (num_groups_ < 1) throw std::invalid_argument("Dataset: num_groups must be >= 1");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    if (s.x.size() != dim_) {
      throw std::invalid_argument("Dataset: sample " + std::to_string(i) +
                                  " has dimension " + std::to_string(s.x.size()) +
                                  ", expected " + std::to_string(dim_));
    }
    if (!s.x.allFinite()) {
      throw std::invalid_argument("Dataset: sample " + std::to_string(i) +
                                  " has non-finite features");
    }
    if (s.y != 1 && s.y != -1) {
      throw std::invalid_argument("Dataset: sample " + std::to_string(i) +
                                  " has label outside {-1,+1}");
    }
    if (s.z < 0 || s.z >= num_groups_) {
      throw std::invalid_argument("Dataset: sample " + std::to_string(i) +
                                  " has group index outside [0, num_groups)");
    }
  }
}

std::vector<Eigen::VectorXd> Dataset::feature_vectors() const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.x);
  return out;
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.y);
  return out;
}

std::vector<int> Dataset::groups() const {
  std::vector<int> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.z);
  return out;
}

Dataset swap_sample(const Dataset& data, std::size_t i, Sample replacement) {
  if (i >= data.size()) {
    throw std::out_of_range("swap_sample: index " + std::to_string(i) +
                            " out of range for " + std::to_string(data.size()) +
                            " samples");
  }
  std::vector<Sample> samples = data.samples();
  samples[i] = std::move(replacement);
  // Re-validates everything, including the replacement.
  return Dataset(std::move(samples), data.dim(), data.num_groups());
}

namespace {

Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& rows) {
  std::vector<Sample> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(data[r]);
  return Dataset(std::move(out), data.dim(), data.num_groups());
}

// First `count` entries of a seeded shuffle of {0..n-1}, in ascending order.
std::vector<std::size_t> draw_without_replacement(std::vector<std::size_t> pool,
                                                  std::size_t count,
                                                  std::mt19937_64& rng) {
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& data, double test_frac,
                                  double train_frac, std::uint64_t seed) {
  if (!(test_frac > 0.0 && test_frac < 1.0)) {
    throw std::invalid_argument("split: test_frac must lie in (0, 1)");
  }
  if (!(train_frac > 0.0 && train_frac <= 1.0)) {
    throw std::invalid_argument("split: train_frac must lie in (0, 1]");
  }
  const std::size_t n = data.size();
  const auto n_test = static_cast<std::size_t>(test_frac * static_cast<double>(n));
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<std::size_t> test_rows(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> rest(all.begin() + static_cast<std::ptrdiff_t>(n_test), all.end());
  std::sort(test_rows.begin(), test_rows.end());

  const auto n_train =
      static_cast<std::size_t>(train_frac * static_cast<double>(rest.size()));
  if (n_test == 0 || n_train == 0) {
    throw DataError("split: requested fractions leave one side empty");
  }
  std::vector<std::size_t> train_rows = draw_without_replacement(std::move(rest), n_train, rng);
  return {take_rows(data, train_rows), take_rows(data, test_rows)};
}

Dataset sample_fraction(const Dataset& data, double frac, std::uint64_t seed) {
  if (!(frac > 0.0 && frac <= 1.0)) {
    throw std::invalid_argument("sample_fraction: frac must lie in (0, 1]");
  }
  const auto count = static_cast<std::size_t>(frac * static_cast<double>(data.size()));
  if (count == 0) throw DataError("sample_fraction: subsample is empty");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return take_rows(data, draw_without_replacement(std::move(all), count, rng));
}

double score(const LinearClassifier& f, const Eigen::VectorXd& x) {
  if (f.weights.size() != x.size()) {
    throw std::invalid_argument("score: weight/feature dimension mismatch");
  }
  return f.weights.dot(x);
}

double score(const Classifier& f, const Eigen::VectorXd& x) {
  if (const auto* k = std::get_if<KernelClassifier>(&f)) return evaluate(*k, x);
  return score(std::get<LinearClassifier>(f), x);
}

int predict_score(double s) {
  if (!std::isfinite(s)) throw std::domain_error("predict: non-finite score");
  return s >= 0.0 ? 1 : -1;
}

int predict(const Classifier& f, const Eigen::VectorXd& x) {
  return predict_score(score(f, x));
}

double rkhs_norm_sq(const LinearClassifier& f) { return f.weights.squaredNorm(); }

double rkhs_norm_sq(const Classifier& f) {
  if (const auto* k = std::get_if<KernelClassifier>(&f)) return rkhs_norm_sq(*k);
  return rkhs_norm_sq(std::get<LinearClassifier>(f));
}

double rkhs_distance(const Classifier& f, const Classifier& g) {
  if (const auto* kf = std::get_if<KernelClassifier>(&f)) {
    const auto* kg = std::get_if<KernelClassifier>(&g);
    if (!kg) throw std::invalid_argument("rkhs_distance: mixed classifier kinds");
    return rkhs_distance(*kf, *kg);
  }
  const auto& lf = std::get<LinearClassifier>(f);
  const auto* lg = std::get_if<LinearClassifier>(&g);
  if (!lg) throw std::invalid_argument("rkhs_distance: mixed classifier kinds");
  if (lf.weights.size() != lg->weights.size()) {
    throw std::invalid_argument("rkhs_distance: weight dimension mismatch");
  }
  return (lf.weights - lg->weights).norm();
}

}  // namespace stablefair
