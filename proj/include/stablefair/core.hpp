#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "stablefair/kernels.hpp"

namespace stablefair {

// One labelled observation: features x, sensitive group index z, label y in
// {-1, +1}.
struct Sample {
  Eigen::VectorXd x;
  int z = 0;
  int y = 1;
};

// Immutable ordered collection of samples with a declared feature dimension
// and a declared number of sensitive groups. Every sample is validated at
// construction: finite features of the right length, y in {-1,+1},
// 0 <= z < num_groups.
class Dataset {
 public:
  Dataset(std::vector<Sample> samples, int dim, int num_groups);

  std::size_t size() const { return samples_.size(); }
  int dim() const { return dim_; }
  int num_groups() const { return num_groups_; }
  const std::vector<Sample>& samples() const { return samples_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }

  // Copies of all feature vectors, in sample order.
  std::vector<Eigen::VectorXd> feature_vectors() const;
  std::vector<int> labels() const;
  std::vector<int> groups() const;

 private:
  std::vector<Sample> samples_;
  int dim_;
  int num_groups_;
};

// Copy of `data` with sample i replaced by `replacement` (the
// one-sample-perturbed training set used throughout the stability harness).
Dataset swap_sample(const Dataset& data, std::size_t i, Sample replacement);

// Splits into (train, test). The test side takes floor(test_frac * N)
// samples drawn without replacement; the train side takes
// floor(train_frac * remaining) uniformly from what is left. Both parts keep
// the original sample order. Deterministic given `seed`.
std::pair<Dataset, Dataset> split(const Dataset& data, double test_frac,
                                  double train_frac, std::uint64_t seed);

// Uniform subsample of floor(frac * N) samples, original order preserved.
Dataset sample_fraction(const Dataset& data, double frac, std::uint64_t seed);

// Classifier parameterized directly by a weight vector: f(x) = <weights, x>.
// Its RKHS norm under the linear kernel is ||weights||_2.
struct LinearClassifier {
  Eigen::VectorXd weights;
};

using Classifier = std::variant<KernelClassifier, LinearClassifier>;

double score(const LinearClassifier& f, const Eigen::VectorXd& x);
double score(const Classifier& f, const Eigen::VectorXd& x);

// Label for a raw score: +1 iff score >= 0 (ties go to +1). Rejects
// non-finite scores.
int predict_score(double s);
int predict(const Classifier& f, const Eigen::VectorXd& x);

double rkhs_norm_sq(const LinearClassifier& f);
double rkhs_norm_sq(const Classifier& f);

// ||f - g||_k; both classifiers must live in the same function space (same
// parameterization and, for kernel expansions, the same kernel).
double rkhs_distance(const Classifier& f, const Classifier& g);

}  // namespace stablefair
