#include "stablefair/synthetic.hpp"

#include <stdexcept>

namespace stablefair {

void validate(const SyntheticSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("synthetic: n must be >= 1");
  if (spec.dim < 1) throw std::invalid_argument("synthetic: dim must be >= 1");
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(spec.minority_frac) || !in_unit(spec.pos_rate0) || !in_unit(spec.pos_rate1)) {
    throw std::invalid_argument("synthetic: probabilities must lie in [0, 1]");
  }
  if (spec.noise < 0.0) throw std::invalid_argument("synthetic: noise must be >= 0");
}

Sample draw_sample(const SyntheticSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Sample s;
  s.z = unif(rng) < spec.minority_frac ? 1 : 0;
  const double pos_rate = s.z == 1 ? spec.pos_rate1 : spec.pos_rate0;
  s.y = unif(rng) < pos_rate ? 1 : -1;

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(spec.dim);
  mean[0] += s.y * spec.separation;
  if (spec.dim >= 2) mean[1] += s.z * spec.group_shift;

  // Rejection keeps the law a truncated Gaussian supported on the unit ball;
  // the deterministic fallback only fires for extreme parameter choices.
  for (int attempt = 0; attempt < 256; ++attempt) {
    Eigen::VectorXd x(spec.dim);
    for (int j = 0; j < spec.dim; ++j) x[j] = mean[j] + spec.noise * gauss(rng);
    if (x.norm() <= 1.0) {
      s.x = std::move(x);
      return s;
    }
  }
  s.x = mean.norm() > 0.0 ? Eigen::VectorXd(mean * (0.999 / mean.norm()))
                          : Eigen::VectorXd(mean);
  return s;
}

Dataset generate(const SyntheticSpec& spec, std::uint64_t seed) {
  validate(spec);
  std::mt19937_64 rng(seed);
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) samples.push_back(draw_sample(spec, rng));
  return Dataset(std::move(samples), spec.dim, 2);
}

}  // namespace stablefair
