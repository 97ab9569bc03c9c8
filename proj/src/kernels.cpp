#include "stablefair/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stablefair {

namespace {

void check_dims(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("kernel_eval: dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
}

void check_shape_constant(const KernelSpec& spec) {
  if (uses_shape_constant(spec.kind) && !(spec.c > 0.0)) {
    throw std::invalid_argument("kernel: shape constant c must be > 0");
  }
}

// Clamps the tiny negative round-off a PSD quadratic form can produce.
double clamp_quadratic_form(double v) {
  if (v >= 0.0) return v;
  if (v >= -1e-10) return 0.0;
  throw std::domain_error("rkhs norm: quadratic form is negative (" +
                          std::to_string(v) + "); kernel is not PSD here");
}

}  // namespace

bool uses_shape_constant(KernelKind kind) {
  return kind == KernelKind::Multiquadric || kind == KernelKind::InverseMultiquadric;
}

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y) {
  check_dims(x, y);
  check_shape_constant(spec);
  switch (spec.kind) {
    case KernelKind::Linear:
      return x.dot(y);
    case KernelKind::GaussianRBF:
      return std::exp(-(x - y).squaredNorm());
    case KernelKind::Multiquadric:
      return std::sqrt((x - y).squaredNorm() + spec.c * spec.c);
    case KernelKind::InverseMultiquadric:
      return 1.0 / std::sqrt((x - y).squaredNorm() + spec.c * spec.c);
  }
  throw std::logic_error("kernel_eval: unknown kernel kind");
}

double kappa_sq(const KernelSpec& spec, const std::vector<Eigen::VectorXd>& points) {
  check_shape_constant(spec);
  switch (spec.kind) {
    case KernelKind::Linear: {
      if (points.empty()) {
        throw std::invalid_argument(
            "kappa_sq: the linear kernel needs a nonempty point set");
      }
      double best = 0.0;
      for (const auto& p : points) best = std::max(best, p.squaredNorm());
      return best;
    }
    case KernelKind::GaussianRBF:
      return 1.0;
    case KernelKind::Multiquadric:
      return spec.c;  // k(x,x) = sqrt(c^2) = c
    case KernelKind::InverseMultiquadric:
      return 1.0 / spec.c;
  }
  throw std::logic_error("kappa_sq: unknown kernel kind");
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec,
                            const std::vector<Eigen::VectorXd>& points) {
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = kernel_eval(spec, points[i], points[j]);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

double evaluate(const KernelClassifier& f, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(f.alpha.size()) != f.anchors.size()) {
    throw std::invalid_argument("evaluate: coefficient/anchor count mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < f.anchors.size(); ++i) {
    s += f.alpha[static_cast<Eigen::Index>(i)] * kernel_eval(f.kernel, f.anchors[i], x);
  }
  return s;
}

double rkhs_norm_sq(const KernelClassifier& f) {
  if (static_cast<std::size_t>(f.alpha.size()) != f.anchors.size()) {
    throw std::invalid_argument("rkhs_norm_sq: coefficient/anchor count mismatch");
  }
  if (f.anchors.empty()) return 0.0;
  const Eigen::MatrixXd K = gram_matrix(f.kernel, f.anchors);
  return clamp_quadratic_form(f.alpha.dot(K * f.alpha));
}

double rkhs_distance(const KernelClassifier& f, const KernelClassifier& g) {
  if (f.kernel.kind != g.kernel.kind ||
      (uses_shape_constant(f.kernel.kind) && f.kernel.c != g.kernel.c)) {
    throw std::invalid_argument("rkhs_distance: classifiers use different kernels");
  }
  std::vector<Eigen::VectorXd> anchors = f.anchors;
  anchors.insert(anchors.end(), g.anchors.begin(), g.anchors.end());
  Eigen::VectorXd coef(anchors.size());
  coef.head(f.alpha.size()) = f.alpha;
  coef.tail(g.alpha.size()) = -g.alpha;
  if (anchors.empty()) return 0.0;
  const Eigen::MatrixXd K = gram_matrix(f.kernel, anchors);
  return std::sqrt(clamp_quadratic_form(coef.dot(K * coef)));
}

}  // namespace stablefair
