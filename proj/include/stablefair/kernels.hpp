#pragma once

#include <Eigen/Core>
#include <vector>

namespace stablefair {

enum class KernelKind { Linear, GaussianRBF, Multiquadric, InverseMultiquadric };

// Kernel identifier plus the shape constant used by the multiquadric family.
//   Linear               k(x,y) = <x,y>
//   GaussianRBF          k(x,y) = exp(-||x-y||^2)
//   Multiquadric         k(x,y) = (||x-y||^2 + c^2)^(1/2)
//   InverseMultiquadric  k(x,y) = (||x-y||^2 + c^2)^(-1/2)
struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  double c = 1.0;  // shape constant; must be > 0 for the multiquadric family
};

// True when the kernel kind reads KernelSpec::c.
bool uses_shape_constant(KernelKind kind);

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y);

// Upper bound kappa^2 >= k(x,x): max ||x||^2 over `points` for the linear
// kernel (which is why the point set is required there), 1 for the RBF, c for
// the multiquadric and 1/c for the inverse multiquadric.
double kappa_sq(const KernelSpec& spec, const std::vector<Eigen::VectorXd>& points);

Eigen::MatrixXd gram_matrix(const KernelSpec& spec,
                            const std::vector<Eigen::VectorXd>& points);

// Classifier in kernel-expansion form: f(x) = sum_i alpha[i] * k(anchor[i], x).
struct KernelClassifier {
  Eigen::VectorXd alpha;
  std::vector<Eigen::VectorXd> anchors;
  KernelSpec kernel;
};

double evaluate(const KernelClassifier& f, const Eigen::VectorXd& x);

// alpha^T K alpha over the classifier's anchors. Round-off in [-1e-10, 0) is
// clamped to zero; anything more negative signals a broken kernel and throws.
double rkhs_norm_sq(const KernelClassifier& f);

// ||f - g||_k for two expansions over the same kernel, computed as the Gram
// quadratic form of [alpha_f, -alpha_g] over the concatenated anchor lists.
double rkhs_distance(const KernelClassifier& f, const KernelClassifier& g);

}  // namespace stablefair
