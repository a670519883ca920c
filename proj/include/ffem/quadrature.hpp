#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace ffem {

/// Nodes and weights of a Gauss rule on the reference interval [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] int size() const { return static_cast<int>(nodes.size()); }
};

/**
 * Gauss-Jacobi rule for the weight (1 - y)^a (1 + y)^b on [-1, 1], computed
 * with the Golub-Welsch eigenvalue method on the monic three-term recurrence.
 * a = b = 0 gives Gauss-Legendre.
 */
inline GaussRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
  if (a <= -1.0 || b <= -1.0)
    throw std::domain_error("gauss_jacobi: exponents must exceed -1");

  const double ab = a + b;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
  diag(0) = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(beta);
  }

  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = eig.eigenvalues()(k);
    const double v0 = eig.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

inline GaussRule gauss_legendre(int n) {
  GaussRule rule = gauss_jacobi(n, 0.0, 0.0);
  // Symmetrize to remove eigen-solver noise.
  for (int k = 0; k < n / 2; ++k) {
    const double x = 0.5 * (rule.nodes[n - 1 - k] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[n - 1 - k] + rule.weights[k]);
    rule.nodes[k] = -x;
    rule.nodes[n - 1 - k] = x;
    rule.weights[k] = rule.weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/**
 * Rule for \int_0^l t^{-alpha} phi(t) dt, exact when phi is a polynomial of
 * degree <= 2n - 1. Built once per order and reused across evaluations.
 */
class WeakSingularRule {
 public:
  explicit WeakSingularRule(double alpha, int n = 24) : alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
      throw std::domain_error("WeakSingularRule: alpha must lie in [0, 1)");
    const GaussRule gj = gauss_jacobi(n, 0.0, -alpha);
    nodes_.resize(n);
    weights_.resize(n);
    const double scale = std::pow(2.0, alpha - 1.0);
    for (int k = 0; k < n; ++k) {
      nodes_[k] = 0.5 * (gj.nodes[k] + 1.0);
      weights_[k] = gj.weights[k] * scale;
    }
  }

  [[nodiscard]] double alpha() const { return alpha_; }

  template <class Fn>
  [[nodiscard]] double integrate(Fn&& phi, double length) const {
    if (length <= 0.0) return 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) sum += weights_[k] * phi(length * nodes_[k]);
    return std::pow(length, 1.0 - alpha_) * sum;
  }

 private:
  double alpha_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace ffem
