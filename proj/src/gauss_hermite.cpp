#include "bubblesheet/gauss_hermite.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bubblesheet {

GaussHermiteRule gauss_hermite_quarter_weight(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  // Standard weight e^{-s^2}: Jacobi off-diagonals sqrt(k/2). The
  // substitution x = 2s maps to weight e^{-x^2/4} with d x = 2 ds.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(k / 2.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_hermite: eigensolve failed");
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 2.0 * es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = 2.0 * mu0 * v0 * v0;
  }
  // enforce exact even symmetry of the rule
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double monic_hermite(int k, double x) {
  double pm = 1.0;
  if (k == 0) return pm;
  double p = x;
  for (int j = 1; j < k; ++j) {
    const double pn = x * p - 2.0 * j * pm;
    pm = p;
    p = pn;
  }
  return p;
}

double monic_hermite_norm_sq(int k) {
  double v = 2.0 * std::sqrt(std::numbers::pi);
  for (int j = 1; j <= k; ++j) v *= 2.0 * j;
  return v;
}

}  // namespace bubblesheet
