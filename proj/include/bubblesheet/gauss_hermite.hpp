#pragma once

#include <vector>

namespace bubblesheet {

/// Gauss–Hermite rule rescaled to the weight e^{-x^2/4} (Gaussian of
/// variance 2): integral f(x) e^{-x^2/4} dx = sum w_i f(x_i).
/// Nodes/weights come from Golub–Welsch on the monic-Hermite Jacobi
/// matrix; exact for polynomials of degree <= 2n-1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite_quarter_weight(int n);

/// Monic orthogonal polynomials p_k for the weight e^{-x^2/4}:
/// p_0 = 1, p_1 = x, p_{k+1} = x p_k - 2k p_{k-1}.
/// (p_2 = x^2-2, p_3 = x^3-6x, ...) They are eigenfunctions of the
/// drift operator f'' - (x/2) f' with eigenvalue -k/2.
double monic_hermite(int k, double x);

/// Squared weighted L2 norm: integral p_k^2 e^{-x^2/4} dx = k! 2^k 2 sqrt(pi).
double monic_hermite_norm_sq(int k);

}  // namespace bubblesheet
