#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bubblesheet/gauss_hermite.hpp"

namespace bubblesheet::spectral {

struct GridMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GridTooCoarse : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAGraph : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NewtonStalled : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// sqrt(2*pi/e): the Gaussian-weighted volume <1,1> of the cylinder
/// R^2 x S^1(sqrt 2) under (4 pi)^{-3/2} e^{-|x|^2/4}.
double gaussian_unit_norm_sq();

/// Quintic-smoothstep cutoff: 1 for |s| <= 1/2, 0 for |s| >= 1, C^2 between.
double cutoff_chi(double s);

/// Tensor collocation grid over the cylinder: Gauss–Hermite nodes
/// (weight e^{-x^2/4}) in x1 and x2, uniform theta in [0, 2pi).
/// Field storage is values[(i*nx + j)*ntheta + k].
class CylinderGrid {
 public:
  CylinderGrid(int gh_order, int theta_order);

  int nx() const { return nx_; }
  int ntheta() const { return ntheta_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * nx_ * ntheta_; }
  double x(int i) const { return rule_.nodes[i]; }
  double wx(int i) const { return rule_.weights[i]; }
  double theta(int k) const { return theta_[k]; }
  double max_abscissa() const { return rule_.nodes.back(); }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * nx_ + j) * ntheta_ + k;
  }

  /// Gaussian measure weight of one grid cell, including the
  /// (4 pi)^{-3/2} e^{-1/2} sqrt(2) dtheta normalization of H.
  double cell_weight(int i, int j) const { return wnorm_ * rule_.weights[i] * rule_.weights[j]; }

  /// Hermite-transform matrices: vand(i,m) = p_m(x_i)/sqrt(|p_m|^2).
  const Eigen::MatrixXd& hermite_vandermonde() const { return vand_; }
  const Eigen::MatrixXd& hermite_analysis() const { return analysis_; }  // = diag(w) * vand

 private:
  int nx_;
  int ntheta_;
  GaussHermiteRule rule_;
  std::vector<double> theta_;
  double wnorm_;
  Eigen::MatrixXd vand_, analysis_;
};

std::shared_ptr<const CylinderGrid> make_grid(int gh_order, int theta_order);

/// A scalar graph u(x1,x2,theta) over Gamma within B(2 rho). Nodes with
/// |x1| or |x2| beyond 2 rho are masked (held at zero).
struct CylinderGraph {
  std::shared_ptr<const CylinderGrid> grid;
  std::vector<double> values;
  double rho = 0.0;
  double tau = 0.0;

  bool axis_inside(int i) const { return std::abs(grid->x(i)) <= 2.0 * rho; }
  bool node_inside(int i, int j) const { return axis_inside(i) && axis_inside(j); }
};

CylinderGraph make_graph(std::shared_ptr<const CylinderGrid> grid, double rho, double tau = 0.0);

/// Build a graph from a pointwise function f(x1, x2, theta).
template <typename F>
CylinderGraph make_graph_from(std::shared_ptr<const CylinderGrid> grid, double rho, F&& f,
                              double tau = 0.0) {
  CylinderGraph g = make_graph(grid, rho, tau);
  for (int i = 0; i < grid->nx(); ++i)
    for (int j = 0; j < grid->nx(); ++j)
      for (int k = 0; k < grid->ntheta(); ++k)
        if (g.node_inside(i, j))
          g.values[grid->index(i, j, k)] = f(grid->x(i), grid->x(j), grid->theta(k));
  return g;
}

/// Hermite x Fourier coefficient representation. Trig layout per theta
/// frequency q: cos-part [0..ntheta/2], sin-part [1..ntheta/2-1].
class SpectralCoefficients {
 public:
  SpectralCoefficients() = default;
  SpectralCoefficients(std::shared_ptr<const CylinderGrid> grid);

  double& cosc(int m1, int m2, int q);
  double& sinc(int m1, int m2, int q);
  double cosc(int m1, int m2, int q) const;
  double sinc(int m1, int m2, int q) const;

  /// Multiply every coefficient by g(lambda) where
  /// lambda = 1 - (m1+m2)/2 - q^2/2 is the L-eigenvalue of its basis mode.
  template <typename G>
  void scale_by_eigenvalue(G&& g) {
    const int nx = grid_->nx(), nq = grid_->ntheta() / 2;
    for (int m1 = 0; m1 < nx; ++m1)
      for (int m2 = 0; m2 < nx; ++m2)
        for (int q = 0; q <= nq; ++q) {
          const double lam = 1.0 - 0.5 * (m1 + m2) - 0.5 * q * q;
          cosc(m1, m2, q) *= g(lam);
          if (q >= 1 && q < nq) sinc(m1, m2, q) *= g(lam);
        }
  }

  /// Pointwise evaluation of the spectral interpolant. Coefficients with
  /// |c| below clamp_rel * max|c| are treated as zero: high-degree
  /// Hermite modes amplify roundoff catastrophically at the grid edge.
  double eval(double x1, double x2, double theta, double clamp_rel = 1e-13) const;

  const std::shared_ptr<const CylinderGrid>& grid() const { return grid_; }

 private:
  std::shared_ptr<const CylinderGrid> grid_;
  std::vector<double> cos_, sin_;
};

SpectralCoefficients to_coefficients(const CylinderGraph& g);
CylinderGraph from_coefficients(const SpectralCoefficients& c, double rho, double tau = 0.0);

/// Weighted inner product <f,g>_H = int_Gamma (4pi)^{-3/2} e^{-|x|^2/4} f g.
double gaussian_inner_product(const CylinderGraph& f, const CylinderGraph& g);
double gaussian_norm_sq(const CylinderGraph& f);

/// L f = Delta f - (1/2) <x^tan, grad f> + f via the Hermite-Fourier
/// diagonalization (exact on polynomial x trigonometric fields).
CylinderGraph apply_linearized_operator(const CylinderGraph& g);

/// u -> u * chi(r / rho): plateau r <= rho/2, support r <= rho.
CylinderGraph truncate_graph(const CylinderGraph& g);

/// The twelve low modes of L. Unstable: {1, x1, x2, cos, sin} with
/// eigenvalues {1, 1/2, 1/2, 1/2, 1/2}; neutral: {x1 cos, x1 sin,
/// x2 cos, x2 sin, x1^2-2, x2^2-2, x1 x2} with eigenvalue 0.
enum class UnstableMode { One = 0, X1, X2, CosTheta, SinTheta };
enum class NeutralMode { X1Cos = 0, X1Sin, X2Cos, X2Sin, X1Sq, X2Sq, X1X2 };

double unstable_mode_value(UnstableMode m, double x1, double x2, double theta);
double neutral_mode_value(NeutralMode m, double x1, double x2, double theta);
double unstable_mode_norm_sq(UnstableMode m);
double neutral_mode_norm_sq(NeutralMode m);

/// Spectral content of a graph: raw coefficients (paper convention,
/// P+ u = a0*1 + a1*x1 + ... ) plus the mode energies U+ = |P+ u|^2 etc.
struct ModeDecomposition {
  std::array<double, 5> unstable{};  // on {1, x1, x2, cos, sin}
  std::array<double, 7> neutral{};   // on {x1cos, x1sin, x2cos, x2sin, x1^2-2, x2^2-2, x1x2}
  double u_plus = 0.0;
  double u_zero = 0.0;
  double u_minus = 0.0;

  double normalized_unstable(UnstableMode m) const;
  double normalized_neutral(NeutralMode m) const;
  double total() const { return u_plus + u_zero + u_minus; }
};

ModeDecomposition spectral_project(const CylinderGraph& g);

/// Rebuild P+ u + P0 u from a decomposition (for idempotence checks).
CylinderGraph reconstruct_low_modes(const ModeDecomposition& d,
                                    std::shared_ptr<const CylinderGrid> grid, double rho);

/// Rotation bookkeeping: S = exp(A) with A in the 4-parameter family
/// {A in o(4) : A_12 = A_34 = 0}, generators G_13, G_14, G_23, G_24.
struct RotationState {
  Eigen::Matrix4d S = Eigen::Matrix4d::Identity();
  std::array<double, 4> generator{};  // coefficients on (G13, G14, G23, G24)

  Eigen::Matrix4d generator_matrix() const;
};

Eigen::Matrix4d rotation_generator(int which);  // 0..3 -> G13, G14, G23, G24
Eigen::Matrix4d exp_so4(const Eigen::Matrix4d& a);

/// int_Gamma <A x, nu_Gamma> u_hat e^{-|x|^2/4}. On the cylinder
/// <Ax, nu> = -(A13 x1 + A23 x2) cos - (A14 x1 + A24 x2) sin; in-plane
/// components A12, A34 pair to zero identically. Orientation: pairing of
/// G13 against x1 cos(theta) is negative.
double rotation_pairing(const Eigen::Matrix4d& a, const CylinderGraph& truncated);

/// Graph of the rotated surface S(graph(u)) over Gamma; throws NotAGraph
/// when the ray-surface intersection fails to converge.
CylinderGraph regraph_rotated(const CylinderGraph& g, const Eigen::Matrix4d& s);

struct FineTuneOptions {
  int max_iter = 50;
  double tol = 1e-10;      // on the four pairings, scaled by the Gram diag
  double damping = 1.0;
};

/// Damped Newton on the 4 generator coordinates so that all four
/// rotation pairings of the truncated regraph vanish.
std::pair<RotationState, CylinderGraph> fine_tune_rotation(const CylinderGraph& g,
                                                           const FineTuneOptions& opts = {});

/// C^2 finite-difference admissibility proxy for the C^4 smallness
/// condition: sup of |u|, |grad u|, |D^2 u| over the unmasked region.
struct AdmissibilityReport {
  double sup_u = 0.0;
  double sup_grad = 0.0;
  double sup_hess = 0.0;
  bool admissible = false;  // all three <= rho^{-2}
};
AdmissibilityReport admissibility_proxy(const CylinderGraph& g);

/// Validation for user-supplied radius schedules: -rho <= rho' <= 0.
bool valid_radius_schedule(const std::vector<double>& tau, const std::vector<double>& rho);

std::string graph_to_csv(const CylinderGraph& g);

}  // namespace bubblesheet::spectral
