#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bubblesheet/profiles.hpp"
#include "bubblesheet/spectral.hpp"

namespace bubblesheet::foliation {

struct UnsupportedKind : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutsideDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GeometryMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LiftKind { GammaA, GammaTildeB, Cylinder };

struct FoliationConfig {
  double delta = 0.1;  // collar height of Omega
  double l1 = 5.0;     // inner radius of Omega (L0 + 1)
  int probe_radial = 64;
  int probe_angular = 32;
};

using Vec4 = std::array<double, 4>;

struct LeafPoint {
  Vec4 position{};
  Vec4 normal{};  // outward unit normal, |nu| = 1 to 1e-12
};

/// A doubly-rotationally symmetric hypersurface in R^4 obtained by
/// shifting the R^3 profile by one unit in the radial direction:
/// points (r cos t, r sin t, x3, x4) with (r-1, x3, x4) on the profile
/// surface of revolution.
class FoliationLeaf {
 public:
  FoliationLeaf(profiles::RadialProfile profile, FoliationConfig cfg);  // Ads or Km
  static FoliationLeaf cylinder(FoliationConfig cfg);                   // u = sqrt(2) sentinel

  LiftKind kind() const { return kind_; }
  const FoliationConfig& config() const { return cfg_; }
  double parameter() const { return profile_.parameter; }
  double profile_residual() const { return profile_.residual_bound; }

  /// Profile height u(s) at axial coordinate s = r - 1 (phi-symmetric).
  double height(double s) const;
  double height_slope(double s) const;

  /// s-range on which the leaf evaluates reliably (tip region excluded
  /// for Ads where finite differences degenerate).
  std::pair<double, double> trusted_range() const;

  /// Point of the leaf at cylinder radius r, plane angle t, profile angle phi.
  LeafPoint evaluate(double r, double t, double phi) const;

  /// Membership in Omega = {x3^2+x4^2 <= 2+delta, x1^2+x2^2 >= L1^2}.
  bool point_in_omega(const Vec4& p) const;

 private:
  LiftKind kind_;
  profiles::RadialProfile profile_;
  CubicInterpolant interp_;
  FoliationConfig cfg_;
};

FoliationLeaf lift_leaf(const profiles::RadialProfile& profile, const FoliationConfig& cfg = {});

/// H_Gamma - (1/2) <x, nu_fol> at a leaf point, through the rotation
/// identity H_Gamma = H_Sigma + (1/r) <e1, nu>. The profile curvature is
/// recomputed from the stored nodes by 5-point stencils, so the result
/// certifies the solver output rather than restating it. Negative values
/// are inward-favorable.
double divergence_defect(const FoliationLeaf& leaf, const Vec4& point);

/// sup over profile samples of |H_Sigma - (1/2)<x,nu>| e^{-|x|^2/4}
/// (the R^3 shrinker calibration residual, pre-lift).
double calibration_residual(const profiles::RadialProfile& profile);

struct CheckWitness {
  std::string what;
  double r = 0.0;
  double value = 0.0;
};

struct FoliationReport {
  std::string check;
  bool pass = true;
  std::vector<CheckWitness> witnesses;
  std::string to_json() const;
};

/// Pairwise disjointness and radial ordering of same-kind leaves on a
/// deterministic probe grid. Coincident leaves are reported, not failed.
FoliationReport verify_foliation_order(const std::vector<FoliationLeaf>& leaves);

/// Sign condition of the foliation divergence on a probe grid inside
/// Omega: defect <= tol on Gamma_a leaves, >= -tol on Gamma~_b leaves.
FoliationReport verify_defect_sign(const FoliationLeaf& leaf, double tol);

/// Inner-barrier contact check: given renormalized-flow snapshots whose
/// enclosed region contains the Gamma_a leaf initially, report the first
/// snapshot (if any) whose surface crosses into the leaf's interior on
/// the probe set r >= L1.
FoliationReport barrier_contact_check(const std::vector<spectral::CylinderGraph>& snapshots,
                                      const FoliationLeaf& leaf);

/// CSV point cloud (x1,x2,x3,x4,nu1..nu4) on the probe grid.
std::string leaf_to_csv(const FoliationLeaf& leaf);

}  // namespace bubblesheet::foliation
