#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bubblesheet/profiles.hpp"
#include "bubblesheet/spectral.hpp"

namespace bubblesheet::flowsim {

struct StepUnstable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutOfGraphRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NeverAdmissible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientSpan : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ScaleRangeExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Scheme { Linearized, FullGraph };

struct SpaceTimePoint {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0, x4 = 0.0;
  double t = 0.0;
};

enum class ReferenceKind { RoundCylinder, CylinderTimeshift, BowlTimesR };

/// Parameters of an exactly known reference flow; the renormalized graph
/// about any admissible center is synthesized in closed form (plus one
/// profile solve for the bowl).
struct ReferenceModel {
  ReferenceKind kind = ReferenceKind::RoundCylinder;
  double timeshift = 0.0;          // K: extinction-time offset
  double speed = 1.0;              // true translation speed of the 2d bowl
  double dir1 = 0.0, dir2 = 1.0;   // unit translation direction in the x1x2-plane
};

/// Time-ordered renormalized-flow snapshots about one center.
struct FlowTrajectory {
  std::vector<spectral::CylinderGraph> snapshots;
  Scheme scheme = Scheme::Linearized;
  SpaceTimePoint center;
  std::function<double(double)> radius_schedule;  // tau -> rho
  std::optional<ReferenceModel> model;            // set for synthesized trajectories
};

/// One time step of the rescaled flow. Linearized: exact exponential of
/// the Hermite–Fourier diagonalization of L. FullGraph: Lawson–Euler,
/// u <- e^{L dtau}(u + dtau N(u)), with N the discrete graph
/// nonlinearity (mean curvature and tilt of the normal graph).
spectral::CylinderGraph step_flow(const spectral::CylinderGraph& g, double dtau, Scheme scheme);

/// Pointwise full rescaled-flow velocity W(H - <x,nu>/2)-form for a
/// graph over the cylinder; exposed for consistency tests.
std::vector<double> full_graph_velocity(const spectral::CylinderGraph& g);

class BowlGeometry {
 public:
  /// Solve (and cache) the translator profile for true speed v; the far
  /// field beyond the solved radius uses f = c rho^2/2 - ln(rho)/c + kappa
  /// with kappa fitted on the outer quarter of the solved profile.
  explicit BowlGeometry(double speed, double r_solved = 256.0, double tol = 1e-10);

  double height(double radius) const;        // f(rho), graph height above the tip
  double radius_at(double height) const;     // f^{-1}, Newton on the two branches
  double speed() const { return speed_; }
  double kappa() const { return kappa_; }

 private:
  double speed_;
  double kappa_;
  double r_solved_;
  CubicInterpolant interp_;
};

struct SynthesisRequest {
  ReferenceModel model;
  SpaceTimePoint center;  // t is the t0 of the renormalization
  double tau = -10.0;
  double rho = 10.0;
};

/// Renormalized graph of the exact reference flow at rescaled time tau.
spectral::CylinderGraph synthesize_reference_flow(const SynthesisRequest& req,
                                                  std::shared_ptr<const spectral::CylinderGrid> grid,
                                                  const BowlGeometry* bowl = nullptr);

/// Convenience: a whole trajectory of synthesized snapshots on a uniform
/// tau grid with schedule rho(tau).
FlowTrajectory synthesize_trajectory(const ReferenceModel& model, const SpaceTimePoint& center,
                                     double tau_start, double tau_end, int count,
                                     const std::function<double(double)>& rho_of_tau,
                                     std::shared_ptr<const spectral::CylinderGrid> grid);

struct GraphicalRadiusEstimate {
  double rho = 0.0;                    // largest admissible L (dyadically refined)
  bool meets_improved_schedule = false;  // rho >= e^{-tau/9}
};

/// Largest L (dyadic scan, bisection-refined) with the C^2 admissibility
/// proxy sup(|u|,|Du|,|D^2u|) <= L^{-2} on B(2L).
GraphicalRadiusEstimate estimate_graphical_radius(const spectral::CylinderGraph& g);

struct ExpansionEstimate {
  std::array<double, 4> abar{};        // abar_1..abar_4 for this center
  std::array<double, 4> confidence{};  // extrapolation half-widths
  std::array<double, 2> universal{};   // (a1, a2) after recentering rules
  double a3_universal = 0.0;           // abar_3 + x0^3
  double a4_universal = 0.0;
  double a0_decay_exponent = 0.0;      // log-linear fit of |a0(tau)|
  double a0_decay_sigma = 0.0;
  std::vector<double> taus;
  std::vector<std::array<double, 5>> coefficients;  // raw a0..a4 per snapshot
};

/// Per-snapshot unstable coefficients, extrapolation of e^{-tau/2} a_i
/// (Richardson on the last three decade-spaced samples), and the
/// recentering rules a3 = abar_3 + x0^3, a4 = abar_4 + x0^4.
ExpansionEstimate extract_expansion_coefficients(const FlowTrajectory& traj);

struct BubbleSheetScale {
  bool exactly_cylindrical = false;
  int j = 0;        // dyadic index: first passing scale with all larger passing
  double z = 0.0;   // 2^j
  std::vector<std::pair<int, bool>> scan;  // (j, eps-cylindrical?)
};

struct ScaleSearchOptions {
  double eps = 0.1;
  int j_min = -6;
  int j_max = 14;
};

/// Dyadic search for the bubble-sheet scale around X: the flow is probed
/// at scales r_j = 2^j over the time window [-2,-1] with a C^2-style
/// closeness proxy (position, normal angle, curvature against the round
/// shrinking bubble-sheet cylinder).
BubbleSheetScale bubble_sheet_scale(const FlowTrajectory& traj, const SpaceTimePoint& x,
                                    const ScaleSearchOptions& opts = {});

/// Mode-energy/coefficient time series CSV: tau,U_plus,U_zero,U_minus,a0..a4.
std::string energy_series_csv(const FlowTrajectory& traj);

}  // namespace bubblesheet::flowsim
