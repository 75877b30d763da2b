#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bubblesheet/numerics.hpp"

namespace bubblesheet::profiles {

enum class ProfileKind { Ads, Km, Bowl };

struct ShootingDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParameterTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SlopeNotReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooFewNodes : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A rotationally symmetric profile curve sampled along its axis.
///
/// Ads: concave, positive on [0,a), u(a)=0 (compact shrinker piece).
/// Km:  convex, u'(x) increasing to the asymptotic slope b.
/// Bowl: monotone translator profile, u(0)=0, u'(r)/r -> 1/speed.
struct RadialProfile {
  ProfileKind kind = ProfileKind::Ads;
  double parameter = 0.0;  // a (Ads), b (Km), speed (Bowl)
  std::vector<double> nodes;
  std::vector<double> values;
  std::vector<double> slopes;
  double residual_bound = 0.0;

  CubicInterpolant interpolant() const {
    return CubicInterpolant(nodes, values, slopes);
  }
};

struct ProfileConfig {
  double l0 = 4.0;            // minimal Ads parameter
  double tip_stop = 1e-4;     // Ads: integration stops at u = tip_stop
  int uniform_nodes = 512;    // merged uniform output grid
  double max_step = 0.05;
};

/// Shrinker ODE right-hand side u'' = (1+u'^2)(1/u - (u - x u')/2);
/// the cylinder u = sqrt(2) solves it identically.
double shrinker_rhs(double x, double u, double up);

/// Translator ODE right-hand side with velocity c: u'' = (1+u'^2)(c - u'/r).
double translator_rhs(double r, double u, double up, double c);

/// Compact shrinker profile with tip at x=a. Integrated backward from
/// the tip using the cap series u^2 = (8/a)s(1 + alpha s), s = a-x,
/// alpha = -a/16 - 1/(4a); the final node (a, 0) is placed by linear
/// extrapolation whose error is folded into residual_bound.
RadialProfile solve_ads_profile(double a, double tol, const ProfileConfig& cfg = {});

/// Asymptotically conical shrinker profile with slope b, integrated
/// backward from x_max with the far-field series
/// u = b x + 1/(b x) + c3/x^3, c3 = -1/(2 b^3) - 1/(b (1+b^2)).
RadialProfile solve_km_profile(double b, double x_max, double tol, const ProfileConfig& cfg = {});

/// Rotationally symmetric translator profile on [0, r_max] for the
/// velocity 1/speed (far-field slope ratio u'(r)/r -> 1/speed).
RadialProfile solve_bowl_profile(double speed, double r_max, double tol,
                                 const ProfileConfig& cfg = {});

/// Scaled sup-norm ODE residual at interior nodes from 5-point centered
/// stencils on the stored values: |u''_fd - rhs| / (1 + |u''_fd| + |rhs|).
double ode_residual(const RadialProfile& profile);

/// CSV round trip (columns kind,parameter,x,u,du,residual), exact at 17
/// significant digits.
std::string profile_to_csv(const RadialProfile& profile);
RadialProfile profile_from_csv(const std::string& csv);

}  // namespace bubblesheet::profiles
