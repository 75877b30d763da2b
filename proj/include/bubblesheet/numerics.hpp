#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bubblesheet {

/// Pairwise (tree) summation; fixed reduction order so results are
/// bit-stable regardless of caller context.
double pairwise_sum(std::span<const double> v);

/// One adaptive Dormand–Prince(4,5) integration of y' = f(x,y).
/// Steps are rejected on NaN or error estimates above per-step tolerance.
struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 1e-3;
  double max_step = 0.25;
  std::size_t max_steps = 2'000'000;
};

struct OdeNode {
  double x;
  std::vector<double> y;
  std::vector<double> dy;  // f(x,y), for Hermite dense output
};

using OdeRhs = std::function<void(double, std::span<const double>, std::span<double>)>;

/// Event: integration stops when `event` crosses zero from positive to
/// negative (detected on accepted steps, refined by bisection on the
/// dense output).
struct OdeResult {
  std::vector<OdeNode> nodes;
  bool event_hit = false;
  double event_x = 0.0;
  std::vector<double> event_y;
};

OdeResult integrate_ode(const OdeRhs& f, double x0, double x1, std::span<const double> y0,
                        const OdeOptions& opts,
                        const std::function<double(double, std::span<const double>)>& event = nullptr);

/// Cubic Hermite evaluation on one interval.
double hermite_cubic(double x, double x0, double x1, double f0, double f1, double d0, double d1);
double hermite_cubic_deriv(double x, double x0, double x1, double f0, double f1, double d0, double d1);

/// Piecewise-cubic interpolant through (x,f) with prescribed slopes,
/// clamped Fritsch–Carlson style so monotone data stays monotone.
class CubicInterpolant {
 public:
  CubicInterpolant() = default;
  CubicInterpolant(std::vector<double> x, std::vector<double> f, std::vector<double> df);
  double eval(double x) const;
  double deriv(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::size_t locate(double x) const;
  std::vector<double> x_, f_, df_;
};

/// Least-squares polynomial fit c0 + c1 x + ...; returns coefficients.
std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree);

/// Straight-line fit with residual-based 1-sigma confidence on the slope.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_sigma = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Savitzky–Golay smoothed derivative (window 5, quadratic) on a
/// uniformly spaced series; end points use one-sided stencils.
std::vector<double> savitzky_golay_derivative(std::span<const double> y, double dx);

/// Deterministic uniform doubles in [0,1) from a splitmix64 stream;
/// used everywhere randomness is needed so artifacts are reproducible
/// independent of the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double next_double();                      // [0,1)
  double uniform(double lo, double hi);      // [lo,hi)
  int uniform_int(int lo, int hi);           // inclusive bounds

 private:
  std::uint64_t state_;
};

/// SHA-256 of a byte string, lowercase hex. Used for artifact manifests.
std::string sha256_hex(std::span<const unsigned char> data);
std::string sha256_hex(const std::string& data);

/// Fixed "%.17g" formatting so emitted CSV/JSON artifacts are
/// byte-identical across runs.
std::string format_double(double v);

}  // namespace bubblesheet
