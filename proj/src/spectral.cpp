#include "bubblesheet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bubblesheet/numerics.hpp"

namespace bubblesheet::spectral {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
}  // namespace

double gaussian_unit_norm_sq() { return std::sqrt(2.0 * kPi / std::numbers::e); }

double cutoff_chi(double s) {
  const double a = std::abs(s);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  const double t = (a - 0.5) * 2.0;
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

CylinderGrid::CylinderGrid(int gh_order, int theta_order) : nx_(gh_order), ntheta_(theta_order) {
  if (gh_order < 5) throw GridTooCoarse("CylinderGrid: need at least 5 radial nodes");
  if (theta_order < 16 || (theta_order & (theta_order - 1)) != 0)
    throw std::invalid_argument("CylinderGrid: theta order must be a power of two >= 16");
  rule_ = gauss_hermite_quarter_weight(gh_order);
  theta_.resize(ntheta_);
  for (int k = 0; k < ntheta_; ++k) theta_[k] = 2.0 * kPi * k / ntheta_;
  // (4 pi)^{-3/2} e^{-1/2} * sqrt(2) * dtheta
  wnorm_ = std::pow(4.0 * kPi, -1.5) * std::exp(-0.5) * kSqrt2 * (2.0 * kPi / ntheta_);

  vand_.resize(nx_, nx_);
  analysis_.resize(nx_, nx_);
  for (int m = 0; m < nx_; ++m) {
    const double nrm = std::sqrt(monic_hermite_norm_sq(m));
    for (int i = 0; i < nx_; ++i) {
      vand_(i, m) = monic_hermite(m, rule_.nodes[i]) / nrm;
      analysis_(i, m) = rule_.weights[i] * vand_(i, m);
    }
  }
}

std::shared_ptr<const CylinderGrid> make_grid(int gh_order, int theta_order) {
  return std::make_shared<const CylinderGrid>(gh_order, theta_order);
}

CylinderGraph make_graph(std::shared_ptr<const CylinderGrid> grid, double rho, double tau) {
  CylinderGraph g;
  g.grid = std::move(grid);
  g.values.assign(g.grid->size(), 0.0);
  g.rho = rho;
  g.tau = tau;
  return g;
}

SpectralCoefficients::SpectralCoefficients(std::shared_ptr<const CylinderGrid> grid)
    : grid_(std::move(grid)) {
  const std::size_t nxx = static_cast<std::size_t>(grid_->nx()) * grid_->nx();
  cos_.assign(nxx * (grid_->ntheta() / 2 + 1), 0.0);
  sin_.assign(nxx * (grid_->ntheta() / 2 + 1), 0.0);
}

double& SpectralCoefficients::cosc(int m1, int m2, int q) {
  return cos_[(static_cast<std::size_t>(m1) * grid_->nx() + m2) * (grid_->ntheta() / 2 + 1) + q];
}
double& SpectralCoefficients::sinc(int m1, int m2, int q) {
  return sin_[(static_cast<std::size_t>(m1) * grid_->nx() + m2) * (grid_->ntheta() / 2 + 1) + q];
}
double SpectralCoefficients::cosc(int m1, int m2, int q) const {
  return cos_[(static_cast<std::size_t>(m1) * grid_->nx() + m2) * (grid_->ntheta() / 2 + 1) + q];
}
double SpectralCoefficients::sinc(int m1, int m2, int q) const {
  return sin_[(static_cast<std::size_t>(m1) * grid_->nx() + m2) * (grid_->ntheta() / 2 + 1) + q];
}

SpectralCoefficients to_coefficients(const CylinderGraph& g) {
  const auto& grid = *g.grid;
  const int nx = grid.nx(), nt = grid.ntheta(), nq = nt / 2;
  SpectralCoefficients out(g.grid);

  // theta analysis first: per (i,j) column, uniform-grid trig transform
  std::vector<double> colc((nq + 1)), cols((nq + 1));
  std::vector<double> fc(static_cast<std::size_t>(nx) * nx * (nq + 1), 0.0);
  std::vector<double> fs(static_cast<std::size_t>(nx) * nx * (nq + 1), 0.0);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nx; ++j) {
      for (int q = 0; q <= nq; ++q) {
        double sc = 0.0, ss = 0.0;
        for (int k = 0; k < nt; ++k) {
          const double v = g.values[grid.index(i, j, k)];
          sc += v * std::cos(q * grid.theta(k));
          ss += v * std::sin(q * grid.theta(k));
        }
        const double scale = (q == 0 || q == nq) ? 1.0 / nt : 2.0 / nt;
        colc[q] = sc * scale;
        cols[q] = ss * (2.0 / nt);
      }
      for (int q = 0; q <= nq; ++q) {
        fc[(static_cast<std::size_t>(i) * nx + j) * (nq + 1) + q] = colc[q];
        fs[(static_cast<std::size_t>(i) * nx + j) * (nq + 1) + q] = cols[q];
      }
    }

  // Hermite analysis along x1 then x2 (plain matrix applications)
  const Eigen::MatrixXd& A = grid.hermite_analysis();
  for (int q = 0; q <= nq; ++q) {
    Eigen::MatrixXd Mc(nx, nx), Ms(nx, nx);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nx; ++j) {
        Mc(i, j) = fc[(static_cast<std::size_t>(i) * nx + j) * (nq + 1) + q];
        Ms(i, j) = fs[(static_cast<std::size_t>(i) * nx + j) * (nq + 1) + q];
      }
    const Eigen::MatrixXd Cc = A.transpose() * Mc * A;
    const Eigen::MatrixXd Cs = A.transpose() * Ms * A;
    for (int m1 = 0; m1 < nx; ++m1)
      for (int m2 = 0; m2 < nx; ++m2) {
        out.cosc(m1, m2, q) = Cc(m1, m2);
        if (q >= 1 && q < nq) out.sinc(m1, m2, q) = Cs(m1, m2);
      }
  }
  return out;
}

CylinderGraph from_coefficients(const SpectralCoefficients& c, double rho, double tau) {
  const auto& grid = *c.grid();
  const int nx = grid.nx(), nt = grid.ntheta(), nq = nt / 2;
  CylinderGraph g = make_graph(c.grid(), rho, tau);

  const Eigen::MatrixXd& V = grid.hermite_vandermonde();
  for (int q = 0; q <= nq; ++q) {
    Eigen::MatrixXd Cc(nx, nx), Cs(nx, nx);
    for (int m1 = 0; m1 < nx; ++m1)
      for (int m2 = 0; m2 < nx; ++m2) {
        Cc(m1, m2) = c.cosc(m1, m2, q);
        Cs(m1, m2) = (q >= 1 && q < nq) ? c.sinc(m1, m2, q) : 0.0;
      }
    const Eigen::MatrixXd Fc = V * Cc * V.transpose();
    const Eigen::MatrixXd Fs = V * Cs * V.transpose();
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nx; ++j) {
        const double fcv = Fc(i, j), fsv = Fs(i, j);
        if (fcv == 0.0 && fsv == 0.0) continue;
        for (int k = 0; k < nt; ++k)
          g.values[grid.index(i, j, k)] +=
              fcv * std::cos(q * grid.theta(k)) + fsv * std::sin(q * grid.theta(k));
      }
  }
  return g;
}

double SpectralCoefficients::eval(double x1, double x2, double theta, double clamp_rel) const {
  const auto& grid = *grid_;
  const int nx = grid.nx(), nq = grid.ntheta() / 2;
  double cmax = 0.0;
  for (double v : cos_) cmax = std::max(cmax, std::abs(v));
  for (double v : sin_) cmax = std::max(cmax, std::abs(v));
  const double clamp = cmax * clamp_rel;

  // normalized Hermite values by upward recurrence
  auto herm = [&](double x) {
    std::vector<double> p(nx);
    double pm = 1.0, pc = x;
    for (int m = 0; m < nx; ++m) {
      const double raw = (m == 0) ? 1.0 : (m == 1 ? x : pc);
      p[m] = raw / std::sqrt(monic_hermite_norm_sq(m));
      if (m >= 1) {
        const double pn = x * pc - 2.0 * m * pm;
        pm = pc;
        pc = pn;
      }
    }
    return p;
  };
  const std::vector<double> p1 = herm(x1), p2 = herm(x2);

  double acc = 0.0;
  for (int m1 = 0; m1 < nx; ++m1)
    for (int m2 = 0; m2 < nx; ++m2)
      for (int q = 0; q <= nq; ++q) {
        const double cc = cosc(m1, m2, q);
        const double cs = (q >= 1 && q < nq) ? sinc(m1, m2, q) : 0.0;
        if (std::abs(cc) <= clamp && std::abs(cs) <= clamp) continue;
        double term = 0.0;
        if (std::abs(cc) > clamp) term += cc * std::cos(q * theta);
        if (std::abs(cs) > clamp) term += cs * std::sin(q * theta);
        acc += term * p1[m1] * p2[m2];
      }
  return acc;
}

double gaussian_inner_product(const CylinderGraph& f, const CylinderGraph& g) {
  if (f.grid.get() != g.grid.get())
    throw GridMismatch("gaussian_inner_product: fields on different grids");
  const auto& grid = *f.grid;
  std::vector<double> cells;
  cells.reserve(static_cast<std::size_t>(grid.nx()) * grid.nx());
  for (int i = 0; i < grid.nx(); ++i)
    for (int j = 0; j < grid.nx(); ++j) {
      double acc = 0.0;
      for (int k = 0; k < grid.ntheta(); ++k)
        acc += f.values[grid.index(i, j, k)] * g.values[grid.index(i, j, k)];
      cells.push_back(acc * grid.cell_weight(i, j));
    }
  return pairwise_sum(cells);
}

double gaussian_norm_sq(const CylinderGraph& f) { return gaussian_inner_product(f, f); }

CylinderGraph apply_linearized_operator(const CylinderGraph& g) {
  if (g.grid->nx() < 5) throw GridTooCoarse("apply_linearized_operator: fewer than 5 radial nodes");
  SpectralCoefficients c = to_coefficients(g);
  c.scale_by_eigenvalue([](double lam) { return lam; });
  CylinderGraph out = from_coefficients(c, g.rho, g.tau);
  return out;
}

CylinderGraph truncate_graph(const CylinderGraph& g) {
  CylinderGraph out = g;
  const auto& grid = *g.grid;
  for (int i = 0; i < grid.nx(); ++i)
    for (int j = 0; j < grid.nx(); ++j) {
      const double r = std::hypot(grid.x(i), grid.x(j));
      const double chi = g.node_inside(i, j) ? cutoff_chi(r / g.rho) : 0.0;
      for (int k = 0; k < grid.ntheta(); ++k) out.values[grid.index(i, j, k)] *= chi;
    }
  return out;
}

double unstable_mode_value(UnstableMode m, double x1, double x2, double theta) {
  switch (m) {
    case UnstableMode::One: return 1.0;
    case UnstableMode::X1: return x1;
    case UnstableMode::X2: return x2;
    case UnstableMode::CosTheta: return std::cos(theta);
    case UnstableMode::SinTheta: return std::sin(theta);
  }
  return 0.0;
}

double neutral_mode_value(NeutralMode m, double x1, double x2, double theta) {
  switch (m) {
    case NeutralMode::X1Cos: return x1 * std::cos(theta);
    case NeutralMode::X1Sin: return x1 * std::sin(theta);
    case NeutralMode::X2Cos: return x2 * std::cos(theta);
    case NeutralMode::X2Sin: return x2 * std::sin(theta);
    case NeutralMode::X1Sq: return x1 * x1 - 2.0;
    case NeutralMode::X2Sq: return x2 * x2 - 2.0;
    case NeutralMode::X1X2: return x1 * x2;
  }
  return 0.0;
}

double unstable_mode_norm_sq(UnstableMode m) {
  const double gamma = gaussian_unit_norm_sq();
  switch (m) {
    case UnstableMode::One: return gamma;
    case UnstableMode::X1:
    case UnstableMode::X2: return 2.0 * gamma;
    case UnstableMode::CosTheta:
    case UnstableMode::SinTheta: return 0.5 * gamma;
  }
  return 0.0;
}

double neutral_mode_norm_sq(NeutralMode m) {
  const double gamma = gaussian_unit_norm_sq();
  switch (m) {
    case NeutralMode::X1Cos:
    case NeutralMode::X1Sin:
    case NeutralMode::X2Cos:
    case NeutralMode::X2Sin: return gamma;  // 2 * (1/2) * gamma
    case NeutralMode::X1Sq:
    case NeutralMode::X2Sq: return 8.0 * gamma;
    case NeutralMode::X1X2: return 4.0 * gamma;
  }
  return 0.0;
}

double ModeDecomposition::normalized_unstable(UnstableMode m) const {
  return unstable[static_cast<int>(m)] * std::sqrt(unstable_mode_norm_sq(m));
}
double ModeDecomposition::normalized_neutral(NeutralMode m) const {
  return neutral[static_cast<int>(m)] * std::sqrt(neutral_mode_norm_sq(m));
}

ModeDecomposition spectral_project(const CylinderGraph& g) {
  ModeDecomposition d;
  const auto& grid = *g.grid;
  for (int m = 0; m < 5; ++m) {
    const auto mode = static_cast<UnstableMode>(m);
    CylinderGraph e = make_graph_from(g.grid, g.rho,
                                      [&](double x1, double x2, double th) {
                                        return unstable_mode_value(mode, x1, x2, th);
                                      });
    d.unstable[m] = gaussian_inner_product(g, e) / unstable_mode_norm_sq(mode);
    d.u_plus += d.unstable[m] * d.unstable[m] * unstable_mode_norm_sq(mode);
  }
  for (int m = 0; m < 7; ++m) {
    const auto mode = static_cast<NeutralMode>(m);
    CylinderGraph e = make_graph_from(g.grid, g.rho,
                                      [&](double x1, double x2, double th) {
                                        return neutral_mode_value(mode, x1, x2, th);
                                      });
    d.neutral[m] = gaussian_inner_product(g, e) / neutral_mode_norm_sq(mode);
    d.u_zero += d.neutral[m] * d.neutral[m] * neutral_mode_norm_sq(mode);
  }
  (void)grid;
  d.u_minus = gaussian_norm_sq(g) - d.u_plus - d.u_zero;
  return d;
}

CylinderGraph reconstruct_low_modes(const ModeDecomposition& d,
                                    std::shared_ptr<const CylinderGrid> grid, double rho) {
  return make_graph_from(std::move(grid), rho, [&](double x1, double x2, double th) {
    double v = 0.0;
    for (int m = 0; m < 5; ++m)
      v += d.unstable[m] * unstable_mode_value(static_cast<UnstableMode>(m), x1, x2, th);
    for (int m = 0; m < 7; ++m)
      v += d.neutral[m] * neutral_mode_value(static_cast<NeutralMode>(m), x1, x2, th);
    return v;
  });
}

Eigen::Matrix4d rotation_generator(int which) {
  Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
  const int pairs[4][2] = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};  // G13 G14 G23 G24
  const int a = pairs[which][0], b = pairs[which][1];
  g(a, b) = 1.0;
  g(b, a) = -1.0;
  return g;
}

Eigen::Matrix4d RotationState::generator_matrix() const {
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 4; ++i) a += generator[i] * rotation_generator(i);
  return a;
}

Eigen::Matrix4d exp_so4(const Eigen::Matrix4d& a) {
  // scaling and squaring with a plain Taylor core; inputs here are small
  int squarings = 0;
  Eigen::Matrix4d b = a;
  while (b.norm() > 0.25) {
    b *= 0.5;
    ++squarings;
  }
  Eigen::Matrix4d term = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d sum = Eigen::Matrix4d::Identity();
  for (int k = 1; k <= 24; ++k) {
    term = (term * b) / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

double rotation_pairing(const Eigen::Matrix4d& a, const CylinderGraph& truncated) {
  const auto& grid = *truncated.grid;
  // <Ax, nu> = -(a13 x1 + a23 x2) cos(th) - (a14 x1 + a24 x2) sin(th)
  const double a13 = a(0, 2), a14 = a(0, 3), a23 = a(1, 2), a24 = a(1, 3);
  std::vector<double> cells;
  cells.reserve(static_cast<std::size_t>(grid.nx()) * grid.nx());
  const double unnorm = std::pow(4.0 * kPi, 1.5);  // paper integrals carry no (4pi)^{-3/2}
  for (int i = 0; i < grid.nx(); ++i)
    for (int j = 0; j < grid.nx(); ++j) {
      double acc = 0.0;
      for (int k = 0; k < grid.ntheta(); ++k) {
        const double th = grid.theta(k);
        const double pair = -(a13 * grid.x(i) + a23 * grid.x(j)) * std::cos(th) -
                            (a14 * grid.x(i) + a24 * grid.x(j)) * std::sin(th);
        acc += pair * truncated.values[grid.index(i, j, k)];
      }
      cells.push_back(acc * grid.cell_weight(i, j) * unnorm);
    }
  return pairwise_sum(cells);
}

CylinderGraph regraph_rotated(const CylinderGraph& g, const Eigen::Matrix4d& s) {
  const auto& grid = *g.grid;
  const SpectralCoefficients coeffs = to_coefficients(g);
  const Eigen::Matrix4d sinv = s.transpose();
  CylinderGraph out = make_graph(g.grid, g.rho, g.tau);

  const double bound = 0.75 * kSqrt2;
  for (int i = 0; i < grid.nx(); ++i)
    for (int j = 0; j < grid.nx(); ++j) {
      if (!out.node_inside(i, j)) continue;
      for (int k = 0; k < grid.ntheta(); ++k) {
        const double th = grid.theta(k);
        Eigen::Vector4d p(grid.x(i), grid.x(j), kSqrt2 * std::cos(th), kSqrt2 * std::sin(th));
        Eigen::Vector4d nu(0.0, 0.0, std::cos(th), std::sin(th));
        const Eigen::Vector4d p0 = sinv * p;
        const Eigen::Vector4d dp = sinv * nu;
        auto phi = [&](double t) {
          const Eigen::Vector4d y = p0 + t * dp;
          const double r34 = std::hypot(y(2), y(3));
          const double thy = std::atan2(y(3), y(2));
          return r34 - kSqrt2 - coeffs.eval(y(0), y(1), thy);
        };
        // secant iteration from t=0
        double t0 = 0.0, t1 = 1e-3;
        double f0 = phi(t0), f1 = phi(t1);
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
          if (std::abs(f1) < 1e-14) {
            ok = true;
            break;
          }
          const double denom = f1 - f0;
          if (denom == 0.0) break;
          const double t2 = t1 - f1 * (t1 - t0) / denom;
          t0 = t1;
          f0 = f1;
          t1 = t2;
          if (!std::isfinite(t1) || std::abs(t1) > bound) break;
          f1 = phi(t1);
        }
        if (!ok && std::abs(f1) > 1e-10)
          throw NotAGraph("regraph_rotated: ray-surface intersection failed");
        out.values[grid.index(i, j, k)] = t1;
      }
    }
  return out;
}

std::pair<RotationState, CylinderGraph> fine_tune_rotation(const CylinderGraph& g,
                                                           const FineTuneOptions& opts) {
  // Gram matrix of the generator pairings under the chi-weighted measure;
  // positive definite, so it serves as the (fixed) Newton Jacobian.
  Eigen::Matrix4d gram = Eigen::Matrix4d::Zero();
  {
    std::array<CylinderGraph, 4> fields;
    for (int w = 0; w < 4; ++w) {
      const Eigen::Matrix4d gen = rotation_generator(w);
      const double a13 = gen(0, 2), a14 = gen(0, 3), a23 = gen(1, 2), a24 = gen(1, 3);
      CylinderGraph f = make_graph_from(g.grid, g.rho, [&](double x1, double x2, double th) {
        return -(a13 * x1 + a23 * x2) * std::cos(th) - (a14 * x1 + a24 * x2) * std::sin(th);
      });
      fields[w] = truncate_graph(f);
    }
    const double unnorm = std::pow(4.0 * kPi, 1.5);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        gram(a, b) = gaussian_inner_product(fields[a], fields[b]) * unnorm;
  }
  const Eigen::Matrix4d gram_inv = gram.inverse();
  const double scale = gram.diagonal().maxCoeff();

  Eigen::Vector4d eps = Eigen::Vector4d::Zero();
  RotationState state;
  CylinderGraph tuned = g;
  for (int it = 0; it <= opts.max_iter; ++it) {
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    for (int w = 0; w < 4; ++w) a += eps(w) * rotation_generator(w);
    state.S = exp_so4(a);
    for (int w = 0; w < 4; ++w) state.generator[w] = eps(w);
    tuned = regraph_rotated(g, state.S);

    const CylinderGraph hat = truncate_graph(tuned);
    Eigen::Vector4d f;
    for (int w = 0; w < 4; ++w) f(w) = rotation_pairing(rotation_generator(w), hat);
    if (f.cwiseAbs().maxCoeff() <= opts.tol * scale) return {state, tuned};
    if (it == opts.max_iter) break;
    eps -= opts.damping * (gram_inv * f);
    if (!eps.allFinite() || eps.norm() > 0.5)
      throw NotAGraph("fine_tune_rotation: rotation left the graphical regime");
  }
  throw NewtonStalled("fine_tune_rotation: pairings did not converge");
}

AdmissibilityReport admissibility_proxy(const CylinderGraph& g) {
  const auto& grid = *g.grid;
  const int nx = grid.nx(), nt = grid.ntheta();
  AdmissibilityReport rep;

  auto val = [&](int i, int j, int k) { return g.values[grid.index(i, j, ((k % nt) + nt) % nt)]; };
  const double dth = 2.0 * kPi / nt;

  for (int i = 1; i + 1 < nx; ++i)
    for (int j = 1; j + 1 < nx; ++j) {
      if (!g.node_inside(i, j)) continue;
      const double hx1m = grid.x(i) - grid.x(i - 1), hx1p = grid.x(i + 1) - grid.x(i);
      const double hx2m = grid.x(j) - grid.x(j - 1), hx2p = grid.x(j + 1) - grid.x(j);
      for (int k = 0; k < nt; ++k) {
        const double u0 = val(i, j, k);
        // nonuniform 3-point first/second derivatives
        const double u1 =
            (val(i + 1, j, k) * hx1m / hx1p - val(i - 1, j, k) * hx1p / hx1m) / (hx1m + hx1p) +
            u0 * (hx1p - hx1m) / (hx1p * hx1m);
        const double u2 =
            (val(i, j + 1, k) * hx2m / hx2p - val(i, j - 1, k) * hx2p / hx2m) / (hx2m + hx2p) +
            u0 * (hx2p - hx2m) / (hx2p * hx2m);
        const double ut = (val(i, j, k + 1) - val(i, j, k - 1)) / (2.0 * dth);
        const double u11 = 2.0 * (val(i - 1, j, k) / (hx1m * (hx1m + hx1p)) -
                                  u0 / (hx1m * hx1p) + val(i + 1, j, k) / (hx1p * (hx1m + hx1p)));
        const double u22 = 2.0 * (val(i, j - 1, k) / (hx2m * (hx2m + hx2p)) -
                                  u0 / (hx2m * hx2p) + val(i, j + 1, k) / (hx2p * (hx2m + hx2p)));
        const double utt = (val(i, j, k + 1) - 2.0 * u0 + val(i, j, k - 1)) / (dth * dth);
        rep.sup_u = std::max(rep.sup_u, std::abs(u0));
        rep.sup_grad = std::max({rep.sup_grad, std::abs(u1), std::abs(u2),
                                 std::abs(ut) / kSqrt2});
        rep.sup_hess = std::max({rep.sup_hess, std::abs(u11), std::abs(u22),
                                 std::abs(utt) / 2.0});
      }
    }
  const double bound = 1.0 / (g.rho * g.rho);
  rep.admissible = rep.sup_u <= bound && rep.sup_grad <= bound && rep.sup_hess <= bound;
  return rep;
}

bool valid_radius_schedule(const std::vector<double>& tau, const std::vector<double>& rho) {
  if (tau.size() != rho.size() || tau.size() < 2) return false;
  for (std::size_t i = 0; i + 1 < tau.size(); ++i) {
    const double dr = (rho[i + 1] - rho[i]) / (tau[i + 1] - tau[i]);
    if (dr > 1e-12 || dr < -rho[i] - 1e-12) return false;  // -rho <= rho' <= 0
  }
  return true;
}

std::string graph_to_csv(const CylinderGraph& g) {
  std::ostringstream os;
  os << "x1,x2,theta,u\n";
  const auto& grid = *g.grid;
  for (int i = 0; i < grid.nx(); ++i)
    for (int j = 0; j < grid.nx(); ++j)
      for (int k = 0; k < grid.ntheta(); ++k)
        os << format_double(grid.x(i)) << ',' << format_double(grid.x(j)) << ','
           << format_double(grid.theta(k)) << ','
           << format_double(g.values[grid.index(i, j, k)]) << '\n';
  return os.str();
}

}  // namespace bubblesheet::spectral
