#include "bubblesheet/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bubblesheet::foliation {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// 5-point local polynomial derivatives of the profile values at an
// arbitrary abscissa (independent of the stored slopes).
std::pair<double, double> fd_derivs(const profiles::RadialProfile& p, double s) {
  const auto& x = p.nodes;
  const auto it = std::lower_bound(x.begin(), x.end(), s);
  std::size_t i = (it == x.begin()) ? 0 : static_cast<std::size_t>(it - x.begin() - 1);
  const std::size_t n = x.size();
  std::size_t lo = (i >= 2) ? i - 2 : 0;
  if (lo + 4 >= n) lo = n - 5;
  std::vector<double> xs(5), ys(5);
  for (int k = 0; k < 5; ++k) {
    xs[k] = x[lo + k] - s;
    ys[k] = p.values[lo + k];
  }
  const auto c = polyfit(xs, ys, 4);
  return {c[1], 2.0 * c[2]};
}

// R^3 mean curvature and <x,nu>/W of the profile surface of revolution
// at axial coordinate s, from (u, u', u'').
struct SigmaGeometry {
  double h_sigma;
  double x_dot_nu;  // (u - s u') / W
  double w;         // sqrt(1 + u'^2)
  double nu_axis;   // <e1, nu> = -u'/W
};

SigmaGeometry sigma_geometry(double s, double u, double du, double ddu) {
  SigmaGeometry g;
  g.w = std::sqrt(1.0 + du * du);
  g.h_sigma = -ddu / (g.w * g.w * g.w) + 1.0 / (u * g.w);
  g.x_dot_nu = (u - s * du) / g.w;
  g.nu_axis = -du / g.w;
  return g;
}

}  // namespace

FoliationLeaf::FoliationLeaf(profiles::RadialProfile profile, FoliationConfig cfg)
    : profile_(std::move(profile)), cfg_(cfg) {
  switch (profile_.kind) {
    case profiles::ProfileKind::Ads: kind_ = LiftKind::GammaA; break;
    case profiles::ProfileKind::Km: kind_ = LiftKind::GammaTildeB; break;
    default: throw UnsupportedKind("FoliationLeaf: bowl profiles are not shrinker leaves");
  }
  interp_ = profile_.interpolant();
}

FoliationLeaf FoliationLeaf::cylinder(FoliationConfig cfg) {
  profiles::RadialProfile p;
  p.kind = profiles::ProfileKind::Ads;  // storage only; kind_ overridden below
  p.parameter = 0.0;
  for (int i = 0; i <= 256; ++i) {
    p.nodes.push_back(i * 0.25);
    p.values.push_back(kSqrt2);
    p.slopes.push_back(0.0);
  }
  p.residual_bound = 0.0;
  FoliationLeaf leaf(std::move(p), cfg);
  leaf.kind_ = LiftKind::Cylinder;
  return leaf;
}

double FoliationLeaf::height(double s) const { return interp_.eval(s); }
double FoliationLeaf::height_slope(double s) const { return interp_.deriv(s); }

std::pair<double, double> FoliationLeaf::trusted_range() const {
  double lo = std::max(profile_.nodes.front(), 0.0);
  double hi = profile_.nodes.back();
  if (kind_ == LiftKind::GammaA) {
    // exclude the tip cap where u < 0.05
    const auto& v = profile_.values;
    for (std::size_t i = v.size(); i-- > 0;) {
      if (v[i] >= 0.05) {
        hi = profile_.nodes[i];
        break;
      }
    }
  }
  return {lo, hi};
}

LeafPoint FoliationLeaf::evaluate(double r, double t, double phi) const {
  const double s = r - 1.0;
  const auto [lo, hi] = trusted_range();
  if (s < lo || s > hi) throw OutsideDomain("FoliationLeaf: radius outside profile domain");
  const double u = height(s);
  const double du = height_slope(s);
  const double w = std::sqrt(1.0 + du * du);
  LeafPoint p;
  p.position = {r * std::cos(t), r * std::sin(t), u * std::cos(phi), u * std::sin(phi)};
  p.normal = {-du / w * std::cos(t), -du / w * std::sin(t), std::cos(phi) / w,
              std::sin(phi) / w};
  return p;
}

bool FoliationLeaf::point_in_omega(const Vec4& p) const {
  const double r2 = p[0] * p[0] + p[1] * p[1];
  const double h2 = p[2] * p[2] + p[3] * p[3];
  return h2 <= 2.0 + cfg_.delta + 1e-12 && r2 >= cfg_.l1 * cfg_.l1 - 1e-12;
}

FoliationLeaf lift_leaf(const profiles::RadialProfile& profile, const FoliationConfig& cfg) {
  return FoliationLeaf(profile, cfg);
}

double divergence_defect(const FoliationLeaf& leaf, const Vec4& point) {
  if (!leaf.point_in_omega(point)) throw OutsideDomain("divergence_defect: point outside Omega");
  const double r = std::hypot(point[0], point[1]);
  const double s = r - 1.0;

  if (leaf.kind() == LiftKind::Cylinder) {
    // flat profile lifts to Gamma itself: H = 1/sqrt(2), <x,nu> = sqrt(2)
    return 1.0 / kSqrt2 - 0.5 * kSqrt2;
  }

  // independent curvature: 5-point stencils on the leaf's interpolant
  const double u = leaf.height(s);
  const double h = 1e-3;
  std::array<double, 5> us;
  for (int k = -2; k <= 2; ++k) us[k + 2] = leaf.height(s + k * h);
  const double du_fd = (-us[4] + 8 * us[3] - 8 * us[1] + us[0]) / (12 * h);
  const double ddu_fd = (-us[4] + 16 * us[3] - 30 * us[2] + 16 * us[1] - us[0]) / (12 * h * h);

  const SigmaGeometry sg = sigma_geometry(s, u, du_fd, ddu_fd);
  const double h_gamma = sg.h_sigma + sg.nu_axis / r;
  const double x_dot_nu4 = sg.x_dot_nu + sg.nu_axis;  // (u - r u')/W with r = s+1
  return h_gamma - 0.5 * x_dot_nu4;
}

double calibration_residual(const profiles::RadialProfile& profile) {
  const auto& x = profile.nodes;
  const auto& u = profile.values;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < x.size(); ++i) {
    if (profile.kind == profiles::ProfileKind::Ads && u[i] < 0.05) continue;
    const auto [du, ddu] = fd_derivs(profile, x[i]);
    const SigmaGeometry sg = sigma_geometry(x[i], u[i], du, ddu);
    const double weight = std::exp(-(x[i] * x[i] + u[i] * u[i]) / 4.0);
    worst = std::max(worst, std::abs(sg.h_sigma - 0.5 * sg.x_dot_nu) * weight);
  }
  return worst;
}

std::string FoliationReport::to_json() const {
  std::ostringstream os;
  os << "{\"check\":\"" << check << "\",\"pass\":" << (pass ? "true" : "false")
     << ",\"witnesses\":[";
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    if (i) os << ',';
    os << "{\"what\":\"" << witnesses[i].what << "\",\"r\":" << format_double(witnesses[i].r)
       << ",\"value\":" << format_double(witnesses[i].value) << '}';
  }
  os << "]}";
  return os.str();
}

FoliationReport verify_foliation_order(const std::vector<FoliationLeaf>& leaves) {
  FoliationReport rep;
  rep.check = "foliation_order";
  if (leaves.size() < 2) {
    rep.witnesses.push_back({"vacuous: fewer than two leaves", 0.0, 0.0});
    return rep;
  }
  const auto& cfg = leaves.front().config();
  for (std::size_t a = 0; a < leaves.size(); ++a)
    for (std::size_t b = a + 1; b < leaves.size(); ++b) {
      if (leaves[a].kind() != leaves[b].kind())
        throw GeometryMismatch("verify_foliation_order: mixed leaf kinds");
      const auto [lo_a, hi_a] = leaves[a].trusted_range();
      const auto [lo_b, hi_b] = leaves[b].trusted_range();
      const double lo = std::max({lo_a, lo_b, cfg.l1 - 1.0});
      const double hi = std::min(hi_a, hi_b);
      if (lo >= hi) continue;
      // orientation from leaf parameters
      double diff_sign = 0.0;
      bool coincident = true;
      for (int i = 0; i <= cfg.probe_radial; ++i) {
        const double s = lo + (hi - lo) * i / cfg.probe_radial;
        const double d = leaves[b].height(s) - leaves[a].height(s);
        if (std::abs(d) > 1e-12) coincident = false;
        if (diff_sign == 0.0 && std::abs(d) > 1e-12) diff_sign = (d > 0) ? 1.0 : -1.0;
        if (diff_sign != 0.0 && d * diff_sign < -1e-12) {
          rep.pass = false;
          rep.witnesses.push_back({"leaves cross", 1.0 + s, d});
        }
      }
      if (coincident)
        rep.witnesses.push_back({"coincident leaves (parameters " +
                                     format_double(leaves[a].parameter()) + ", " +
                                     format_double(leaves[b].parameter()) + ")",
                                 0.0, 0.0});
    }
  return rep;
}

FoliationReport verify_defect_sign(const FoliationLeaf& leaf, double tol) {
  FoliationReport rep;
  rep.check = leaf.kind() == LiftKind::GammaA ? "defect_sign_gamma_a" : "defect_sign_gamma_tilde_b";
  const auto& cfg = leaf.config();
  const auto [lo, hi] = leaf.trusted_range();
  const double r_lo = std::max(cfg.l1, 1.0 + lo);
  double worst = 0.0;
  CheckWitness witness{"worst defect", 0.0, 0.0};
  int count = 0;
  for (int i = 0; i < cfg.probe_radial; ++i) {
    const double r = r_lo + (1.0 + hi - r_lo) * (i + 0.5) / cfg.probe_radial;
    const double u = leaf.height(r - 1.0);
    if (u * u > 2.0 + cfg.delta) continue;  // left Omega's collar
    for (int k = 0; k < cfg.probe_angular; ++k) {
      const double t = 2.0 * std::numbers::pi * k / cfg.probe_angular;
      const LeafPoint p = leaf.evaluate(r, t, 0.35 + 0.1 * k);
      if (!leaf.point_in_omega(p.position)) continue;
      const double d = divergence_defect(leaf, p.position);
      ++count;
      const double signed_d = leaf.kind() == LiftKind::GammaA ? d : -d;
      if (signed_d > worst) {
        worst = signed_d;
        witness.r = r;
        witness.value = d;
      }
      if (signed_d > tol) rep.pass = false;
    }
  }
  witness.what = "worst signed defect over " + std::to_string(count) + " probes";
  rep.witnesses.push_back(witness);
  return rep;
}

FoliationReport barrier_contact_check(const std::vector<spectral::CylinderGraph>& snapshots,
                                      const FoliationLeaf& leaf) {
  if (leaf.kind() != LiftKind::GammaA)
    throw UnsupportedKind("barrier_contact_check: inner barriers are Gamma_a leaves");
  FoliationReport rep;
  rep.check = "barrier_contact";
  if (snapshots.empty()) return rep;

  const auto& grid = *snapshots.front().grid;
  const auto& cfg = leaf.config();
  const auto [lo, hi] = leaf.trusted_range();
  const double r_lo = std::max(cfg.l1, 1.0 + lo);
  const double r_hi = 1.0 + hi;
  // snapshot grid must cover at least the inner part of the leaf's extent
  const double grid_reach = kSqrt2 * grid.max_abscissa();
  if (grid_reach < r_lo)
    throw GeometryMismatch("barrier_contact_check: snapshot domain misses the leaf");

  for (std::size_t sidx = 0; sidx < snapshots.size(); ++sidx) {
    const auto& snap = snapshots[sidx];
    for (int i = 0; i < grid.nx(); ++i)
      for (int j = 0; j < grid.nx(); ++j) {
        const double r = std::hypot(grid.x(i), grid.x(j));
        if (r < r_lo || r > r_hi || !snap.node_inside(i, j)) continue;
        const double barrier = leaf.height(r - 1.0);
        for (int k = 0; k < grid.ntheta(); ++k) {
          const double surface = kSqrt2 + snap.values[grid.index(i, j, k)];
          if (surface < barrier - 1e-10) {
            rep.pass = false;
            rep.witnesses.push_back({"crossing at snapshot " + std::to_string(sidx) + " tau=" +
                                         format_double(snap.tau),
                                     r, surface - barrier});
            return rep;
          }
        }
      }
  }
  rep.witnesses.push_back({"no crossing over " + std::to_string(snapshots.size()) + " snapshots",
                           0.0, 0.0});
  return rep;
}

std::string leaf_to_csv(const FoliationLeaf& leaf) {
  std::ostringstream os;
  os << "x1,x2,x3,x4,nu1,nu2,nu3,nu4\n";
  const auto& cfg = leaf.config();
  const auto [lo, hi] = leaf.trusted_range();
  const double r_lo = std::max(cfg.l1, 1.0 + lo);
  for (int i = 0; i < cfg.probe_radial; ++i) {
    const double r = r_lo + (1.0 + hi - r_lo) * (i + 0.5) / cfg.probe_radial;
    if (r - 1.0 > hi) continue;
    for (int k = 0; k < cfg.probe_angular; ++k) {
      const double t = 2.0 * std::numbers::pi * k / cfg.probe_angular;
      const LeafPoint p = leaf.evaluate(r, t, 2.0 * std::numbers::pi * ((k * 7) % 16) / 16.0);
      for (int c = 0; c < 4; ++c) os << format_double(p.position[c]) << ',';
      for (int c = 0; c < 4; ++c)
        os << format_double(p.normal[c]) << (c == 3 ? '\n' : ',');
    }
  }
  return os.str();
}

}  // namespace bubblesheet::foliation
