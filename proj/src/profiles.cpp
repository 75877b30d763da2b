#include "bubblesheet/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace bubblesheet::profiles {

double shrinker_rhs(double x, double u, double up) {
  return (1.0 + up * up) * (1.0 / u - (u - x * up) / 2.0);
}

double translator_rhs(double r, double u, double up, double c) {
  (void)u;
  return (1.0 + up * up) * (c - up / r);
}

namespace {

// Merge accepted integration steps with a uniform grid; values on the
// uniform grid come from per-step cubic Hermite dense output. Nodes are
// emitted in increasing x regardless of integration direction.
RadialProfile assemble_profile(ProfileKind kind, double parameter,
                               const std::vector<OdeNode>& steps, double x_lo, double x_hi,
                               int uniform_nodes) {
  std::map<double, std::pair<double, double>> table;  // x -> (u, u')
  for (const auto& n : steps)
    if (n.x >= x_lo - 1e-14 && n.x <= x_hi + 1e-14) table[n.x] = {n.y[0], n.y[1]};

  // locate enclosing step for dense output
  std::vector<const OdeNode*> ordered;
  for (const auto& n : steps) ordered.push_back(&n);
  std::sort(ordered.begin(), ordered.end(),
            [](const OdeNode* a, const OdeNode* b) { return a->x < b->x; });

  auto dense = [&](double x) -> std::pair<double, double> {
    auto cmp = [](const OdeNode* n, double v) { return n->x < v; };
    auto it = std::lower_bound(ordered.begin(), ordered.end(), x, cmp);
    if (it == ordered.begin()) ++it;
    if (it == ordered.end()) --it;
    const OdeNode* b = *it;
    const OdeNode* a = *(it - 1);
    return {hermite_cubic(x, a->x, b->x, a->y[0], b->y[0], a->y[1], b->y[1]),
            hermite_cubic_deriv(x, a->x, b->x, a->y[0], b->y[0], a->y[1], b->y[1])};
  };

  for (int i = 0; i <= uniform_nodes; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / uniform_nodes;
    if (table.find(x) == table.end() && x > ordered.front()->x && x < ordered.back()->x)
      table[x] = dense(x);
  }

  RadialProfile p;
  p.kind = kind;
  p.parameter = parameter;
  for (const auto& [x, uv] : table) {
    p.nodes.push_back(x);
    p.values.push_back(uv.first);
    p.slopes.push_back(uv.second);
  }
  return p;
}

OdeRhs shrinker_system() {
  return [](double x, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = shrinker_rhs(x, y[0], y[1]);
  };
}

}  // namespace

RadialProfile solve_ads_profile(double a, double tol, const ProfileConfig& cfg) {
  if (a < cfg.l0)
    throw ParameterTooSmall("solve_ads_profile: a=" + std::to_string(a) + " below L0=" +
                            std::to_string(cfg.l0));
  if (tol <= 0) throw std::invalid_argument("solve_ads_profile: tol must be positive");

  // Cap series: u^2 = (8/a) s (1 + alpha s), s = a - x. Start distance
  // chosen so the omitted O(s^2) term is below the step tolerance.
  const double alpha = -a / 16.0 - 1.0 / (4.0 * a);
  const double s0 = std::min(1e-5, std::sqrt(tol) / (8.0 * std::max(1.0, std::abs(alpha))));
  const double w0 = (8.0 / a) * s0 * (1.0 + alpha * s0);
  const double u0 = std::sqrt(w0);
  // du/dx = -dw/ds / (2u)
  const double dwds = (8.0 / a) * (1.0 + 2.0 * alpha * s0);
  const double up0 = -dwds / (2.0 * u0);

  OdeOptions opts;
  opts.rel_tol = tol / 100.0;
  opts.abs_tol = tol / 100.0;
  opts.max_step = cfg.max_step;
  opts.initial_step = s0;

  const double u_stop = cfg.tip_stop;
  std::vector<double> y0 = {u0, up0};
  OdeResult res;
  try {
    res = integrate_ode(shrinker_system(), a - s0, 0.0, y0, opts);
  } catch (const std::runtime_error& e) {
    throw ShootingDiverged(std::string("solve_ads_profile: ") + e.what());
  }
  for (const auto& n : res.nodes)
    if (!(n.y[0] > 0.0))
      throw ShootingDiverged("solve_ads_profile: profile lost positivity before x=0");

  RadialProfile p = assemble_profile(ProfileKind::Ads, a, res.nodes, 0.0, a - s0,
                                     cfg.uniform_nodes);

  // Tip nodes: the stop height and the extrapolated zero at x = a.
  // Between x = a - s0 and a the cap series itself is the dense output.
  const double x_stop = a - u_stop * u_stop * a / 8.0;  // u(s) ~ sqrt(8s/a)
  if (x_stop > p.nodes.back()) {
    const double s = a - x_stop;
    const double w = (8.0 / a) * s * (1.0 + alpha * s);
    p.nodes.push_back(x_stop);
    p.values.push_back(std::sqrt(w));
    p.slopes.push_back(-(8.0 / a) * (1.0 + 2.0 * alpha * s) / (2.0 * std::sqrt(w)));
  }
  p.nodes.push_back(a);
  p.values.push_back(0.0);
  p.slopes.push_back(p.slopes.back());

  const double extrapolation_err = std::abs(alpha) * s0 * s0 * std::sqrt(8.0 / a * s0);
  p.residual_bound = std::max(tol, extrapolation_err);
  return p;
}

RadialProfile solve_km_profile(double b, double x_max, double tol, const ProfileConfig& cfg) {
  if (b <= 0) throw std::invalid_argument("solve_km_profile: b must be positive");
  if (tol <= 0) throw std::invalid_argument("solve_km_profile: tol must be positive");
  // True shrinker slope defect at x_max is 1/(b x_max^2); the contract
  // |u'(x_max) - b| <= tol (1+b) is unattainable below that.
  const double slope_defect = 1.0 / (b * x_max * x_max);
  if (slope_defect > tol * (1.0 + b))
    throw SlopeNotReached("solve_km_profile: x_max=" + std::to_string(x_max) +
                          " too small for tol=" + std::to_string(tol));

  const double c3 = -1.0 / (2.0 * b * b * b) - 1.0 / (b * (1.0 + b * b));
  const double u0 = b * x_max + 1.0 / (b * x_max) + c3 / (x_max * x_max * x_max);
  const double up0 = b - 1.0 / (b * x_max * x_max) - 3.0 * c3 / (x_max * x_max * x_max * x_max);

  OdeOptions opts;
  opts.rel_tol = tol / 100.0;
  opts.abs_tol = tol / 100.0;
  opts.max_step = cfg.max_step;

  std::vector<double> y0 = {u0, up0};
  OdeResult res;
  try {
    res = integrate_ode(shrinker_system(), x_max, 0.0, y0, opts);
  } catch (const std::runtime_error& e) {
    throw ShootingDiverged(std::string("solve_km_profile: ") + e.what());
  }
  for (const auto& n : res.nodes)
    if (!(n.y[0] > 0.0) || !std::isfinite(n.y[1]))
      throw ShootingDiverged("solve_km_profile: profile left the graphical regime");

  RadialProfile p = assemble_profile(ProfileKind::Km, b, res.nodes, 0.0, x_max,
                                     cfg.uniform_nodes);
  if (std::abs(p.slopes.back() - b) > tol * (1.0 + b))
    throw SlopeNotReached("solve_km_profile: asymptotic slope criterion failed at x_max");
  p.residual_bound = tol;
  return p;
}

RadialProfile solve_bowl_profile(double speed, double r_max, double tol,
                                 const ProfileConfig& cfg) {
  if (speed <= 0) throw std::invalid_argument("solve_bowl_profile: speed must be positive");
  if (tol <= 0) throw std::invalid_argument("solve_bowl_profile: tol must be positive");
  const double c = 1.0 / speed;

  // Tip series f = c r^2/4 + (c^3/128) r^4 regularizes the r=0 axis.
  const double r0 = 1e-4;
  const double g4 = c * c * c / 128.0;
  std::vector<double> y0 = {c * r0 * r0 / 4.0 + g4 * r0 * r0 * r0 * r0,
                            c * r0 / 2.0 + 4.0 * g4 * r0 * r0 * r0};

  OdeOptions opts;
  opts.rel_tol = tol / 100.0;
  opts.abs_tol = tol / 100.0;
  opts.max_step = std::max(cfg.max_step, r_max / 4096.0);

  auto rhs = [c](double r, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = translator_rhs(r, y[0], y[1], c);
  };
  OdeResult res;
  try {
    res = integrate_ode(rhs, r0, r_max, y0, opts);
  } catch (const std::runtime_error& e) {
    throw ShootingDiverged(std::string("solve_bowl_profile: ") + e.what());
  }

  RadialProfile p = assemble_profile(ProfileKind::Bowl, speed, res.nodes, r0, r_max,
                                     cfg.uniform_nodes);
  // prepend the exact axis node
  p.nodes.insert(p.nodes.begin(), 0.0);
  p.values.insert(p.values.begin(), 0.0);
  p.slopes.insert(p.slopes.begin(), 0.0);
  p.residual_bound = tol;
  return p;
}

double ode_residual(const RadialProfile& profile) {
  const auto& x = profile.nodes;
  const auto& u = profile.values;
  const std::size_t n = x.size();
  if (n < 3) throw TooFewNodes("ode_residual: need at least 3 nodes");

  // 5-point centered stencils via local Newton polynomials; fall back
  // to 3 points near the ends.
  auto derivs_at = [&](std::size_t i) -> std::pair<double, double> {
    const std::size_t half = (n >= 5) ? 2 : 1;
    std::size_t lo = (i >= half) ? i - half : 0;
    std::size_t hi = std::min(n - 1, lo + 2 * half);
    lo = (hi >= 2 * half) ? hi - 2 * half : 0;
    const std::size_t m = hi - lo + 1;
    std::vector<double> xs(m), ys(m);
    for (std::size_t k = 0; k < m; ++k) {
      xs[k] = x[lo + k] - x[i];
      ys[k] = u[lo + k];
    }
    const auto c = polyfit(xs, ys, static_cast<int>(m - 1));
    return {c[1], 2.0 * c[2]};
  };

  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (profile.kind == ProfileKind::Ads && u[i] < 5e-3) continue;  // tip cap: FD degenerates
    const auto [du, ddu] = derivs_at(i);
    double rhs;
    if (profile.kind == ProfileKind::Bowl) {
      if (x[i] < 1e-6) continue;
      rhs = translator_rhs(x[i], u[i], du, 1.0 / profile.parameter);
    } else {
      rhs = shrinker_rhs(x[i], u[i], du);
    }
    const double scaled = std::abs(ddu - rhs) / (1.0 + std::abs(ddu) + std::abs(rhs));
    worst = std::max(worst, scaled);
  }
  return worst;
}

std::string profile_to_csv(const RadialProfile& profile) {
  std::ostringstream os;
  os << "kind,parameter,x,u,du,residual\n";
  const char* kind = profile.kind == ProfileKind::Ads   ? "ads"
                     : profile.kind == ProfileKind::Km  ? "km"
                                                        : "bowl";
  for (std::size_t i = 0; i < profile.nodes.size(); ++i) {
    os << kind << ',' << format_double(profile.parameter) << ',' << format_double(profile.nodes[i])
       << ',' << format_double(profile.values[i]) << ',' << format_double(profile.slopes[i]) << ','
       << format_double(profile.residual_bound) << '\n';
  }
  return os.str();
}

RadialProfile profile_from_csv(const std::string& csv) {
  RadialProfile p;
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind, tok;
    std::getline(ls, kind, ',');
    p.kind = (kind == "ads") ? ProfileKind::Ads : (kind == "km") ? ProfileKind::Km
                                                                 : ProfileKind::Bowl;
    std::getline(ls, tok, ',');
    p.parameter = std::strtod(tok.c_str(), nullptr);
    std::getline(ls, tok, ',');
    p.nodes.push_back(std::strtod(tok.c_str(), nullptr));
    std::getline(ls, tok, ',');
    p.values.push_back(std::strtod(tok.c_str(), nullptr));
    std::getline(ls, tok, ',');
    p.slopes.push_back(std::strtod(tok.c_str(), nullptr));
    std::getline(ls, tok, ',');
    p.residual_bound = std::strtod(tok.c_str(), nullptr);
  }
  return p;
}

}  // namespace bubblesheet::profiles
