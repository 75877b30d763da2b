#include "bubblesheet/numerics.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstring>

namespace bubblesheet {

double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr double kC[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kB5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
constexpr double kB4[7] = {5179.0 / 57600, 0,           7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

bool any_nan(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return true;
  return false;
}

}  // namespace

OdeResult integrate_ode(const OdeRhs& f, double x0, double x1, std::span<const double> y0,
                        const OdeOptions& opts,
                        const std::function<double(double, std::span<const double>)>& event) {
  const double dir = (x1 >= x0) ? 1.0 : -1.0;
  const std::size_t dim = y0.size();
  OdeResult out;

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> dy(dim), ynew(dim), yerr(dim), ytmp(dim);
  std::array<std::vector<double>, 7> k;
  for (auto& ki : k) ki.resize(dim);

  double x = x0;
  f(x, y, dy);
  out.nodes.push_back({x, y, dy});

  double h = std::min(opts.initial_step, opts.max_step) * dir;
  double ev_prev = event ? event(x, y) : 1.0;

  for (std::size_t step = 0; step < opts.max_steps; ++step) {
    if ((x - x1) * dir >= 0.0) break;
    if ((x + h - x1) * dir > 0.0) h = x1 - x;

    k[0] = dy;
    bool bad = false;
    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += kA[s][j] * k[j][i];
        ytmp[i] = y[i] + h * acc;
      }
      f(x + kC[s] * h, ytmp, k[s]);
      if (any_nan(k[s])) {
        bad = true;
        break;
      }
    }

    double err = 0.0;
    if (!bad) {
      for (std::size_t i = 0; i < dim; ++i) {
        double acc5 = 0.0, acc4 = 0.0;
        for (int s = 0; s < 7; ++s) {
          acc5 += kB5[s] * k[s][i];
          acc4 += kB4[s] * k[s][i];
        }
        ynew[i] = y[i] + h * acc5;
        yerr[i] = h * (acc5 - acc4);
        const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        err = std::max(err, std::abs(yerr[i]) / sc);
      }
      if (any_nan(ynew)) bad = true;
    }

    if (bad || err > 1.0) {
      h *= bad ? 0.25 : std::max(0.2, 0.9 * std::pow(err, -0.25));
      if (std::abs(h) < 1e-15 * (1.0 + std::abs(x)))
        throw std::runtime_error("integrate_ode: step size underflow at x=" + std::to_string(x));
      continue;
    }

    x += h;
    y = ynew;
    f(x, y, dy);
    out.nodes.push_back({x, y, dy});

    if (event) {
      const double ev = event(x, y);
      if (ev_prev > 0.0 && ev <= 0.0) {
        // refine crossing by bisection on cubic-Hermite dense output
        const OdeNode& a = out.nodes[out.nodes.size() - 2];
        const OdeNode& b = out.nodes.back();
        double lo = a.x, hi = b.x;
        std::vector<double> ymid(dim);
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          for (std::size_t i = 0; i < dim; ++i)
            ymid[i] = hermite_cubic(mid, a.x, b.x, a.y[i], b.y[i], a.dy[i], b.dy[i]);
          if (event(mid, ymid) > 0.0)
            lo = mid;
          else
            hi = mid;
        }
        out.event_hit = true;
        out.event_x = 0.5 * (lo + hi);
        out.event_y.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
          out.event_y[i] = hermite_cubic(out.event_x, a.x, b.x, a.y[i], b.y[i], a.dy[i], b.dy[i]);
        return out;
      }
      ev_prev = ev;
    }

    const double grow = (err < 1e-12) ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
    h = dir * std::min(std::abs(h) * grow, opts.max_step);
  }
  if ((x - x1) * dir < 0.0)
    throw std::runtime_error("integrate_ode: max step count exceeded");
  return out;
}

double hermite_cubic(double x, double x0, double x1, double f0, double f1, double d0, double d1) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return f0 * (2 * t3 - 3 * t2 + 1) + f1 * (-2 * t3 + 3 * t2) + h * d0 * (t3 - 2 * t2 + t) +
         h * d1 * (t3 - t2);
}

double hermite_cubic_deriv(double x, double x0, double x1, double f0, double f1, double d0,
                           double d1) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  return (f0 * (6 * t2 - 6 * t) + f1 * (-6 * t2 + 6 * t)) / h + d0 * (3 * t2 - 4 * t + 1) +
         d1 * (3 * t2 - 2 * t);
}

CubicInterpolant::CubicInterpolant(std::vector<double> x, std::vector<double> f,
                                   std::vector<double> df)
    : x_(std::move(x)), f_(std::move(f)), df_(std::move(df)) {
  if (x_.size() < 2 || x_.size() != f_.size() || x_.size() != df_.size())
    throw std::invalid_argument("CubicInterpolant: inconsistent node arrays");
  // Fritsch–Carlson clamp: a slope wildly out of proportion to the
  // secant on either side is limited, keeping monotone data monotone.
  for (std::size_t i = 0; i < x_.size(); ++i) {
    double lo = -1e300, hi = 1e300;
    bool constrain = false;
    for (int side = -1; side <= 1; side += 2) {
      const std::size_t j = i + side;
      if ((side < 0 && i == 0) || (side > 0 && j >= x_.size())) continue;
      const double sec = (f_[std::max(i, j)] - f_[std::min(i, j)]) /
                         (x_[std::max(i, j)] - x_[std::min(i, j)]);
      if (sec > 0) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 3.0 * sec);
        constrain = true;
      } else if (sec < 0) {
        hi = std::min(hi, 0.0);
        lo = std::max(lo, 3.0 * sec);
        constrain = true;
      }
    }
    if (constrain && lo <= hi) df_[i] = std::clamp(df_[i], lo, hi);
  }
}

std::size_t CubicInterpolant::locate(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double CubicInterpolant::eval(double x) const {
  const std::size_t i = locate(x);
  return hermite_cubic(x, x_[i], x_[i + 1], f_[i], f_[i + 1], df_[i], df_[i + 1]);
}

double CubicInterpolant::deriv(double x) const {
  const std::size_t i = locate(x);
  return hermite_cubic_deriv(x, x_[i], x_[i + 1], f_[i], f_[i + 1], df_[i], df_[i + 1]);
}

std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree) {
  const int n = static_cast<int>(x.size());
  const int m = degree + 1;
  if (n < m) throw std::invalid_argument("polyfit: not enough points");
  // normal equations with explicit Gaussian elimination; degrees here are tiny
  std::vector<double> A(m * m, 0.0), b(m, 0.0);
  for (int s = 0; s < n; ++s) {
    double p = 1.0;
    std::vector<double> pw(2 * m - 1);
    for (int k = 0; k < 2 * m - 1; ++k) {
      pw[k] = p;
      p *= x[s];
    }
    for (int i = 0; i < m; ++i) {
      b[i] += pw[i] * y[s];
      for (int j = 0; j < m; ++j) A[i * m + j] += pw[i + j];
    }
  }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(A[r * m + col]) > std::abs(A[piv * m + col])) piv = r;
    for (int c = 0; c < m; ++c) std::swap(A[col * m + c], A[piv * m + c]);
    std::swap(b[col], b[piv]);
    const double d = A[col * m + col];
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const double fpiv = A[r * m + col] / d;
      for (int c = col; c < m; ++c) A[r * m + c] -= fpiv * A[col * m + c];
      b[r] -= fpiv * b[col];
    }
  }
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i) out[i] = b[i] / A[i * m + i];
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ss += r * r;
  }
  const double dof = (n > 2) ? static_cast<double>(n - 2) : 1.0;
  fit.slope_sigma = std::sqrt(ss / dof * n / den);
  return fit;
}

std::vector<double> savitzky_golay_derivative(std::span<const double> y, double dx) {
  const std::size_t n = y.size();
  std::vector<double> d(n, 0.0);
  if (n < 5) {
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / dx;
    if (n >= 2) d[n - 1] = d[n - 2];
    return d;
  }
  // quadratic SG window 5: derivative weights (-2,-1,0,1,2)/10
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (-2.0 * y[i - 2] - y[i - 1] + y[i + 1] + 2.0 * y[i + 2]) / (10.0 * dx);
  d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dx);
  d[1] = (y[2] - y[0]) / (2.0 * dx);
  d[n - 2] = (y[n - 1] - y[n - 3]) / (2.0 * dx);
  d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * dx);
  return d;
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97f4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

namespace {

struct Sha256Ctx {
  std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                        0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  unsigned char buf[64];
  std::uint64_t len = 0;
};

constexpr std::uint32_t kShaK[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

void sha_block(Sha256Ctx& c, const unsigned char* p) {
  std::uint32_t w[64];
  for (int i = 0; i < 16; ++i)
    w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
           (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
  for (int i = 16; i < 64; ++i) {
    const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
    const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
    w[i] = w[i - 16] + s0 + w[i - 7] + s1;
  }
  std::uint32_t a = c.h[0], b = c.h[1], cc = c.h[2], d = c.h[3], e = c.h[4], f = c.h[5],
                g = c.h[6], h = c.h[7];
  for (int i = 0; i < 64; ++i) {
    const std::uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
    const std::uint32_t ch = (e & f) ^ (~e & g);
    const std::uint32_t t1 = h + S1 + ch + kShaK[i] + w[i];
    const std::uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
    const std::uint32_t mj = (a & b) ^ (a & cc) ^ (b & cc);
    const std::uint32_t t2 = S0 + mj;
    h = g; g = f; f = e; e = d + t1; d = cc; cc = b; b = a; a = t1 + t2;
  }
  c.h[0] += a; c.h[1] += b; c.h[2] += cc; c.h[3] += d;
  c.h[4] += e; c.h[5] += f; c.h[6] += g; c.h[7] += h;
}

}  // namespace

std::string sha256_hex(std::span<const unsigned char> data) {
  Sha256Ctx c;
  std::size_t i = 0;
  const std::size_t n = data.size();
  while (i + 64 <= n) {
    sha_block(c, data.data() + i);
    i += 64;
  }
  unsigned char tail[128] = {0};
  const std::size_t rem = n - i;
  std::memcpy(tail, data.data() + i, rem);
  tail[rem] = 0x80;
  const std::size_t total = (rem + 9 <= 64) ? 64 : 128;
  const std::uint64_t bits = std::uint64_t(n) * 8;
  for (int b = 0; b < 8; ++b) tail[total - 1 - b] = static_cast<unsigned char>(bits >> (8 * b));
  sha_block(c, tail);
  if (total == 128) sha_block(c, tail + 64);
  char out[65];
  for (int k = 0; k < 8; ++k) std::snprintf(out + 8 * k, 9, "%08x", c.h[k]);
  return std::string(out, 64);
}

std::string sha256_hex(const std::string& data) {
  return sha256_hex(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char*>(data.data()), data.size()));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace bubblesheet
