#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "beamset/common.hpp"
#include "beamset/sphere.hpp"

namespace beamset {

namespace detail {

// Gauss-Legendre nodes (ascending) and weights on [-1, 1].  Newton iteration
// on P_n from the asymptotic initial guess; nodes are computed for one half
// and mirrored, so the rule is exactly symmetric.
inline void gauss_legendre(int n, std::vector<double>& x,
                           std::vector<double>& w) {
  if (n < 1) throw numeric_error("gauss_legendre: need at least one node");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Guess for the i-th root of P_n in descending order.
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      // p0 = P_n(z); derivative from the standard identity.
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double wt = 2.0 / ((1.0 - z * z) * pp * pp);
    x[i] = -z;
    w[i] = wt;
    x[n - 1 - i] = z;
    w[n - 1 - i] = wt;
  }
  if (n % 2 == 1) x[half - 1] = 0.0;
}

}  // namespace detail

// Product quadrature on the unit sphere: Gauss-Legendre in cos(phi) times a
// uniform trapezoid rule in theta.  Nodes are generated on the fly from the
// two 1-D tables, so the grid stays O(n_phi + n_theta) in memory.
struct SphereGrid {
  std::vector<double> x;        // cos(phi), ascending
  std::vector<double> gl_w;     // Gauss-Legendre weights
  std::vector<double> sin_phi;  // sqrt(1 - x^2)
  std::vector<double> cos_t;    // cos(theta_a)
  std::vector<double> sin_t;    // sin(theta_a)
  double theta_w = 0.0;         // 2*pi / n_theta
  int degree = 0;               // polynomial degree the rule integrates exactly

  int n_phi() const { return static_cast<int>(x.size()); }
  int n_theta() const { return static_cast<int>(cos_t.size()); }
  std::size_t n_nodes() const {
    return static_cast<std::size_t>(n_phi()) * n_theta();
  }
  double ring_weight(int r) const { return gl_w[r] * theta_w; }
  UnitVec node(int r, int a) const {
    return {sin_phi[r] * cos_t[a], sin_phi[r] * sin_t[a], x[r]};
  }
};

inline SphereGrid make_grid(int n_phi, int n_theta) {
  if (n_phi < 1 || n_theta < 1)
    throw numeric_error("make_grid: grid dimensions must be positive");
  if (n_phi > 60000 || n_theta > 120000)
    throw resource_error("make_grid: grid dimension exceeds cap");
  SphereGrid g;
  detail::gauss_legendre(n_phi, g.x, g.gl_w);
  g.sin_phi.resize(n_phi);
  for (int r = 0; r < n_phi; ++r)
    g.sin_phi[r] = std::sqrt(std::max(0.0, 1.0 - g.x[r] * g.x[r]));
  g.cos_t.resize(n_theta);
  g.sin_t.resize(n_theta);
  for (int a = 0; a < n_theta; ++a) {
    const double t = 2.0 * pi * a / n_theta;
    g.cos_t[a] = std::cos(t);
    g.sin_t[a] = std::sin(t);
  }
  g.theta_w = 2.0 * pi / n_theta;
  g.degree = std::min(2 * n_phi - 1, n_theta - 1);
  return g;
}

// Grid exact for every spherical polynomial of Cartesian degree <= N.
inline SphereGrid build_grid(int N) {
  if (N < 0) throw numeric_error("build_grid: negative degree");
  if (N > 100000) throw resource_error("build_grid: degree exceeds cap");
  SphereGrid g = make_grid(N / 2 + 1, N + 1);
  g.degree = N;
  return g;
}

namespace detail {

// Deterministic reduction over rings.  Rings are split into a fixed number
// of blocks (independent of thread count); block partials are accumulated
// independently, then combined in block order with Kahan compensation for
// the summed slots and max for the trailing slots.  The result is therefore
// identical no matter how many threads execute the blocks.
template <class RingFn>
std::vector<double> ring_block_reduce(int n_rings, int width_sum,
                                      int width_max, RingFn&& ring_fn) {
  const int width = width_sum + width_max;
  const int n_blocks = std::min(n_rings, 256);
  std::vector<std::vector<double>> partials(
      n_blocks, std::vector<double>(width, 0.0));
  for (auto& p : partials)
    for (int w = width_sum; w < width; ++w)
      p[w] = -std::numeric_limits<double>::infinity();

  auto run_block = [&](int b) {
    const int r0 = static_cast<int>(static_cast<long long>(n_rings) * b /
                                    n_blocks);
    const int r1 = static_cast<int>(static_cast<long long>(n_rings) * (b + 1) /
                                    n_blocks);
    auto& acc = partials[b];
    std::vector<double> comp(width_sum, 0.0);
    std::vector<double> ring(width, 0.0);
    for (int r = r0; r < r1; ++r) {
      std::fill(ring.begin(), ring.begin() + width_sum, 0.0);
      std::fill(ring.begin() + width_sum, ring.end(),
                -std::numeric_limits<double>::infinity());
      ring_fn(r, ring.data());
      for (int w = 0; w < width_sum; ++w) {  // Kahan merge of the ring sum
        const double y = ring[w] - comp[w];
        const double t = acc[w] + y;
        comp[w] = (t - acc[w]) - y;
        acc[w] = t;
      }
      for (int w = width_sum; w < width; ++w)
        acc[w] = std::max(acc[w], ring[w]);
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  const int n_threads = std::max(1, std::min<int>(hw ? hw : 1, n_blocks));
  if (n_threads == 1) {
    for (int b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (int b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1))
          run_block(b);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<double> out(width, 0.0);
  std::vector<double> comp(width_sum, 0.0);
  for (int w = width_sum; w < width; ++w)
    out[w] = -std::numeric_limits<double>::infinity();
  for (int b = 0; b < n_blocks; ++b) {
    for (int w = 0; w < width_sum; ++w) {
      const double y = partials[b][w] - comp[w];
      const double t = out[w] + y;
      comp[w] = (t - out[w]) - y;
      out[w] = t;
    }
    for (int w = width_sum; w < width; ++w)
      out[w] = std::max(out[w], partials[b][w]);
  }
  return out;
}

// |z|^p via s2 = |z|^2: exact repeated multiplication for integer p,
// pow otherwise.  One sqrt for odd integers.
inline double abs_power_from_sq(double s2, double p) {
  const double ip = std::floor(p);
  if (ip == p && p <= 64.0) {
    const long n = static_cast<long>(ip);
    double v = (n % 2 != 0) ? std::sqrt(s2) : 1.0;
    double base = s2;
    for (long e = n / 2; e > 0; e >>= 1) {
      if (e & 1) v *= base;
      base *= base;
    }
    return v;
  }
  return std::pow(s2, 0.5 * p);
}

}  // namespace detail

// <f, g> = integral of f * conj(g) over the sphere.
template <class F, class G>
std::complex<double> inner_product(F&& f, G&& g, const SphereGrid& grid) {
  auto acc = detail::ring_block_reduce(
      grid.n_phi(), 2, 0, [&](int r, double* out) {
        double re = 0.0, im = 0.0;
        for (int a = 0; a < grid.n_theta(); ++a) {
          const UnitVec y = grid.node(r, a);
          const std::complex<double> v = f(y) * std::conj(g(y));
          re += v.real();
          im += v.imag();
        }
        const double w = grid.ring_weight(r);
        out[0] = w * re;
        out[1] = w * im;
      });
  return {acc[0], acc[1]};
}

// Lp norm over the sphere; p = inf returns the maximum over grid nodes.
template <class F>
double lp_norm(F&& f, double p, const SphereGrid& grid) {
  if (!(p >= 1.0)) throw numeric_error("lp_norm: p must be in [1, inf]");
  if (std::isinf(p)) {
    auto acc = detail::ring_block_reduce(
        grid.n_phi(), 0, 1, [&](int r, double* out) {
          double mx = 0.0;
          for (int a = 0; a < grid.n_theta(); ++a)
            mx = std::max(mx, std::norm(f(grid.node(r, a))));
          out[0] = mx;
        });
    return std::sqrt(acc[0]);
  }
  auto acc = detail::ring_block_reduce(
      grid.n_phi(), 1, 0, [&](int r, double* out) {
        double s = 0.0;
        for (int a = 0; a < grid.n_theta(); ++a)
          s += detail::abs_power_from_sq(std::norm(f(grid.node(r, a))), p);
        out[0] = grid.ring_weight(r) * s;
      });
  return std::pow(acc[0], 1.0 / p);
}

struct IntegralIdentity {
  int k = 0;
  double quadrature = 0.0;
  double closed_form = 0.0;
  double abs_error = 0.0;
  bool pass = false;
};

// Checks integral over [0,pi] of sin(phi) * cos(phi/2)^(2k) dphi = 2/(k+1)
// by Gauss-Legendre quadrature in x = cos(phi), where the integrand becomes
// the degree-k polynomial ((1+x)/2)^k.
inline IntegralIdentity integral_identity_check(int k) {
  if (k < 0) throw numeric_error("integral_identity_check: negative degree");
  if (k > 100000)
    throw resource_error("integral_identity_check: degree exceeds cap");
  std::vector<double> x, w;
  detail::gauss_legendre(std::max(16, k / 2 + 2), x, w);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += w[i] * detail::abs_power_from_sq(0.5 * (1.0 + x[i]), 2.0 * k);
  IntegralIdentity rep;
  rep.k = k;
  rep.quadrature = s;
  rep.closed_form = 2.0 / (k + 1.0);
  rep.abs_error = std::abs(s - rep.closed_form);
  rep.pass = rep.abs_error <= 1e-12;
  return rep;
}

struct TubeMass {
  double c = 0.0;        // width in units of k^(-1/2), if supplied
  double w = 0.0;        // angular half-width of the tube
  double mass_in = 0.0;  // integral of |f|^2 over the tube
  double mass_out = 0.0;
  double total = 0.0;
  bool resolved = false;  // grid has >= 4*pi/w rings across the sphere
};

// Mass of |f|^2 inside the tube of angular half-width w around the great
// circle orthogonal to frame.pole: membership is |pole . y| <= sin(w).
template <class F>
TubeMass tube_mass(F&& f, const Frame& frame, double w,
                   const SphereGrid& grid) {
  if (!(w > 0.0) || w > pi / 2)
    throw numeric_error("tube_mass: width must be in (0, pi/2]");
  const double sw = std::sin(w);
  const UnitVec p = frame.pole;
  auto acc = detail::ring_block_reduce(
      grid.n_phi(), 2, 0, [&](int r, double* out) {
        double s_in = 0.0, s_out = 0.0;
        for (int a = 0; a < grid.n_theta(); ++a) {
          const UnitVec y = grid.node(r, a);
          const double v = std::norm(f(y));
          if (std::abs(dot(p, y)) <= sw)
            s_in += v;
          else
            s_out += v;
        }
        const double rw = grid.ring_weight(r);
        out[0] = rw * s_in;
        out[1] = rw * s_out;
      });
  TubeMass tm;
  tm.w = w;
  tm.mass_in = acc[0];
  tm.mass_out = acc[1];
  tm.total = acc[0] + acc[1];
  tm.resolved = grid.n_phi() >= 4.0 * pi / w;
  return tm;
}

}  // namespace beamset
