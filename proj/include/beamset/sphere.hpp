#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "beamset/common.hpp"

namespace beamset {

inline constexpr double pi = 3.14159265358979323846;

struct UnitVec {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 1.0;
};

inline UnitVec operator+(const UnitVec& a, const UnitVec& b) {
  return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
}

inline UnitVec operator-(const UnitVec& a, const UnitVec& b) {
  return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
}

inline UnitVec operator*(double s, const UnitVec& v) {
  return {s * v.x1, s * v.x2, s * v.x3};
}

inline UnitVec operator-(const UnitVec& v) { return {-v.x1, -v.x2, -v.x3}; }

inline double dot(const UnitVec& a, const UnitVec& b) {
  return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
}

inline UnitVec cross(const UnitVec& a, const UnitVec& b) {
  return {a.x2 * b.x3 - a.x3 * b.x2, a.x3 * b.x1 - a.x1 * b.x3,
          a.x1 * b.x2 - a.x2 * b.x1};
}

inline double norm(const UnitVec& v) { return std::sqrt(dot(v, v)); }

inline UnitVec normalize(const UnitVec& v) {
  const double n = norm(v);
  if (n < 1e-300) throw numeric_error("normalize: vector too close to zero");
  return {v.x1 / n, v.x2 / n, v.x3 / n};
}

inline bool is_unit(const UnitVec& v, double tol = 1e-12) {
  return std::abs(norm(v) - 1.0) <= tol;
}

// Angle in [0, pi] between two unit vectors; atan2 form stays accurate for
// nearly parallel and nearly antipodal pairs where acos(dot) loses digits.
inline double angle_between(const UnitVec& a, const UnitVec& b) {
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

// Right-handed orthonormal frame (a, b, pole).
struct Frame {
  UnitVec a{1.0, 0.0, 0.0};
  UnitVec b{0.0, 1.0, 0.0};
  UnitVec pole{0.0, 0.0, 1.0};
};

inline bool frame_is_orthonormal(const Frame& f, double tol = 1e-9) {
  if (!is_unit(f.a, tol) || !is_unit(f.b, tol) || !is_unit(f.pole, tol))
    return false;
  if (std::abs(dot(f.a, f.b)) > tol || std::abs(dot(f.a, f.pole)) > tol ||
      std::abs(dot(f.b, f.pole)) > tol)
    return false;
  const UnitVec c = cross(f.a, f.b);
  return norm(c - f.pole) <= 1e-6;
}

// Frame whose pole is p, obtained by the minimal rotation taking (0,0,1)
// to p applied to the standard basis.  Continuous everywhere except the
// south pole, where the rotation by pi about the x1 axis is used.
inline Frame canonical_frame(const UnitVec& p) {
  if (!is_unit(p, 1e-12))
    throw numeric_error("canonical_frame: pole is not a unit vector");
  const double t = 1.0 + p.x3;
  if (t < 1e-15) {
    return Frame{{1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}};
  }
  Frame f;
  f.a = {p.x3 + p.x2 * p.x2 / t, -p.x1 * p.x2 / t, -p.x1};
  f.b = {-p.x1 * p.x2 / t, p.x3 + p.x1 * p.x1 / t, -p.x2};
  f.pole = p;
  return f;
}

struct PoleSet {
  std::vector<UnitVec> poles;
  double d_min = std::numeric_limits<double>::infinity();
  std::size_t m = 0;
  // Set when the pole count was derived from a density and a degree.
  double density = std::numeric_limits<double>::quiet_NaN();
  int degree = 0;
  std::uint64_t seed = 0;
};

struct SeparationReport {
  double d_min = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;
  bool degenerate = false;  // fewer than two poles, bounds are vacuous
};

struct StripPartition {
  double delta = 0.0;
  int n_strips = 0;
  std::vector<int> counts;  // counts[l-1] = poles at angle in ((l-1)*delta, l*delta]
};

namespace detail {

inline double min_pairwise_angle(const std::vector<UnitVec>& pts) {
  if (pts.size() < 2) return std::numeric_limits<double>::infinity();
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      d = std::min(d, angle_between(pts[i], pts[j]));
  return d;
}

// Uniform double in [0,1) from the top 53 bits of the engine output.
// Avoids std::uniform_real_distribution, whose output is unspecified
// across implementations; mt19937_64 itself is fully portable.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform random rotation from three uniforms (Shoemake quaternion method),
// returned as a 3x3 matrix in row-major order.
inline std::array<double, 9> random_rotation(std::mt19937_64& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double u3 = uniform01(rng);
  const double s1 = std::sqrt(1.0 - u1), s2 = std::sqrt(u1);
  const double qx = s1 * std::sin(2.0 * pi * u2);
  const double qy = s1 * std::cos(2.0 * pi * u2);
  const double qz = s2 * std::sin(2.0 * pi * u3);
  const double qw = s2 * std::cos(2.0 * pi * u3);
  return {1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qz * qw),
          2 * (qx * qz + qy * qw),     2 * (qx * qy + qz * qw),
          1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qx * qw),
          2 * (qx * qz - qy * qw),     2 * (qy * qz + qx * qw),
          1 - 2 * (qx * qx + qy * qy)};
}

inline UnitVec apply_rotation(const std::array<double, 9>& r, const UnitVec& v) {
  return {r[0] * v.x1 + r[1] * v.x2 + r[2] * v.x3,
          r[3] * v.x1 + r[4] * v.x2 + r[5] * v.x3,
          r[6] * v.x1 + r[7] * v.x2 + r[8] * v.x3};
}

// Fibonacci spiral lattice with half-step offsets in z.
inline std::vector<UnitVec> fibonacci_lattice(std::size_t m) {
  const double golden_angle = pi * (3.0 - std::sqrt(5.0));
  std::vector<UnitVec> pts(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double z = -1.0 + (2.0 * static_cast<double>(i) + 1.0) /
                                static_cast<double>(m);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double theta = golden_angle * static_cast<double>(i);
    pts[i] = {rho * std::cos(theta), rho * std::sin(theta), z};
  }
  return pts;
}

// Synchronous repulsion sweeps: every point steps along the tangent away
// from its nearest neighbour, with a step that decays to zero.  Single
// threaded and order-independent within a sweep, so the result depends
// only on the inputs.
inline void repel(std::vector<UnitVec>& pts, int sweeps) {
  const std::size_t m = pts.size();
  if (m < 2) return;
  std::vector<UnitVec> next(m);
  for (int s = 0; s < sweeps; ++s) {
    const double decay = 1.0 - static_cast<double>(s) / sweeps;
    for (std::size_t i = 0; i < m; ++i) {
      double d_i = std::numeric_limits<double>::infinity();
      std::size_t j_near = i;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        const double d = angle_between(pts[i], pts[j]);
        if (d < d_i) {
          d_i = d;
          j_near = j;
        }
      }
      if (d_i > pi - 1e-6) {  // antipodal: no useful tangent direction
        next[i] = pts[i];
        continue;
      }
      const UnitVec& q = pts[j_near];
      UnitVec t = q - dot(q, pts[i]) * pts[i];  // tangent component towards q
      const double tn = norm(t);
      if (tn < 1e-14) {  // coincident points: deterministic escape direction
        const Frame f = canonical_frame(pts[i]);
        t = f.a;
      } else {
        t = (1.0 / tn) * t;
      }
      const double step = 0.08 * decay * std::sin(d_i);
      next[i] = normalize(pts[i] - step * t);
    }
    pts.swap(next);
  }
}

}  // namespace detail

// Quasi-uniform set of m poles: Fibonacci lattice, a seeded uniform random
// rotation, then repulsion sweeps to push the minimum pairwise angle up.
inline PoleSet generate_poles(std::size_t m, std::uint64_t seed) {
  if (m == 0) throw numeric_error("generate_poles: m must be positive");
  if (m > 100000) throw resource_error("generate_poles: m too large");
  std::vector<UnitVec> pts = detail::fibonacci_lattice(m);
  std::mt19937_64 rng(seed);
  const auto rot = detail::random_rotation(rng);
  for (auto& p : pts) p = normalize(detail::apply_rotation(rot, p));
  detail::repel(pts, 200);
  PoleSet ps;
  ps.poles = std::move(pts);
  ps.m = m;
  ps.seed = seed;
  ps.d_min = detail::min_pairwise_angle(ps.poles);
  return ps;
}

// Pole count m = floor(density * (2k+1)) for degree k, then generate_poles.
inline PoleSet poles_from_density(double density, int k, std::uint64_t seed) {
  if (!(density > 0.0) || !(density <= 1.0))
    throw numeric_error("poles_from_density: density must be in (0, 1]");
  if (k < 0) throw numeric_error("poles_from_density: degree must be >= 0");
  const double m_real = density * (2.0 * k + 1.0);
  const auto m = static_cast<std::size_t>(std::floor(m_real));
  if (m == 0)
    throw numeric_error("poles_from_density: density * (2k+1) < 1 yields no poles");
  PoleSet ps = generate_poles(m, seed);
  ps.density = density;
  ps.degree = k;
  return ps;
}

// Separation certificate: with m >= 2 poles the minimum pairwise angle must
// lie in [1/sqrt(m), 6/sqrt(m)].  A single pole is reported degenerate and
// passes vacuously with d_min = +infinity.
inline SeparationReport check_separation(const PoleSet& ps) {
  SeparationReport rep;
  rep.d_min = detail::min_pairwise_angle(ps.poles);
  if (ps.poles.size() < 2) {
    rep.degenerate = true;
    rep.pass = true;
    rep.lower = 0.0;
    rep.upper = std::numeric_limits<double>::infinity();
    return rep;
  }
  const double rm = std::sqrt(static_cast<double>(ps.poles.size()));
  rep.lower = 1.0 / rm;
  rep.upper = 6.0 / rm;
  rep.pass = rep.d_min >= rep.lower && rep.d_min <= rep.upper;
  return rep;
}

// Strip width delta = pi / ceil(pi / d), so that d/2 <= delta <= d and the
// strips tile [0, pi] exactly.
inline double build_delta(double d) {
  if (!(d > 0.0)) throw numeric_error("build_delta: d must be positive");
  const double L = std::ceil(pi / std::min(d, pi));
  return pi / L;
}

// Histogram of angles from pole i to the others over strips
// ((l-1)*delta, l*delta], l = 1..n_strips.
inline StripPartition strip_counts(const PoleSet& ps, std::size_t i,
                                   double delta) {
  if (i >= ps.poles.size())
    throw numeric_error("strip_counts: pole index out of range");
  if (!(delta > 0.0) || delta > pi)
    throw numeric_error("strip_counts: delta must be in (0, pi]");
  StripPartition sp;
  sp.delta = delta;
  sp.n_strips = static_cast<int>(std::ceil(pi / delta - 1e-12));
  sp.counts.assign(static_cast<std::size_t>(sp.n_strips), 0);
  for (std::size_t j = 0; j < ps.poles.size(); ++j) {
    if (j == i) continue;
    const double beta = angle_between(ps.poles[i], ps.poles[j]);
    int l = static_cast<int>(std::ceil(beta / delta));
    l = std::clamp(l, 1, sp.n_strips);
    ++sp.counts[static_cast<std::size_t>(l - 1)];
  }
  return sp;
}

// Text form: one header line `# m=<m> seed=<seed> d_min=<v>`, then one pole
// per line as three space-separated coordinates.
inline void write_pole_set(std::ostream& os, const PoleSet& ps) {
  os << "# m=" << ps.poles.size() << " seed=" << ps.seed
     << " d_min=" << detail::g17(ps.d_min) << "\n";
  for (const auto& p : ps.poles)
    os << detail::g17(p.x1) << " " << detail::g17(p.x2) << " "
       << detail::g17(p.x3) << "\n";
}

inline PoleSet read_pole_set(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# m=", 0) != 0)
    throw numeric_error("read_pole_set: missing header line");
  PoleSet ps;
  {
    std::istringstream hs(line.substr(1));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (key == "seed") ps.seed = std::stoull(val);
    }
  }
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    UnitVec v;
    if (!(ls >> v.x1 >> v.x2 >> v.x3))
      throw numeric_error("read_pole_set: malformed pole line");
    const double dev = std::abs(norm(v) - 1.0);
    if (dev > 1e-9)
      throw numeric_error("read_pole_set: pole is not a unit vector");
    // Keep already-unit vectors bit-exact so write/read round-trips.
    ps.poles.push_back(dev <= 4e-16 ? v : normalize(v));
  }
  if (ps.poles.empty()) throw numeric_error("read_pole_set: no poles");
  ps.m = ps.poles.size();
  ps.d_min = detail::min_pairwise_angle(ps.poles);
  return ps;
}

}  // namespace beamset
