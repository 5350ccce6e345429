#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "beamset/common.hpp"
#include "beamset/sphere.hpp"

namespace beamset {

// Degree-k sectoral harmonic concentrated on the great circle orthogonal to
// frame.pole, in Cartesian closed form
//   Q(y) = c_k * ((a.y) + i (b.y))^k,
// an exact degree-k polynomial restricted to the sphere, unit L2 norm.
struct GaussianBeam {
  int k = 0;
  Frame frame;
  double c_k = 0.0;
  // Smallest u = (a.y)^2 + (b.y)^2 for which u^(k/2) does not underflow to
  // zero; below it the value is returned as exact zero.
  double u_floor = 0.0;
};

// c_k with c_k^2 = (2k+1)!! / (4*pi*(2k)!!), accumulated in log space so
// arbitrary degrees stay in range:
// log((2k+1)!!/(2k)!!) = sum_{i=1..k} log1p(1/(2i)).
inline double normalization_constant(int k) {
  if (k < 0) throw numeric_error("normalization_constant: negative degree");
  double log_ratio = 0.0;
  for (int i = 1; i <= k; ++i) log_ratio += std::log1p(0.5 / i);
  return std::exp(0.5 * (log_ratio - std::log(4.0 * pi)));
}

inline GaussianBeam make_beam(int k, const Frame& frame) {
  if (k < 0) throw numeric_error("make_beam: negative degree");
  if (k > 10000000) throw resource_error("make_beam: degree too large");
  if (!frame_is_orthonormal(frame))
    throw numeric_error("make_beam: frame is not orthonormal right-handed");
  GaussianBeam b;
  b.k = k;
  b.frame = frame;
  b.c_k = normalization_constant(k);
  b.u_floor = k > 0 ? std::exp(-1490.4 / k) : 0.0;
  return b;
}

inline std::complex<double> beam_eval(const GaussianBeam& b, const UnitVec& y) {
  if (b.k == 0) return {b.c_k, 0.0};
  const double re = dot(b.frame.a, y);
  const double im = dot(b.frame.b, y);
  const double u = re * re + im * im;
  if (u < b.u_floor) return {0.0, 0.0};
  const double mod = b.c_k * std::exp(0.5 * b.k * std::log(u));
  const double ang = b.k * std::atan2(im, re);
  return {mod * std::cos(ang), mod * std::sin(ang)};
}

// Sup norm of a unit beam: |Q(y)| = c_k * u^(k/2) <= c_k, attained on the
// beam's great circle.
inline double beam_sup_norm(const GaussianBeam& b) { return b.c_k; }

// Sharp Lp growth exponent for degree-k spherical harmonics on the
// 2-sphere: norms scale as k^sigma(p).
inline double sigma(double p) {
  if (!(p >= 2.0)) throw numeric_error("sigma: p must be in [2, inf]");
  if (std::isinf(p)) return 0.5;
  if (p <= 6.0) return 0.5 * (0.5 - 1.0 / p);
  return 2.0 * (0.5 - 1.0 / p) - 0.5;
}

struct SigmaExponent {
  double p = 2.0;
  double value = 0.0;
};

inline SigmaExponent sigma_exponent(double p) { return {p, sigma(p)}; }

// Growth exponent certified by the beam construction for large p: the
// minimum Lp norm grows at least like k^(1/4 - 1/(2p)).  Defined for
// p in [6, inf]; at p = 6 it coincides with sigma(6) = 1/6.
inline double corollary_exponent(double p) {
  if (!(p >= 6.0))
    throw numeric_error("corollary_exponent: p must be in [6, inf]");
  if (std::isinf(p)) return 0.25;
  return 0.25 - 0.5 / p;
}

}  // namespace beamset
