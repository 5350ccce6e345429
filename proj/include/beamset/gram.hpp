#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "beamset/beams.hpp"
#include "beamset/common.hpp"
#include "beamset/linalg.hpp"
#include "beamset/sphere.hpp"

namespace beamset {

namespace detail {

// (cos(beta/2))^(2k) evaluated as exp(2k * log(cos(beta/2))) with
// log(cos(x)) = log1p(-2 sin^2(x/2)), which stays accurate for beta near 0;
// large powers underflow gracefully to zero.  The exact zero at beta = pi
// is enforced by gram_entry's antipodal branch.
inline double half_angle_cos_power(double beta, int k) {
  if (k == 0) return 1.0;
  const double s = std::sin(0.25 * beta);
  const double t = -2.0 * s * s;
  if (t <= -1.0) return 0.0;  // rounding can push beta = pi past the pole
  return std::exp(2.0 * k * std::log1p(t));
}

}  // namespace detail

// <q1, q2> in closed form: modulus (cos(beta/2))^(2k) where beta is the
// angle between the poles, phase read off at a common point of the two
// great circles.  Nearly coincident poles use an equatorial probe point of
// the first frame instead; nearly antipodal poles give exactly zero.
inline std::complex<double> gram_entry(const GaussianBeam& b1,
                                       const GaussianBeam& b2) {
  if (b1.k != b2.k)
    throw numeric_error("gram_entry: beams have different degrees");
  const double beta = angle_between(b1.frame.pole, b2.frame.pole);
  if (beta > pi - 1e-9) return {0.0, 0.0};
  const double rho = detail::half_angle_cos_power(beta, b1.k);
  UnitVec probe;
  if (beta < 1e-9) {
    probe = b1.frame.a;  // any equatorial point of the shared great circle
  } else {
    probe = normalize(cross(b1.frame.pole, b2.frame.pole));
  }
  const std::complex<double> z1 = beam_eval(b1, probe);
  const std::complex<double> z2 = beam_eval(b2, probe);
  const double m1 = std::abs(z1), m2 = std::abs(z2);
  if (m1 <= 0.0 || m2 <= 0.0)
    throw numeric_error("gram_entry: degenerate probe evaluation");
  const std::complex<double> phase = z1 * std::conj(z2) / (m1 * m2);
  return rho * phase;
}

struct GramMatrix {
  HermitianMatrix e;
  std::vector<double> row_sums;  // deleted absolute row sums
  double r_emp = 0.0;            // max deleted row sum
  int k = 0;
  std::size_t m = 0;
};

inline GramMatrix build_gram(const std::vector<GaussianBeam>& beams) {
  if (beams.empty()) throw numeric_error("build_gram: no beams");
  const std::size_t m = beams.size();
  for (const auto& b : beams)
    if (b.k != beams.front().k)
      throw numeric_error("build_gram: beams have different degrees");
  GramMatrix g;
  g.k = beams.front().k;
  g.m = m;
  g.e = HermitianMatrix(m);
  for (std::size_t i = 0; i < m; ++i) {
    g.e(i, i) = 1.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      const std::complex<double> v = gram_entry(beams[i], beams[j]);
      g.e(i, j) = v;
      g.e(j, i) = std::conj(v);
    }
  }
  g.row_sums.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) s += std::abs(g.e(i, j));
    g.row_sums[i] = s;
    g.r_emp = std::max(g.r_emp, s);
  }
  return g;
}

struct GershgorinReport {
  double r_emp = 0.0;
  bool dominant = false;  // every disc stays away from zero: r_emp < 1
  double lower = 0.0;     // 1 - r_emp
  double upper = 0.0;     // 1 + r_emp
  double eig_min = 0.0;
  double eig_max = 0.0;
  bool eig_inside = false;  // eigenvalues confirmed inside [lower, upper]
};

// Diagonal-dominance certificate: unit diagonal and deleted row sums at
// most r_emp confine the spectrum to [1 - r_emp, 1 + r_emp].  The computed
// spectrum is checked against the interval with slack 1e-10.
inline GershgorinReport gershgorin_certificate(const GramMatrix& g) {
  GershgorinReport rep;
  rep.r_emp = g.r_emp;
  rep.dominant = g.r_emp < 1.0;
  rep.lower = 1.0 - g.r_emp;
  rep.upper = 1.0 + g.r_emp;
  const EighResult eg = eigh(g.e);
  rep.eig_min = eg.values.front();
  rep.eig_max = eg.values.back();
  rep.eig_inside =
      rep.eig_min >= rep.lower - 1e-10 && rep.eig_max <= rep.upper + 1e-10;
  return rep;
}

struct RBoundReport {
  double density = 0.0;
  int k = 0;
  double c0 = 0.0;      // e^(1/72)
  double group1 = 0.0;  // nearest-strip term: 7 c0^(-1/D)
  double group2 = 0.0;  // strip-tail term: 1296 D c0^(-1/D)
  double group3 = 0.0;  // wide-angle term: 36 cos(1/8)^(2k) (2k+1)^2
  double r = 0.0;
  bool admissible = false;  // r <= 1/24
};

// Theoretical bound on the maximum deleted row sum of the Gram matrix for a
// separated pole set of density D at degree k.
inline RBoundReport theoretical_r(double density, int k) {
  if (!(density > 0.0) || !(density <= 1.0))
    throw numeric_error("theoretical_r: density must be in (0, 1]");
  if (k < 0) throw numeric_error("theoretical_r: negative degree");
  RBoundReport rep;
  rep.density = density;
  rep.k = k;
  rep.c0 = std::exp(1.0 / 72.0);
  const double decay = std::exp(-1.0 / (72.0 * density));
  rep.group1 = 7.0 * decay;
  rep.group2 = 1296.0 * density * decay;
  const double tk = 2.0 * k + 1.0;
  rep.group3 = 36.0 * tk * tk * detail::half_angle_cos_power(0.25, k);
  rep.r = rep.group1 + rep.group2 + rep.group3;
  rep.admissible = rep.r <= 1.0 / 24.0;
  return rep;
}

struct DensityCheck {
  double density = 0.0;
  double lhs = 0.0;    // (7 + 1296 D) e^(-1/(72 D))
  double bound = 0.04;  // 1/25
  bool pass = false;
};

// Smallness condition on the density: (7 + 1296 D) e^(-1/(72 D)) <= 1/25.
// It is monotone in D, so passing at D certifies every density below D.
inline DensityCheck density_condition(double density) {
  if (!(density > 0.0) || !(density <= 1.0))
    throw numeric_error("density_condition: density must be in (0, 1]");
  DensityCheck chk;
  chk.density = density;
  chk.lhs = (7.0 + 1296.0 * density) * std::exp(-1.0 / (72.0 * density));
  chk.pass = chk.lhs <= chk.bound;
  return chk;
}

struct StripSumBound {
  double delta = 0.0;
  int n_strips = 0;
  std::vector<int> counts;
  std::vector<double> caps;  // caps[0] = 7, caps[l-1] = 36 sin((l-1)d)/d
  bool caps_hold = false;
  double bound = 0.0;   // sum over strips of cap * max modulus in strip
  double row_sum = 0.0; // actual deleted absolute row sum for pole i
  bool row_sum_within_bound = false;
};

// Strip certificate for pole i: with delta = pi/ceil(pi/d_min), strip l
// contributes at most cap_l * (cos((l-1) delta / 2))^(2k) to the deleted
// row sum (strip 1 uses the right endpoint, since separation keeps every
// other pole at angle >= delta).  The packing caps are verified against
// the actual counts, not assumed.
inline StripSumBound strip_sum_bound(const PoleSet& ps, std::size_t i, int k) {
  if (i >= ps.poles.size())
    throw numeric_error("strip_sum_bound: pole index out of range");
  StripSumBound rep;
  if (ps.poles.size() < 2) {
    rep.caps_hold = true;
    rep.row_sum_within_bound = true;
    return rep;
  }
  const double d = detail::min_pairwise_angle(ps.poles);
  if (!(d > 0.0))
    throw numeric_error("strip_sum_bound: coincident poles");
  rep.delta = build_delta(d);
  const StripPartition sp = strip_counts(ps, i, rep.delta);
  rep.n_strips = sp.n_strips;
  rep.counts = sp.counts;
  rep.caps.resize(sp.counts.size());
  rep.caps_hold = true;
  for (int l = 1; l <= sp.n_strips; ++l) {
    double cap;
    double modulus;
    if (l == 1) {
      cap = 7.0;
      modulus = detail::half_angle_cos_power(rep.delta, k);
    } else {
      const double beta0 = (l - 1) * rep.delta;
      cap = 36.0 * std::sin(beta0) / rep.delta;
      modulus = detail::half_angle_cos_power(beta0, k);
    }
    rep.caps[l - 1] = cap;
    if (sp.counts[l - 1] > cap + 1e-9) rep.caps_hold = false;
    rep.bound += cap * modulus;
  }
  for (std::size_t j = 0; j < ps.poles.size(); ++j) {
    if (j == i) continue;
    rep.row_sum += detail::half_angle_cos_power(
        angle_between(ps.poles[i], ps.poles[j]), k);
  }
  rep.row_sum_within_bound = rep.row_sum <= rep.bound + 1e-12;
  return rep;
}

}  // namespace beamset
