#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "beamset/beams.hpp"
#include "beamset/common.hpp"
#include "beamset/ortho.hpp"
#include "beamset/quad.hpp"
#include "beamset/sphere.hpp"

namespace beamset {

struct BeamLocalization {
  int k = 0;
  double c = 0.0;  // width in units of k^(-1/2)
  double w = 0.0;  // angular half-width, c * k^(-1/2)
  double mass_in = 0.0;
  double mass_out = 0.0;
  double total = 0.0;
  double mass_ratio = 0.0;      // mass_in / total
  double gaussian_limit = 0.0;  // erf(c), the large-k profile value
  double profile_error = 0.0;   // |mass_ratio - erf(c)|
  bool resolved = false;
};

// Mass profile of a single beam in its own tube of half-width c*k^(-1/2).
// As k grows the in-tube fraction approaches erf(c).
inline BeamLocalization beam_localization(const GaussianBeam& b, double c,
                                          const SphereGrid& grid) {
  if (b.k <= 0)
    throw numeric_error("beam_localization: degree must be positive");
  if (!(c > 0.0)) throw numeric_error("beam_localization: c must be positive");
  BeamLocalization rep;
  rep.k = b.k;
  rep.c = c;
  rep.w = c / std::sqrt(static_cast<double>(b.k));
  const TubeMass tm =
      tube_mass([&](const UnitVec& y) { return beam_eval(b, y); }, b.frame,
                rep.w, grid);
  rep.mass_in = tm.mass_in;
  rep.mass_out = tm.mass_out;
  rep.total = tm.total;
  rep.mass_ratio = tm.total > 0.0 ? tm.mass_in / tm.total : 0.0;
  rep.gaussian_limit = std::erf(c);
  rep.profile_error = std::abs(rep.mass_ratio - rep.gaussian_limit);
  rep.resolved = tm.resolved;
  return rep;
}

// In-tube mass fraction of a degree-k beam by exact 1-D quadrature: in the
// beam's own frame |Q|^2 depends only on x = pole.y, so
//   mass_in = 2 pi c_k^2 * integral of (1 - x^2)^k over |x| <= sin(w),
// a degree-2k polynomial integrated exactly with k+1 Gauss-Legendre nodes.
// Serves as an independent cross-check of the grid-based tube mass.
inline double beam_profile_exact(int k, double c) {
  if (k <= 0) throw numeric_error("beam_profile_exact: degree must be positive");
  if (!(c > 0.0)) throw numeric_error("beam_profile_exact: c must be positive");
  if (k > 200000) throw resource_error("beam_profile_exact: degree too large");
  const double w = c / std::sqrt(static_cast<double>(k));
  const double s = std::sin(std::min(w, pi / 2));
  std::vector<double> x, wt;
  detail::gauss_legendre(k + 1, x, wt);
  const double ck = normalization_constant(k);
  const double lc = 2.0 * std::log(ck) + std::log(2.0 * pi) + std::log(s);
  double mass = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = s * x[i];
    // (1 - xi^2)^k in log space; xi is bounded away from 1 by construction.
    mass += wt[i] * std::exp(lc + k * std::log1p(-xi * xi));
  }
  return mass;
}

struct LocalizationReport {
  std::size_t index = 0;
  int k = 0;
  double c = 0.0;
  double w = 0.0;
  // Raw beam q_i in its own tube.
  double beam_mass_in = 0.0;
  double beam_mass_out = 0.0;
  double beam_total = 0.0;
  // Orthonormalized u_i in the same tube.
  double mass_in = 0.0;
  double mass_out = 0.0;
  double total = 0.0;
  double norm_in = 0.0;   // sqrt(mass_in)
  double norm_out = 0.0;  // sqrt(mass_out)
  // Inside: ||u_i||_G >= F_ii ||q_i||_G - R'_i(F) max_j ||q_j||.
  double in_chain_lower = 0.0;
  bool in_chain_ok = false;
  // The constant bound norm_in >= 1/8, certified when F_ii >= 3/4,
  // R'_i(F) <= 1/4 and the beam keeps at least half its norm in the tube.
  bool eighth_applicable = false;
  bool eighth_ok = false;       // norm_in >= 1/8
  bool mass_eighth_ok = false;  // mass_in >= 1/8
  // Outside: ||u_i||_out <= F_ii ||q_i||_out + R'_i(F) max_j ||q_j||.
  double out_chain_upper = 0.0;
  bool out_chain_ok = false;
  // Theory form of the outside bound, (1 + 6r) eps + 6r with r = |||E - I|||.
  double out_theory_upper = 0.0;
  bool resolved = false;
};

// Localization of every u_i in its own tube of half-width c*k^(-1/2),
// computed in one grid pass together with the raw beam masses.
inline std::vector<LocalizationReport> ortho_localization_all(
    const OrthoSet& os, double c, const SphereGrid& grid,
    double drop_tol = 0.0) {
  const int k = os.beams.front().k;
  if (k <= 0)
    throw numeric_error("ortho_localization: degree must be positive");
  if (!(c > 0.0)) throw numeric_error("ortho_localization: c must be positive");
  const double w = c / std::sqrt(static_cast<double>(k));
  const double sw = std::sin(w);
  const auto ctx = detail::family_context(os.beams, drop_tol);
  const std::size_t m = os.beams.size();
  const HermitianMatrix* f = &os.f;

  // Per beam: u_in, u_out, q_in, q_out.
  auto acc = detail::ring_block_reduce(
      grid.n_phi(), static_cast<int>(4 * m), 0, [&](int r, double* out) {
        const double x = grid.x[r];
        const double sp = grid.sin_phi[r];
        std::vector<int> active;
        detail::ring_active_beams(os.beams, ctx, x, sp, active);
        if (active.empty()) return;
        std::vector<std::complex<double>> q(m);
        std::vector<int> nz;
        for (int a = 0; a < grid.n_theta(); ++a) {
          const UnitVec y = grid.node(r, a);
          nz.clear();
          for (int j : active) {
            const std::complex<double> v =
                detail::family_beam_value(os.beams[j], ctx, y);
            if (v.real() != 0.0 || v.imag() != 0.0) {
              q[j] = v;
              nz.push_back(j);
            }
          }
          if (nz.empty()) continue;
          for (std::size_t i = 0; i < m; ++i) {
            std::complex<double> ui;
            for (int j : nz) ui += (*f)(i, j) * q[j];
            const double su = std::norm(ui);
            const double sq =
                std::find(nz.begin(), nz.end(), static_cast<int>(i)) != nz.end()
                    ? std::norm(q[i])
                    : 0.0;
            if (su == 0.0 && sq == 0.0) continue;
            const bool inside =
                std::abs(dot(os.beams[i].frame.pole, y)) <= sw;
            double* row = out + 4 * i;
            row[inside ? 0 : 1] += su;
            row[inside ? 2 : 3] += sq;
          }
        }
        const double rw = grid.ring_weight(r);
        for (std::size_t idx = 0; idx < 4 * m; ++idx) out[idx] *= rw;
      });

  const bool resolved = grid.n_phi() >= 4.0 * pi / w;
  double max_q_norm = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    max_q_norm =
        std::max(max_q_norm, std::sqrt(acc[4 * i + 2] + acc[4 * i + 3]));

  std::vector<LocalizationReport> reps(m);
  const double slack = 1e-9;
  for (std::size_t i = 0; i < m; ++i) {
    LocalizationReport& rep = reps[i];
    rep.index = i;
    rep.k = k;
    rep.c = c;
    rep.w = w;
    rep.mass_in = acc[4 * i];
    rep.mass_out = acc[4 * i + 1];
    rep.total = rep.mass_in + rep.mass_out;
    rep.beam_mass_in = acc[4 * i + 2];
    rep.beam_mass_out = acc[4 * i + 3];
    rep.beam_total = rep.beam_mass_in + rep.beam_mass_out;
    rep.norm_in = std::sqrt(rep.mass_in);
    rep.norm_out = std::sqrt(rep.mass_out);
    const double fii = os.f(i, i).real();
    const double ri = os.f_row_sums[i];
    const double q_norm_in = std::sqrt(rep.beam_mass_in);
    const double q_norm_out = std::sqrt(rep.beam_mass_out);
    rep.in_chain_lower = fii * q_norm_in - ri * max_q_norm;
    rep.in_chain_ok = rep.norm_in >= rep.in_chain_lower - slack;
    rep.eighth_applicable =
        fii >= 0.75 - slack && ri <= 0.25 + slack && q_norm_in >= 0.5;
    rep.eighth_ok = rep.norm_in >= 0.125 - slack;
    rep.mass_eighth_ok = rep.mass_in >= 0.125 - slack;
    rep.out_chain_upper = fii * q_norm_out + ri * max_q_norm;
    rep.out_chain_ok = rep.norm_out <= rep.out_chain_upper + slack;
    rep.out_theory_upper =
        (1.0 + 6.0 * os.b_norm) * q_norm_out + 6.0 * os.b_norm;
    rep.resolved = resolved;
  }
  return reps;
}

inline LocalizationReport ortho_localization(const OrthoSet& os, std::size_t i,
                                             double c, const SphereGrid& grid,
                                             double drop_tol = 0.0) {
  if (i >= os.beams.size())
    throw numeric_error("ortho_localization: index out of range");
  return ortho_localization_all(os, c, grid, drop_tol)[i];
}

}  // namespace beamset
