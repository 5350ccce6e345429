#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "beamset/beams.hpp"
#include "beamset/common.hpp"
#include "beamset/gram.hpp"
#include "beamset/linalg.hpp"
#include "beamset/quad.hpp"
#include "beamset/sphere.hpp"

namespace beamset {

// Beam family and the transform F = E^{-1/2} that orthonormalizes it:
// u_i = sum_j F_ij q_j.
struct OrthoSet {
  std::vector<GaussianBeam> beams;
  HermitianMatrix f;
  double b_norm = 0.0;  // |||E - I|||, the maximum deleted row sum of E
  double h_norm = 0.0;  // |||F - I|||
  double f_diag_min = 0.0;
  double f_diag_max = 0.0;
  std::vector<double> f_row_sums;  // deleted absolute row sums of F
  double f_row_max = 0.0;
  double fef_residual = 0.0;  // max |(F E F - I)_ij|
  double e_min_eigenvalue = 0.0;
  int series_terms = 0;  // 0 when the series validator was skipped
  double series_agreement = std::numeric_limits<double>::quiet_NaN();
};

// Builds F by the eigendecomposition route and, whenever |||E - I||| < 1,
// revalidates it against the binomial series route.  A disagreement beyond
// 10x the agreement tolerance aborts instead of silently preferring one.
inline OrthoSet orthonormalize(const std::vector<GaussianBeam>& beams,
                               const GramMatrix& gram,
                               double agree_tol = 1e-9) {
  if (beams.size() != gram.m)
    throw numeric_error("orthonormalize: beam count does not match Gram size");
  OrthoSet os;
  os.beams = beams;
  os.b_norm = gram.r_emp;
  os.f = inv_sqrt_eigen(gram.e, 1e-12, &os.e_min_eigenvalue);

  if (gram.r_emp < 1.0) {
    const SeriesResult sr = inv_sqrt_series(gram.e, 1e-12);
    os.series_terms = sr.terms;
    os.series_agreement = max_abs_entry(os.f - sr.f);
    if (os.series_agreement > 10.0 * agree_tol)
      throw numeric_error(
          "orthonormalize: eigendecomposition and series routes disagree by " +
          detail::g17(os.series_agreement));
  }

  const std::size_t m = beams.size();
  os.f_diag_min = std::numeric_limits<double>::infinity();
  os.f_diag_max = -std::numeric_limits<double>::infinity();
  os.f_row_sums.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = os.f(i, i).real();
    os.f_diag_min = std::min(os.f_diag_min, d);
    os.f_diag_max = std::max(os.f_diag_max, d);
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) s += std::abs(os.f(i, j));
    os.f_row_sums[i] = s;
    os.f_row_max = std::max(os.f_row_max, s);
  }
  os.h_norm = matrix_inf_norm(os.f - ComplexMatrix::identity(m));
  os.fef_residual = max_abs_entry(os.f * gram.e * os.f -
                                  ComplexMatrix::identity(m));
  return os;
}

inline std::complex<double> ortho_eval(const OrthoSet& os, std::size_t i,
                                       const UnitVec& y) {
  if (i >= os.beams.size())
    throw numeric_error("ortho_eval: index out of range");
  std::complex<double> s = 0.0;
  for (std::size_t j = 0; j < os.beams.size(); ++j)
    s += os.f(i, j) * beam_eval(os.beams[j], y);
  return s;
}

struct FBoundsReport {
  double r = 0.0;
  double six_r = 0.0;
  double diag_min = 0.0;
  double diag_max = 0.0;
  double row_max = 0.0;
  bool diag_ok = false;  // 1 - 6r <= F_ii <= 1 + 6r
  bool row_ok = false;   // deleted row sums of F at most 6r
  bool strong_applicable = false;  // r <= 1/24
  bool strong_diag_ok = false;     // 3/4 <= F_ii <= 5/4
  bool strong_row_ok = false;      // deleted row sums at most 1/4
};

inline FBoundsReport f_bounds_check(const OrthoSet& os, double r) {
  FBoundsReport rep;
  rep.r = r;
  rep.six_r = 6.0 * r;
  rep.diag_min = os.f_diag_min;
  rep.diag_max = os.f_diag_max;
  rep.row_max = os.f_row_max;
  const double slack = 1e-12;
  rep.diag_ok = rep.diag_min >= 1.0 - rep.six_r - slack &&
                rep.diag_max <= 1.0 + rep.six_r + slack;
  rep.row_ok = rep.row_max <= rep.six_r + slack;
  rep.strong_applicable = r <= 1.0 / 24.0;
  rep.strong_diag_ok =
      rep.diag_min >= 0.75 - slack && rep.diag_max <= 1.25 + slack;
  rep.strong_row_ok = rep.row_max <= 0.25 + slack;
  return rep;
}

namespace detail {

// Shared precomputation for the family evaluation passes.  All beams of a
// family have one degree, hence one normalization constant and one underflow
// floor.  drop_tol additionally treats |value| < drop_tol as zero, which
// tightens the cutoff u_cut on u = 1 - (pole.y)^2 and enables skipping
// entire rings whose minimal |pole.y| keeps every node below the cutoff.
struct FamilyContext {
  int k = 0;
  double c_k = 0.0;
  double u_cut = 0.0;
  std::vector<double> pole_xy;  // hypot(pole.x1, pole.x2) per beam
};

inline FamilyContext family_context(const std::vector<GaussianBeam>& beams,
                                    double drop_tol) {
  if (beams.empty()) throw numeric_error("family evaluation: no beams");
  FamilyContext ctx;
  ctx.k = beams.front().k;
  ctx.c_k = beams.front().c_k;
  for (const auto& b : beams)
    if (b.k != ctx.k)
      throw numeric_error("family evaluation: beams have different degrees");
  ctx.u_cut = beams.front().u_floor;
  if (drop_tol > 0.0 && ctx.k > 0) {
    const double v = std::pow(drop_tol / ctx.c_k, 2.0 / ctx.k);
    ctx.u_cut = std::max(ctx.u_cut, std::min(v, 0.999999));
  }
  ctx.pole_xy.resize(beams.size());
  for (std::size_t j = 0; j < beams.size(); ++j)
    ctx.pole_xy[j] = std::hypot(beams[j].frame.pole.x1, beams[j].frame.pole.x2);
  return ctx;
}

// Beams whose value can be nonzero somewhere on ring r.  On a ring,
// pole.y ranges over [A - B, A + B]; if even the smallest |pole.y| keeps
// u = 1 - (pole.y)^2 below the cutoff, the whole ring is skipped for that
// beam.  The bound uses the continuous minimum, so it never skips a node
// the per-node test would keep.
inline void ring_active_beams(const std::vector<GaussianBeam>& beams,
                              const FamilyContext& ctx, double x, double sp,
                              std::vector<int>& active) {
  active.clear();
  const double t_cut = 1.0 - ctx.u_cut;
  for (std::size_t j = 0; j < beams.size(); ++j) {
    const double A = std::abs(beams[j].frame.pole.x3 * x);
    const double B = sp * ctx.pole_xy[j];
    const double lo = A > B ? A - B : 0.0;
    if (lo * lo <= t_cut) active.push_back(static_cast<int>(j));
  }
}

// Value of beam j at node y, given the precomputed pole.y; zero below the
// family cutoff.  Matches beam_eval up to the drop tolerance.
inline std::complex<double> family_beam_value(const GaussianBeam& b,
                                              const FamilyContext& ctx,
                                              const UnitVec& y) {
  if (ctx.k == 0) return {ctx.c_k, 0.0};
  const double re = dot(b.frame.a, y);
  const double im = dot(b.frame.b, y);
  const double u = re * re + im * im;
  if (u < ctx.u_cut) return {0.0, 0.0};
  const double mod = ctx.c_k * std::exp(0.5 * ctx.k * std::log(u));
  const double ang = ctx.k * std::atan2(im, re);
  return {mod * std::cos(ang), mod * std::sin(ang)};
}

}  // namespace detail

// Lp integrals, norms and grid maxima of the family u_i = sum_j F_ij q_j
// (or of the raw beams when f is null) in a single grid pass, all requested
// exponents at once.  drop_tol > 0 treats beam values below it as zero; the
// induced error in each integral is at most
// p * max_i(sum_j |F_ij|) * drop_tol * integral |u|^(p-1).
struct FamilyNorms {
  std::vector<double> p_list;
  std::vector<std::vector<double>> integrals;  // [beam][p index]
  std::vector<std::vector<double>> norms;      // integrals^(1/p)
  std::vector<double> grid_max;                // max |u_i| over grid nodes
};

inline FamilyNorms family_lp_norms(const std::vector<GaussianBeam>& beams,
                                   const HermitianMatrix* f,
                                   const SphereGrid& grid,
                                   const std::vector<double>& p_list,
                                   double drop_tol = 0.0) {
  for (double p : p_list)
    if (!(p >= 1.0) || std::isinf(p))
      throw numeric_error("family_lp_norms: exponents must be finite and >= 1");
  if (f && f->n() != beams.size())
    throw numeric_error("family_lp_norms: transform size mismatch");
  const auto ctx = detail::family_context(beams, drop_tol);
  const std::size_t m = beams.size();
  const int np = static_cast<int>(p_list.size());
  const int ws = static_cast<int>(m) * np;

  auto acc = detail::ring_block_reduce(
      grid.n_phi(), ws, static_cast<int>(m), [&](int r, double* out) {
        const double x = grid.x[r];
        const double sp = grid.sin_phi[r];
        std::vector<int> active;
        detail::ring_active_beams(beams, ctx, x, sp, active);
        if (active.empty()) return;
        std::vector<std::complex<double>> q(m);
        std::vector<int> nz;
        nz.reserve(active.size());
        for (int a = 0; a < grid.n_theta(); ++a) {
          const UnitVec y = grid.node(r, a);
          nz.clear();
          for (int j : active) {
            const std::complex<double> v =
                detail::family_beam_value(beams[j], ctx, y);
            if (v.real() != 0.0 || v.imag() != 0.0) {
              q[j] = v;
              nz.push_back(j);
            }
          }
          if (nz.empty()) continue;
          if (f) {
            for (std::size_t i = 0; i < m; ++i) {
              std::complex<double> ui;
              for (int j : nz) ui += (*f)(i, j) * q[j];
              const double s2 = std::norm(ui);
              if (s2 == 0.0) continue;
              double* row = out + i * np;
              for (int ip = 0; ip < np; ++ip)
                row[ip] += detail::abs_power_from_sq(s2, p_list[ip]);
              double& mx = out[ws + i];
              if (s2 > mx) mx = s2;
            }
          } else {
            for (int j : nz) {
              const double s2 = std::norm(q[j]);
              double* row = out + j * np;
              for (int ip = 0; ip < np; ++ip)
                row[ip] += detail::abs_power_from_sq(s2, p_list[ip]);
              double& mx = out[ws + j];
              if (s2 > mx) mx = s2;
            }
          }
        }
        const double w = grid.ring_weight(r);
        for (int idx = 0; idx < ws; ++idx) out[idx] *= w;
      });

  FamilyNorms fn;
  fn.p_list = p_list;
  fn.integrals.assign(m, std::vector<double>(np, 0.0));
  fn.norms.assign(m, std::vector<double>(np, 0.0));
  fn.grid_max.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (int ip = 0; ip < np; ++ip) {
      fn.integrals[i][ip] = acc[i * np + ip];
      fn.norms[i][ip] = std::pow(acc[i * np + ip], 1.0 / p_list[ip]);
    }
    const double mx = acc[ws + i];
    fn.grid_max[i] = mx > 0.0 ? std::sqrt(mx) : 0.0;
  }
  return fn;
}

// Quadrature Gram matrix <u_i, u_j> of the family (or of the raw beams when
// f is null) in one grid pass.
inline HermitianMatrix family_gram_quadrature(
    const std::vector<GaussianBeam>& beams, const HermitianMatrix* f,
    const SphereGrid& grid, double drop_tol = 0.0) {
  if (f && f->n() != beams.size())
    throw numeric_error("family_gram_quadrature: transform size mismatch");
  const auto ctx = detail::family_context(beams, drop_tol);
  const std::size_t m = beams.size();
  const int n_pairs = static_cast<int>(m * (m + 1) / 2);

  auto acc = detail::ring_block_reduce(
      grid.n_phi(), 2 * n_pairs, 0, [&](int r, double* out) {
        const double x = grid.x[r];
        const double sp = grid.sin_phi[r];
        std::vector<int> active;
        detail::ring_active_beams(beams, ctx, x, sp, active);
        if (active.empty()) return;
        std::vector<std::complex<double>> q(m), u(m);
        std::vector<int> nz;
        for (int a = 0; a < grid.n_theta(); ++a) {
          const UnitVec y = grid.node(r, a);
          nz.clear();
          for (int j : active) {
            const std::complex<double> v =
                detail::family_beam_value(beams[j], ctx, y);
            if (v.real() != 0.0 || v.imag() != 0.0) {
              q[j] = v;
              nz.push_back(j);
            }
          }
          if (nz.empty()) continue;
          if (f) {
            for (std::size_t i = 0; i < m; ++i) {
              std::complex<double> ui;
              for (int j : nz) ui += (*f)(i, j) * q[j];
              u[i] = ui;
            }
            int idx = 0;
            for (std::size_t i = 0; i < m; ++i)
              for (std::size_t j = i; j < m; ++j, ++idx) {
                const std::complex<double> v = u[i] * std::conj(u[j]);
                out[2 * idx] += v.real();
                out[2 * idx + 1] += v.imag();
              }
          } else {
            for (std::size_t ii = 0; ii < nz.size(); ++ii)
              for (std::size_t jj = ii; jj < nz.size(); ++jj) {
                const int i = std::min(nz[ii], nz[jj]);
                const int j = std::max(nz[ii], nz[jj]);
                const int idx =
                    i * static_cast<int>(m) - i * (i - 1) / 2 + (j - i);
                const std::complex<double> v = q[i] * std::conj(q[j]);
                out[2 * idx] += v.real();
                out[2 * idx + 1] += v.imag();
              }
          }
        }
        const double w = grid.ring_weight(r);
        for (int idx = 0; idx < 2 * n_pairs; ++idx) out[idx] *= w;
      });

  HermitianMatrix g(m);
  int idx = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j, ++idx) {
      const std::complex<double> v(acc[2 * idx], acc[2 * idx + 1]);
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  for (std::size_t i = 0; i < m; ++i)
    g(i, i) = std::complex<double>(g(i, i).real(), 0.0);
  return g;
}

// Sup norm refinement: samples |u_i| along rings parallel to beam i's great
// circle at transverse offsets {0, +-h/2, +-h}, h = k^(-1/2), with
// oversample * (2k+1) points per ring.  Combine with the grid maximum from
// family_lp_norms for a two-sided estimate.
inline std::vector<double> family_ring_sup(
    const std::vector<GaussianBeam>& beams, const HermitianMatrix* f,
    int oversample = 4, double drop_tol = 1e-15) {
  if (f && f->n() != beams.size())
    throw numeric_error("family_ring_sup: transform size mismatch");
  const auto ctx = detail::family_context(beams, drop_tol);
  const std::size_t m = beams.size();
  std::vector<double> sup(m, 0.0);
  if (ctx.k == 0) {
    for (std::size_t i = 0; i < m; ++i) {
      std::complex<double> s = 0.0;
      if (f)
        for (std::size_t j = 0; j < m; ++j) s += (*f)(i, j);
      else
        s = 1.0;
      sup[i] = std::abs(s) * ctx.c_k;
    }
    return sup;
  }
  const double h = 1.0 / std::sqrt(static_cast<double>(ctx.k));
  const double offsets[5] = {0.0, 0.5 * h, -0.5 * h, h, -h};
  const int n_t = oversample * (2 * ctx.k + 1);
  std::vector<std::complex<double>> q(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Frame& fr = beams[i].frame;
    double best = 0.0;
    for (double w : offsets) {
      const double cw = std::cos(w), sw = std::sin(w);
      for (int s = 0; s < n_t; ++s) {
        const double t = 2.0 * pi * s / n_t;
        const double ct = std::cos(t), st = std::sin(t);
        const UnitVec y{cw * (fr.a.x1 * ct + fr.b.x1 * st) + sw * fr.pole.x1,
                        cw * (fr.a.x2 * ct + fr.b.x2 * st) + sw * fr.pole.x2,
                        cw * (fr.a.x3 * ct + fr.b.x3 * st) + sw * fr.pole.x3};
        std::complex<double> ui;
        if (f) {
          for (std::size_t j = 0; j < m; ++j) {
            const std::complex<double> v =
                detail::family_beam_value(beams[j], ctx, y);
            if (v.real() != 0.0 || v.imag() != 0.0) ui += (*f)(i, j) * v;
          }
        } else {
          ui = detail::family_beam_value(beams[i], ctx, y);
        }
        best = std::max(best, std::norm(ui));
      }
    }
    sup[i] = std::sqrt(best);
  }
  return sup;
}

struct LpLowerBoundReport {
  double p = 0.0;
  double baseline = 0.0;            // ||Q_k||_p on the same grid
  std::vector<double> norms;        // ||u_i||_p
  double min_norm = 0.0;
  double min_ratio = 0.0;
  bool half_ok = false;             // min ratio >= 1/2 (with slack)
  std::vector<double> chain_lower;  // (F_ii - R'_i(F)) * baseline
  bool chain_ok = false;            // norms[i] >= chain_lower[i] (with slack)
  double avg_ratio = 0.0;           // mean ratio over the family
  double dim_avg_ratio = 0.0;       // sum of ratios / (2k+1)
  double dim_avg_bound =            // density/3 when density is known
      std::numeric_limits<double>::quiet_NaN();
  bool dim_avg_ok = true;
};

// Assembles the lower-bound report for one exponent from precomputed family
// norms.  The half bound and the chain
//   ||u_i||_p >= F_ii ||Q||_p - R'_i(F) ||Q||_p
// are checked with relative slack `slack` to absorb quadrature error.
inline LpLowerBoundReport lp_lower_bound_report(
    const OrthoSet& os, double p, const std::vector<double>& norms,
    double baseline, double density = std::numeric_limits<double>::quiet_NaN(),
    double slack = 1e-9) {
  LpLowerBoundReport rep;
  rep.p = p;
  rep.baseline = baseline;
  rep.norms = norms;
  if (norms.empty() || !(baseline > 0.0))
    throw numeric_error("lp_lower_bound_report: empty norms or zero baseline");
  rep.min_norm = *std::min_element(norms.begin(), norms.end());
  rep.min_ratio = rep.min_norm / baseline;
  rep.half_ok = rep.min_ratio >= 0.5 * (1.0 - slack);
  rep.chain_lower.resize(norms.size());
  rep.chain_ok = true;
  double sum_ratio = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    rep.chain_lower[i] =
        (os.f(i, i).real() - os.f_row_sums[i]) * baseline;
    if (norms[i] < rep.chain_lower[i] - slack * baseline) rep.chain_ok = false;
    sum_ratio += norms[i] / baseline;
  }
  rep.avg_ratio = sum_ratio / static_cast<double>(norms.size());
  const double dim = 2.0 * os.beams.front().k + 1.0;
  rep.dim_avg_ratio = sum_ratio / dim;
  if (!std::isnan(density)) {
    rep.dim_avg_bound = density / 3.0;
    rep.dim_avg_ok = rep.dim_avg_ratio >= rep.dim_avg_bound * (1.0 - slack);
  }
  return rep;
}

// Convenience single-grid check of the family lower bounds for one finite
// exponent: norms and the baseline beam norm are computed on `grid`.
inline LpLowerBoundReport verify_lp_lower_bound(
    const OrthoSet& os, double p, const SphereGrid& grid,
    double density = std::numeric_limits<double>::quiet_NaN()) {
  const int k = os.beams.front().k;
  std::vector<double> norms;
  double baseline;
  if (std::isinf(p)) {
    const auto grid_max = family_lp_norms(os.beams, &os.f, grid, {2.0}, 1e-15)
                              .grid_max;
    auto sup = family_ring_sup(os.beams, &os.f);
    norms.resize(sup.size());
    for (std::size_t i = 0; i < sup.size(); ++i)
      norms[i] = std::max(sup[i], grid_max[i]);
    baseline = os.beams.front().c_k;
  } else {
    const FamilyNorms fn = family_lp_norms(os.beams, &os.f, grid, {p});
    norms.reserve(fn.norms.size());
    for (const auto& row : fn.norms) norms.push_back(row[0]);
    const GaussianBeam north = make_beam(k, Frame{});
    const FamilyNorms base = family_lp_norms({north}, nullptr, grid, {p});
    baseline = base.norms[0][0];
  }
  return lp_lower_bound_report(os, p, norms, baseline, density);
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

// Least squares fit of log(value) against log(k).
inline SlopeFit fit_log_slope(const std::vector<double>& ks,
                              const std::vector<double>& values) {
  if (ks.size() != values.size() || ks.size() < 2)
    throw numeric_error("fit_log_slope: need at least two samples");
  const std::size_t n = ks.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(ks[i] > 0.0) || !(values[i] > 0.0))
      throw numeric_error("fit_log_slope: samples must be positive");
    lx[i] = std::log(ks[i]);
    ly[i] = std::log(values[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i)
    fit.max_residual = std::max(
        fit.max_residual, std::abs(ly[i] - (fit.intercept + fit.slope * lx[i])));
  return fit;
}

struct ScalingReport {
  double p = 0.0;
  double slope = 0.0;
  double expected = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

// Fits the growth of the minimum family norm across degrees and compares
// against the predicted exponent: sigma(p) up to p = 6, then the
// construction exponent 1/4 - 1/(2p).
inline ScalingReport verify_corollary_scaling(const std::vector<double>& ks,
                                              const std::vector<double>& min_norms,
                                              double p) {
  const SlopeFit fit = fit_log_slope(ks, min_norms);
  ScalingReport rep;
  rep.p = p;
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.max_residual = fit.max_residual;
  rep.expected = (p <= 6.0) ? sigma(p) : corollary_exponent(p);
  return rep;
}

}  // namespace beamset
