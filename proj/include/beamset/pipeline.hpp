#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "beamset/beams.hpp"
#include "beamset/common.hpp"
#include "beamset/gram.hpp"
#include "beamset/linalg.hpp"
#include "beamset/localize.hpp"
#include "beamset/ortho.hpp"
#include "beamset/quad.hpp"
#include "beamset/sphere.hpp"

namespace beamset {

struct ExperimentConfig {
  std::vector<int> k_list{64};
  // Pole count: explicit m wins; otherwise floor(density * (2k+1)).
  double density = std::numeric_limits<double>::quiet_NaN();
  std::size_t m = 0;
  std::vector<double> p_list{4.0};  // entries may be infinity
  std::vector<double> c_list{1.0};  // tube widths in units of k^(-1/2)
  std::uint64_t seed = 1;
  double grid_scale = 1.0;
  double tol = 1e-9;
  std::string out;             // report path; empty writes no file
  std::string format = "json"; // "json" or "csv"
};

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.k_list.empty()) throw usage_error("at least one degree k is required");
  for (int k : cfg.k_list) {
    if (k < 0) throw usage_error("k must be >= 0");
    if (k > 20000) throw usage_error("k exceeds the supported cap of 20000");
  }
  if (cfg.m == 0) {
    if (std::isnan(cfg.density))
      throw usage_error("either --m or --density must be given");
    if (!(cfg.density > 0.0) || !(cfg.density <= 1.0))
      throw usage_error("density must be in (0, 1]");
  }
  if (cfg.p_list.empty()) throw usage_error("at least one exponent p is required");
  for (double p : cfg.p_list)
    if (!(p >= 1.0)) throw usage_error("p must be in [1, inf]");
  for (double c : cfg.c_list)
    if (!(c > 0.0)) throw usage_error("c must be positive");
  if (!(cfg.grid_scale >= 0.25) || !(cfg.grid_scale <= 8.0))
    throw usage_error("grid-scale must be in [0.25, 8]");
  if (!(cfg.tol > 0.0) || !(cfg.tol <= 0.1))
    throw usage_error("tol must be in (0, 0.1]");
  if (cfg.format != "json" && cfg.format != "csv")
    throw usage_error("format must be json or csv");
}

namespace detail {

constexpr std::size_t max_dense_m = 1500;

// (2n)!! / (2n+1)!! by a log1p sum; the Wallis sine-power integral is
// integral of sin^(2n+1) over [0, pi] = 2 * this ratio.
inline double wallis_ratio(int n) {
  double s = 0.0;
  for (int i = 1; i <= n; ++i) s += std::log1p(0.5 / i);
  return std::exp(-s);
}

// Closed form ||Q_k||_p^p for even p = 2n: c_k^p * 4 pi * (2nk)!!/(2nk+1)!!.
inline double beam_even_power_integral(int k, int p) {
  if (p < 2 || p % 2 != 0)
    throw numeric_error("beam_even_power_integral: p must be even");
  const double ck = normalization_constant(k);
  return std::pow(ck, p) * 4.0 * pi * wallis_ratio(p / 2 * k);
}

struct CoreBuild {
  PoleSet poles;
  SeparationReport sep;
  std::vector<GaussianBeam> beams;
  GramMatrix gram;
  GershgorinReport cert;
  OrthoSet os;
};

inline CoreBuild build_core(int k, const ExperimentConfig& cfg) {
  CoreBuild core;
  core.poles = cfg.m > 0 ? generate_poles(cfg.m, cfg.seed)
                         : poles_from_density(cfg.density, k, cfg.seed);
  if (cfg.m > 0) core.poles.degree = k;
  if (core.poles.m > max_dense_m)
    throw resource_error("pole count " + std::to_string(core.poles.m) +
                         " exceeds the dense certification cap");
  core.sep = check_separation(core.poles);
  core.beams.reserve(core.poles.m);
  for (const auto& p : core.poles.poles)
    core.beams.push_back(make_beam(k, canonical_frame(p)));
  core.gram = build_gram(core.beams);
  core.cert = gershgorin_certificate(core.gram);
  core.os = orthonormalize(core.beams, core.gram, cfg.tol);
  return core;
}

inline bool is_even_integer(double p) {
  return p == std::floor(p) && static_cast<long long>(p) % 2 == 0;
}

}  // namespace detail

struct NormCheck {
  double p = 0.0;
  bool exact = false;  // even integer p: the base grid integrates exactly
  double baseline = 0.0;
  double min_norm = 0.0;
  double min_ratio = 0.0;
  double avg_ratio = 0.0;
  double dim_avg_ratio = 0.0;
  double dim_avg_bound = std::numeric_limits<double>::quiet_NaN();
  bool half_ok = false;
  bool chain_ok = false;
  bool dim_avg_ok = true;
  double convergence_rel = std::numeric_limits<double>::quiet_NaN();
  bool converged = true;
};

namespace detail {

struct NormsOutcome {
  int base_degree = 0;
  int fine_degree = 0;  // 0 when no refinement pass ran
  std::vector<NormCheck> checks;
};

// Family norms for every requested exponent.  Even integer exponents are
// exact on the base grid (degree >= p_max * k); the others are computed on
// the base and the degree-doubled grid, with the relative change reported.
// p = infinity combines the base-grid maximum with dedicated rings along
// each beam's great circle.
inline NormsOutcome norm_checks(const OrthoSet& os, int k,
                                const ExperimentConfig& cfg, double density) {
  NormsOutcome out;
  std::vector<double> p_fin;
  bool want_inf = false;
  bool all_exact = true;
  for (double p : cfg.p_list) {
    if (std::isinf(p)) {
      want_inf = true;
    } else {
      p_fin.push_back(p);
      if (!is_even_integer(p)) all_exact = false;
    }
  }
  double pmax = 2.0;
  for (double p : p_fin) pmax = std::max(pmax, p);
  out.base_degree = static_cast<int>(
      std::lround((std::ceil(pmax * k) + 8) * cfg.grid_scale));
  const SphereGrid base = build_grid(out.base_degree);

  const double drop = 1e-15;
  FamilyNorms fam, fam_fine;
  FamilyNorms ref, ref_fine;
  const GaussianBeam north = make_beam(k, Frame{});
  const std::vector<GaussianBeam> north_v{north};
  if (!p_fin.empty()) {
    fam = family_lp_norms(os.beams, &os.f, base, p_fin, drop);
    ref = family_lp_norms(north_v, nullptr, base, p_fin, drop);
    if (!all_exact) {
      out.fine_degree = 2 * out.base_degree;
      const SphereGrid fine = build_grid(out.fine_degree);
      fam_fine = family_lp_norms(os.beams, &os.f, fine, p_fin, drop);
      ref_fine = family_lp_norms(north_v, nullptr, fine, p_fin, drop);
    }
  }
  std::vector<double> sup, grid_max;
  if (want_inf) {
    sup = family_ring_sup(os.beams, &os.f);
    if (!p_fin.empty())
      grid_max = fam.grid_max;
    else
      grid_max.assign(os.beams.size(), 0.0);
  }

  for (double p : cfg.p_list) {
    NormCheck chk;
    chk.p = p;
    std::vector<double> norms;
    double baseline;
    double slack = cfg.tol;
    if (std::isinf(p)) {
      chk.exact = false;
      norms.resize(os.beams.size());
      for (std::size_t i = 0; i < norms.size(); ++i)
        norms[i] = std::max(sup[i], grid_max[i]);
      baseline = os.beams.front().c_k;
      slack = std::max(cfg.tol, 1e-6);
    } else {
      const std::size_t ip = static_cast<std::size_t>(
          std::find(p_fin.begin(), p_fin.end(), p) - p_fin.begin());
      chk.exact = is_even_integer(p);
      const FamilyNorms& use = (!chk.exact && out.fine_degree) ? fam_fine : fam;
      const FamilyNorms& use_ref =
          (!chk.exact && out.fine_degree) ? ref_fine : ref;
      norms.resize(os.beams.size());
      for (std::size_t i = 0; i < norms.size(); ++i)
        norms[i] = use.norms[i][ip];
      baseline = use_ref.norms[0][ip];
      if (!chk.exact) {
        double rel = 0.0;
        for (std::size_t i = 0; i < norms.size(); ++i) {
          const double a = fam.norms[i][ip], b = fam_fine.norms[i][ip];
          if (b > 0.0) rel = std::max(rel, std::abs(a - b) / b);
        }
        chk.convergence_rel = rel;
        chk.converged = rel <= std::max(cfg.tol, 1e-6);
        slack = std::max(cfg.tol, 1e-6);
      }
    }
    const LpLowerBoundReport rep =
        lp_lower_bound_report(os, p, norms, baseline, density, slack);
    chk.baseline = rep.baseline;
    chk.min_norm = rep.min_norm;
    chk.min_ratio = rep.min_ratio;
    chk.avg_ratio = rep.avg_ratio;
    chk.dim_avg_ratio = rep.dim_avg_ratio;
    chk.dim_avg_bound = rep.dim_avg_bound;
    chk.half_ok = rep.half_ok;
    chk.chain_ok = rep.chain_ok;
    chk.dim_avg_ok = rep.dim_avg_ok;
    out.checks.push_back(chk);
  }
  return out;
}

}  // namespace detail

struct ConstructReport {
  int k = 0;
  std::size_t m = 0;
  double density = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  double grid_scale = 1.0;
  double tol = 1e-9;
  // Pole separation.
  double d_min = 0.0;
  double sep_lower = 0.0, sep_upper = 0.0;
  bool sep_pass = false, sep_degenerate = false;
  // Gram certificate.
  double r_emp = 0.0;
  bool dominant = false;
  double eig_min = 0.0, eig_max = 0.0;
  bool eig_inside = false;
  // Density-based theory (NaN / false when m was explicit).
  bool theory_available = false;
  double group1 = 0.0, group2 = 0.0, group3 = 0.0, r_theory = 0.0;
  bool admissible = false;
  double density_lhs = 0.0;
  bool density_pass = false;
  bool r_emp_within_theory = true;
  // Strip certificate (worst pole).
  double strip_bound_max = 0.0;
  bool strip_caps_hold = false;
  bool strip_rows_ok = false;
  // Orthonormalization.
  double b_norm = 0.0, h_norm = 0.0;
  double f_diag_min = 0.0, f_diag_max = 0.0, f_row_max = 0.0;
  double fef_residual = 0.0, e_min_eigenvalue = 0.0;
  int series_terms = 0;
  double series_agreement = std::numeric_limits<double>::quiet_NaN();
  bool fef_ok = false;
  FBoundsReport f_bounds;
  // Quadrature cross-checks on the certification grid.
  int gram_grid_degree = 0;
  double gram_vs_quad = 0.0;  // closed-form Gram vs quadrature Gram of q
  bool gram_vs_quad_ok = false;
  double ortho_residual = 0.0;  // quadrature Gram of u vs identity
  bool ortho_residual_ok = false;
  // Norm lower bounds.
  int norm_grid_degree = 0, norm_grid_degree_fine = 0;
  std::vector<NormCheck> norms;
  bool pass = false;
};

inline ConstructReport run_construct(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const int k = cfg.k_list.front();
  const detail::CoreBuild core = detail::build_core(k, cfg);
  const double density =
      cfg.m > 0 ? std::numeric_limits<double>::quiet_NaN() : cfg.density;

  ConstructReport rep;
  rep.k = k;
  rep.m = core.poles.m;
  rep.density = density;
  rep.seed = cfg.seed;
  rep.grid_scale = cfg.grid_scale;
  rep.tol = cfg.tol;
  rep.d_min = core.poles.d_min;
  rep.sep_lower = core.sep.lower;
  rep.sep_upper = core.sep.upper;
  rep.sep_pass = core.sep.pass;
  rep.sep_degenerate = core.sep.degenerate;
  rep.r_emp = core.gram.r_emp;
  rep.dominant = core.cert.dominant;
  rep.eig_min = core.cert.eig_min;
  rep.eig_max = core.cert.eig_max;
  rep.eig_inside = core.cert.eig_inside;

  if (!std::isnan(density)) {
    rep.theory_available = true;
    const RBoundReport rb = theoretical_r(density, k);
    rep.group1 = rb.group1;
    rep.group2 = rb.group2;
    rep.group3 = rb.group3;
    rep.r_theory = rb.r;
    rep.admissible = rb.admissible;
    const DensityCheck dc = density_condition(density);
    rep.density_lhs = dc.lhs;
    rep.density_pass = dc.pass;
    rep.r_emp_within_theory = core.gram.r_emp <= rb.r + cfg.tol;
  }

  rep.strip_caps_hold = true;
  rep.strip_rows_ok = true;
  for (std::size_t i = 0; i < core.poles.m; ++i) {
    const StripSumBound sb = strip_sum_bound(core.poles, i, k);
    rep.strip_bound_max = std::max(rep.strip_bound_max, sb.bound);
    rep.strip_caps_hold = rep.strip_caps_hold && sb.caps_hold;
    rep.strip_rows_ok = rep.strip_rows_ok && sb.row_sum_within_bound;
  }

  rep.b_norm = core.os.b_norm;
  rep.h_norm = core.os.h_norm;
  rep.f_diag_min = core.os.f_diag_min;
  rep.f_diag_max = core.os.f_diag_max;
  rep.f_row_max = core.os.f_row_max;
  rep.fef_residual = core.os.fef_residual;
  rep.e_min_eigenvalue = core.os.e_min_eigenvalue;
  rep.series_terms = core.os.series_terms;
  rep.series_agreement = core.os.series_agreement;
  rep.fef_ok = core.os.fef_residual <= 1e-10;
  rep.f_bounds = f_bounds_check(core.os, core.gram.r_emp);

  rep.gram_grid_degree =
      static_cast<int>(std::lround((2 * k + 8) * cfg.grid_scale));
  const SphereGrid cg = build_grid(rep.gram_grid_degree);
  rep.gram_vs_quad =
      max_abs_entry(family_gram_quadrature(core.beams, nullptr, cg) -
                    core.gram.e);
  rep.gram_vs_quad_ok = rep.gram_vs_quad <= cfg.tol;
  rep.ortho_residual =
      max_abs_entry(family_gram_quadrature(core.beams, &core.os.f, cg) -
                    ComplexMatrix::identity(core.poles.m));
  rep.ortho_residual_ok = rep.ortho_residual <= cfg.tol;

  const detail::NormsOutcome no = detail::norm_checks(core.os, k, cfg, density);
  rep.norm_grid_degree = no.base_degree;
  rep.norm_grid_degree_fine = no.fine_degree;
  rep.norms = no.checks;

  bool ok = rep.sep_pass && rep.dominant && rep.eig_inside && rep.fef_ok &&
            rep.gram_vs_quad_ok && rep.ortho_residual_ok &&
            rep.r_emp_within_theory;
  if (rep.strip_caps_hold) ok = ok && rep.strip_rows_ok;
  if (core.gram.r_emp <= 1.0 / 24.0)
    ok = ok && rep.f_bounds.strong_diag_ok && rep.f_bounds.strong_row_ok;
  for (const NormCheck& nc : rep.norms)
    ok = ok && nc.half_ok && nc.chain_ok && nc.dim_avg_ok && nc.converged;
  rep.pass = ok;
  return rep;
}

struct GramReport {
  int k = 0;
  std::size_t m = 0;
  double density = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  double d_min = 0.0;
  bool sep_pass = false, sep_degenerate = false;
  double r_emp = 0.0;
  bool dominant = false;
  double eig_min = 0.0, eig_max = 0.0;
  bool eig_inside = false;
  bool theory_available = false;
  double r_theory = 0.0;
  bool admissible = false;
  double strip_bound_max = 0.0;
  bool strip_caps_hold = false;
  bool strip_rows_ok = false;
  bool pass = false;
};

inline GramReport run_gram(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const int k = cfg.k_list.front();
  GramReport rep;
  rep.k = k;
  rep.seed = cfg.seed;
  PoleSet poles = cfg.m > 0 ? generate_poles(cfg.m, cfg.seed)
                            : poles_from_density(cfg.density, k, cfg.seed);
  if (poles.m > detail::max_dense_m)
    throw resource_error("pole count exceeds the dense certification cap");
  rep.m = poles.m;
  rep.density = cfg.m > 0 ? std::numeric_limits<double>::quiet_NaN()
                          : cfg.density;
  const SeparationReport sep = check_separation(poles);
  rep.d_min = sep.d_min;
  rep.sep_pass = sep.pass;
  rep.sep_degenerate = sep.degenerate;
  std::vector<GaussianBeam> beams;
  beams.reserve(poles.m);
  for (const auto& p : poles.poles)
    beams.push_back(make_beam(k, canonical_frame(p)));
  const GramMatrix gram = build_gram(beams);
  rep.r_emp = gram.r_emp;
  const GershgorinReport cert = gershgorin_certificate(gram);
  rep.dominant = cert.dominant;
  rep.eig_min = cert.eig_min;
  rep.eig_max = cert.eig_max;
  rep.eig_inside = cert.eig_inside;
  if (!std::isnan(rep.density)) {
    rep.theory_available = true;
    const RBoundReport rb = theoretical_r(rep.density, k);
    rep.r_theory = rb.r;
    rep.admissible = rb.admissible;
  }
  rep.strip_caps_hold = true;
  rep.strip_rows_ok = true;
  for (std::size_t i = 0; i < poles.m; ++i) {
    const StripSumBound sb = strip_sum_bound(poles, i, k);
    rep.strip_bound_max = std::max(rep.strip_bound_max, sb.bound);
    rep.strip_caps_hold = rep.strip_caps_hold && sb.caps_hold;
    rep.strip_rows_ok = rep.strip_rows_ok && sb.row_sum_within_bound;
  }
  bool ok = rep.sep_pass && rep.dominant && rep.eig_inside;
  if (rep.strip_caps_hold) ok = ok && rep.strip_rows_ok;
  rep.pass = ok;
  return rep;
}

struct SweepRow {
  int k = 0;
  std::size_t m = 0;
  double d_min = 0.0;
  double r_emp = 0.0;
  double p = 0.0;
  double baseline = 0.0;
  double min_norm = 0.0;
  double min_ratio = 0.0;
  double avg_ratio = 0.0;
  bool half_ok = false;
  bool converged = true;
};

struct SweepSlope {
  double p = 0.0;
  double slope = 0.0;
  double expected = 0.0;
  double max_residual = 0.0;
  bool pass = false;
};

struct SweepReport {
  std::vector<int> k_list;
  double density = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  double slope_tol = 0.02;
  std::vector<SweepRow> rows;
  std::vector<SweepSlope> slopes;
  bool pass = false;
};

inline SweepReport run_sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.k_list.size() < 2)
    throw usage_error("sweep requires at least two degrees in --k-list");
  SweepReport rep;
  rep.k_list = cfg.k_list;
  rep.density =
      cfg.m > 0 ? std::numeric_limits<double>::quiet_NaN() : cfg.density;
  rep.seed = cfg.seed;

  std::vector<std::vector<double>> min_norms(cfg.p_list.size());
  bool all_ok = true;
  for (int k : cfg.k_list) {
    const detail::CoreBuild core = detail::build_core(k, cfg);
    const detail::NormsOutcome no =
        detail::norm_checks(core.os, k, cfg, rep.density);
    for (std::size_t ip = 0; ip < cfg.p_list.size(); ++ip) {
      const NormCheck& nc = no.checks[ip];
      SweepRow row;
      row.k = k;
      row.m = core.poles.m;
      row.d_min = core.poles.d_min;
      row.r_emp = core.gram.r_emp;
      row.p = nc.p;
      row.baseline = nc.baseline;
      row.min_norm = nc.min_norm;
      row.min_ratio = nc.min_ratio;
      row.avg_ratio = nc.avg_ratio;
      row.half_ok = nc.half_ok;
      row.converged = nc.converged;
      rep.rows.push_back(row);
      min_norms[ip].push_back(nc.min_norm);
      all_ok = all_ok && nc.half_ok && nc.converged;
    }
  }

  std::vector<double> ks(cfg.k_list.begin(), cfg.k_list.end());
  for (std::size_t ip = 0; ip < cfg.p_list.size(); ++ip) {
    const ScalingReport sr =
        verify_corollary_scaling(ks, min_norms[ip], cfg.p_list[ip]);
    SweepSlope sl;
    sl.p = sr.p;
    sl.slope = sr.slope;
    sl.expected = sr.expected;
    sl.max_residual = sr.max_residual;
    sl.pass = std::abs(sr.slope - sr.expected) <= rep.slope_tol;
    rep.slopes.push_back(sl);
    all_ok = all_ok && sl.pass;
  }
  rep.pass = all_ok;
  return rep;
}

struct LocalizeProfile {
  double c = 0.0;
  double w = 0.0;
  double mass_ratio = 0.0;
  double gaussian_limit = 0.0;
  double profile_error = 0.0;
  double exact_route = 0.0;  // 1-D exact quadrature of the same profile
  bool resolved = false;
  bool profile_ok = false;  // |mass_ratio - erf(c)| <= 0.02
};

struct LocalizeRow {
  double c = 0.0;
  double min_mass_in = 0.0;
  double max_mass_out = 0.0;
  bool all_mass_eighth = false;
  bool all_chains = false;
  bool resolved = false;
  std::vector<LocalizationReport> items;
};

struct LocalizeReport {
  int k = 0;
  std::size_t m = 0;
  double density = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  double r_emp = 0.0;
  int grid_degree = 0;
  int profile_rings = 0;
  std::vector<LocalizeProfile> profiles;
  std::vector<LocalizeRow> rows;
  bool pass = false;
};

inline LocalizeReport run_localize(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const int k = cfg.k_list.front();
  if (k <= 0) throw usage_error("localize requires k >= 1");
  const detail::CoreBuild core = detail::build_core(k, cfg);

  LocalizeReport rep;
  rep.k = k;
  rep.m = core.poles.m;
  rep.density =
      cfg.m > 0 ? std::numeric_limits<double>::quiet_NaN() : cfg.density;
  rep.seed = cfg.seed;
  rep.r_emp = core.gram.r_emp;
  // Exact for the integrands, and fine enough in phi to resolve the
  // narrowest requested tube.
  double c_min = cfg.c_list.front();
  for (double c : cfg.c_list) c_min = std::min(c_min, c);
  const double w_min = c_min / std::sqrt(static_cast<double>(k));
  const int tube_floor = 2 * static_cast<int>(std::ceil(4.0 * pi / w_min));
  rep.grid_degree = static_cast<int>(
      std::lround(std::max(2 * k + 8, tube_floor) * cfg.grid_scale));
  const SphereGrid grid = build_grid(rep.grid_degree);

  // Reference beam profile on a ring-dense grid aligned with the beam's own
  // frame; |Q|^2 is independent of the azimuth, so few columns are needed.
  rep.profile_rings = std::min(
      40000, std::max(2048, static_cast<int>(std::lround(
                                300.0 * std::sqrt(static_cast<double>(k)) *
                                cfg.grid_scale))));
  const SphereGrid profile_grid = make_grid(rep.profile_rings, 16);
  const GaussianBeam north = make_beam(k, Frame{});
  bool ok = true;
  for (double c : cfg.c_list) {
    const BeamLocalization bl = beam_localization(north, c, profile_grid);
    LocalizeProfile pr;
    pr.c = c;
    pr.w = bl.w;
    pr.mass_ratio = bl.mass_ratio;
    pr.gaussian_limit = bl.gaussian_limit;
    pr.profile_error = bl.profile_error;
    pr.exact_route = beam_profile_exact(k, c);
    pr.resolved = bl.resolved;
    pr.profile_ok = bl.profile_error <= 0.02;
    rep.profiles.push_back(pr);
    ok = ok && pr.profile_ok && pr.resolved;

    LocalizeRow row;
    row.c = c;
    row.items = ortho_localization_all(core.os, c, grid, 1e-15);
    row.min_mass_in = std::numeric_limits<double>::infinity();
    row.max_mass_out = 0.0;
    row.all_mass_eighth = true;
    row.all_chains = true;
    row.resolved = true;
    for (const LocalizationReport& it : row.items) {
      row.min_mass_in = std::min(row.min_mass_in, it.mass_in);
      row.max_mass_out = std::max(row.max_mass_out, it.mass_out);
      row.all_mass_eighth = row.all_mass_eighth && it.mass_eighth_ok;
      row.all_chains = row.all_chains && it.in_chain_ok && it.out_chain_ok;
      row.resolved = row.resolved && it.resolved;
    }
    ok = ok && row.all_mass_eighth && row.all_chains;
    rep.rows.push_back(row);
  }
  rep.pass = ok;
  return rep;
}

struct VerifyItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyItem> items;
  bool pass = false;
};

inline VerifyReport run_verify(const ExperimentConfig& cfg) {
  VerifyReport rep;
  auto add = [&](const std::string& name, bool pass, const std::string& d) {
    rep.items.push_back({name, pass, d});
  };

  {
    const DensityCheck a = density_condition(1.0 / 400.0);
    const DensityCheck b = density_condition(0.5);
    add("density-condition",
        a.pass && a.lhs >= 0.0390 && a.lhs <= 0.0400 && !b.pass,
        "lhs(1/400)=" + detail::g17(a.lhs) + " lhs(1/2)=" + detail::g17(b.lhs));
  }
  {
    const RBoundReport r400 = theoretical_r(1.0 / 400.0, 400);
    const RBoundReport r4000 = theoretical_r(1.0 / 400.0, 4000);
    add("r-bound-groups",
        r400.group3 > 1.0 && r4000.group3 < 1e-10 && r4000.admissible &&
            !r400.admissible,
        "group3(k=400)=" + detail::g17(r400.group3) +
            " group3(k=4000)=" + detail::g17(r4000.group3) +
            " r(k=4000)=" + detail::g17(r4000.r));
  }
  {
    bool ok = true;
    double worst = 0.0;
    for (int k : {0, 1, 2, 3, 5, 10, 50, 99, 200}) {
      const IntegralIdentity ii = integral_identity_check(k);
      ok = ok && ii.pass;
      worst = std::max(worst, ii.abs_error);
    }
    add("integral-identity", ok, "max_abs_error=" + detail::g17(worst));
  }
  {
    const double c0 = normalization_constant(0);
    const double c1 = normalization_constant(1);
    const double e0 = std::sqrt(1.0 / (4.0 * pi));
    const double e1 = std::sqrt(3.0 / (8.0 * pi));
    const GaussianBeam b8 = make_beam(8, Frame{});
    const SphereGrid g = build_grid(4 * 8 + 4);
    const double l2 = lp_norm([&](const UnitVec& y) { return beam_eval(b8, y); },
                              2.0, g);
    const double i4 = std::pow(
        lp_norm([&](const UnitVec& y) { return beam_eval(b8, y); }, 4.0, g),
        4.0);
    const double i4_closed = detail::beam_even_power_integral(8, 4);
    const bool ok = std::abs(c0 - e0) <= 1e-15 && std::abs(c1 - e1) <= 1e-15 &&
                    std::abs(l2 - 1.0) <= 1e-12 &&
                    std::abs(i4 - i4_closed) <= 1e-12 * i4_closed;
    add("beam-normalization", ok,
        "c0_err=" + detail::g17(std::abs(c0 - e0)) +
            " l2=" + detail::g17(l2) + " i4_rel_err=" +
            detail::g17(std::abs(i4 - i4_closed) / i4_closed));
  }
  {
    const PoleSet ps = generate_poles(6, cfg.seed);
    std::vector<GaussianBeam> beams;
    for (const auto& p : ps.poles)
      beams.push_back(make_beam(16, canonical_frame(p)));
    const GramMatrix gram = build_gram(beams);
    const SphereGrid g = build_grid(2 * 16 + 8);
    const double resid =
        max_abs_entry(family_gram_quadrature(beams, nullptr, g) - gram.e);
    add("gram-vs-quadrature", resid <= 1e-9, "residual=" + detail::g17(resid));
  }
  {
    std::mt19937_64 rng(cfg.seed ^ 0x5eed);
    bool ok = true;
    double worst_agree = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t n = 12;
      HermitianMatrix e(n);
      for (std::size_t i = 0; i < n; ++i) {
        e(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
          const std::complex<double> v(detail::uniform01(rng) - 0.5,
                                       detail::uniform01(rng) - 0.5);
          e(i, j) = v;
          e(j, i) = std::conj(v);
        }
      }
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) s += std::abs(e(i, j));
        r = std::max(r, s);
      }
      const double target = 0.1 + 0.08 * trial;  // up to 0.42
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) e(i, j) *= target / r;
      const HermitianMatrix f_eig = inv_sqrt_eigen(e);
      const SeriesResult f_ser = inv_sqrt_series(e, 1e-13);
      const double agree = max_abs_entry(f_eig - f_ser.f);
      worst_agree = std::max(worst_agree, agree);
      ok = ok && agree <= 1e-8;
      const EighResult eg = eigh(e);
      ok = ok && eg.values.front() >= 1.0 - target - 1e-10 &&
           eg.values.back() <= 1.0 + target + 1e-10;
    }
    add("inv-sqrt-routes", ok, "max_disagreement=" + detail::g17(worst_agree));
  }
  {
    const bool ok = std::abs(sigma(2.0)) <= 1e-15 &&
                    std::abs(sigma(6.0) - 1.0 / 6.0) <= 1e-15 &&
                    std::abs(corollary_exponent(6.0) - 1.0 / 6.0) <= 1e-15 &&
                    sigma(std::numeric_limits<double>::infinity()) == 0.5 &&
                    corollary_exponent(
                        std::numeric_limits<double>::infinity()) == 0.25 &&
                    std::abs(sigma(4.0) - 0.125) <= 1e-15;
    add("exponent-table", ok, "");
  }
  {
    std::mt19937_64 rng(cfg.seed ^ 0xf7a3e);
    bool ok = true;
    for (int t = 0; t < 20; ++t) {
      const double z = 2.0 * detail::uniform01(rng) - 1.0;
      const double th = 2.0 * pi * detail::uniform01(rng);
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      const UnitVec p{s * std::cos(th), s * std::sin(th), z};
      ok = ok && frame_is_orthonormal(canonical_frame(p), 1e-12);
    }
    const Frame north = canonical_frame({0.0, 0.0, 1.0});
    const Frame south = canonical_frame({0.0, 0.0, -1.0});
    ok = ok && north.a.x1 == 1.0 && north.b.x2 == 1.0 &&
         south.a.x1 == 1.0 && south.b.x2 == -1.0 && south.pole.x3 == -1.0;
    add("canonical-frames", ok, "");
  }
  {
    const int k = 256;
    const SphereGrid g = make_grid(6000, 16);
    const GaussianBeam b = make_beam(k, Frame{});
    const BeamLocalization bl = beam_localization(b, 1.0, g);
    const double exact = beam_profile_exact(k, 1.0);
    const bool ok = bl.profile_error <= 0.02 &&
                    std::abs(bl.mass_in / bl.total - exact) <= 5e-3 &&
                    bl.resolved;
    add("beam-profile", ok,
        "ratio=" + detail::g17(bl.mass_ratio) + " erf=" +
            detail::g17(bl.gaussian_limit) + " exact_route=" +
            detail::g17(exact));
  }
  {
    ExperimentConfig small = cfg;
    small.k_list = {32};
    small.density = 0.25;
    small.m = 0;
    small.p_list = {4.0};
    small.grid_scale = 1.0;
    small.tol = 1e-9;
    const ConstructReport cr = run_construct(small);
    add("end-to-end-small", cr.pass,
        "r_emp=" + detail::g17(cr.r_emp) + " fef=" +
            detail::g17(cr.fef_residual) + " min_ratio_p4=" +
            detail::g17(cr.norms.front().min_ratio));
  }

  rep.pass = true;
  for (const VerifyItem& it : rep.items) rep.pass = rep.pass && it.pass;
  return rep;
}

// ---------------------------------------------------------------------------
// Report serialization.  JSON uses insertion-ordered objects and CSV quotes
// nothing (values are numeric, boolean or plain identifiers), so identical
// configurations produce byte-identical files.

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson json_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

inline std::string csv_bool(bool b) { return b ? "true" : "false"; }

inline ojson norm_check_json(const NormCheck& nc) {
  ojson j;
  j["p"] = std::isinf(nc.p) ? ojson("inf") : ojson(nc.p);
  j["exact"] = nc.exact;
  j["baseline"] = nc.baseline;
  j["min_norm"] = nc.min_norm;
  j["min_ratio"] = nc.min_ratio;
  j["avg_ratio"] = nc.avg_ratio;
  j["dim_avg_ratio"] = nc.dim_avg_ratio;
  j["dim_avg_bound"] = json_or_null(nc.dim_avg_bound);
  j["half_ok"] = nc.half_ok;
  j["chain_ok"] = nc.chain_ok;
  j["dim_avg_ok"] = nc.dim_avg_ok;
  j["convergence_rel"] = json_or_null(nc.convergence_rel);
  j["converged"] = nc.converged;
  return j;
}

}  // namespace detail

inline std::string to_json(const ConstructReport& r) {
  detail::ojson j;
  j["kind"] = "construct";
  j["config"] = {{"k", r.k},
                 {"m", r.m},
                 {"density", detail::json_or_null(r.density)},
                 {"seed", r.seed},
                 {"grid_scale", r.grid_scale},
                 {"tol", r.tol}};
  j["poles"] = {{"d_min", r.d_min},
                {"lower", r.sep_lower},
                {"upper", r.sep_upper},
                {"pass", r.sep_pass},
                {"degenerate", r.sep_degenerate}};
  j["gram"] = {{"r_emp", r.r_emp},
               {"dominant", r.dominant},
               {"eig_min", r.eig_min},
               {"eig_max", r.eig_max},
               {"eig_inside", r.eig_inside}};
  if (r.theory_available)
    j["theory"] = {{"group1", r.group1},
                   {"group2", r.group2},
                   {"group3", r.group3},
                   {"r", r.r_theory},
                   {"admissible", r.admissible},
                   {"density_lhs", r.density_lhs},
                   {"density_pass", r.density_pass},
                   {"r_emp_within", r.r_emp_within_theory}};
  j["strips"] = {{"bound_max", r.strip_bound_max},
                 {"caps_hold", r.strip_caps_hold},
                 {"rows_ok", r.strip_rows_ok}};
  j["ortho"] = {{"b_norm", r.b_norm},
                {"h_norm", r.h_norm},
                {"f_diag_min", r.f_diag_min},
                {"f_diag_max", r.f_diag_max},
                {"f_row_max", r.f_row_max},
                {"fef_residual", r.fef_residual},
                {"e_min_eigenvalue", r.e_min_eigenvalue},
                {"series_terms", r.series_terms},
                {"series_agreement", detail::json_or_null(r.series_agreement)},
                {"fef_ok", r.fef_ok}};
  j["f_bounds"] = {{"r", r.f_bounds.r},
                   {"six_r", r.f_bounds.six_r},
                   {"diag_ok", r.f_bounds.diag_ok},
                   {"row_ok", r.f_bounds.row_ok},
                   {"strong_applicable", r.f_bounds.strong_applicable},
                   {"strong_diag_ok", r.f_bounds.strong_diag_ok},
                   {"strong_row_ok", r.f_bounds.strong_row_ok}};
  j["quadrature"] = {{"grid_degree", r.gram_grid_degree},
                     {"gram_vs_quad", r.gram_vs_quad},
                     {"gram_vs_quad_ok", r.gram_vs_quad_ok},
                     {"ortho_residual", r.ortho_residual},
                     {"ortho_residual_ok", r.ortho_residual_ok}};
  detail::ojson norms = detail::ojson::array();
  for (const NormCheck& nc : r.norms) norms.push_back(detail::norm_check_json(nc));
  j["norms"] = {{"grid_degree", r.norm_grid_degree},
                {"grid_degree_fine", r.norm_grid_degree_fine},
                {"checks", norms}};
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

inline std::string to_csv(const ConstructReport& r) {
  std::string s = "section,key,value\n";
  auto row = [&](const std::string& sec, const std::string& key,
                 const std::string& val) {
    s += sec + "," + key + "," + val + "\n";
  };
  row("config", "k", std::to_string(r.k));
  row("config", "m", std::to_string(r.m));
  row("config", "density", detail::g17(r.density));
  row("config", "seed", std::to_string(r.seed));
  row("config", "grid_scale", detail::g17(r.grid_scale));
  row("config", "tol", detail::g17(r.tol));
  row("poles", "d_min", detail::g17(r.d_min));
  row("poles", "pass", detail::csv_bool(r.sep_pass));
  row("gram", "r_emp", detail::g17(r.r_emp));
  row("gram", "dominant", detail::csv_bool(r.dominant));
  row("gram", "eig_min", detail::g17(r.eig_min));
  row("gram", "eig_max", detail::g17(r.eig_max));
  row("gram", "eig_inside", detail::csv_bool(r.eig_inside));
  if (r.theory_available) {
    row("theory", "group1", detail::g17(r.group1));
    row("theory", "group2", detail::g17(r.group2));
    row("theory", "group3", detail::g17(r.group3));
    row("theory", "r", detail::g17(r.r_theory));
    row("theory", "admissible", detail::csv_bool(r.admissible));
    row("theory", "density_lhs", detail::g17(r.density_lhs));
    row("theory", "density_pass", detail::csv_bool(r.density_pass));
    row("theory", "r_emp_within", detail::csv_bool(r.r_emp_within_theory));
  }
  row("strips", "bound_max", detail::g17(r.strip_bound_max));
  row("strips", "caps_hold", detail::csv_bool(r.strip_caps_hold));
  row("strips", "rows_ok", detail::csv_bool(r.strip_rows_ok));
  row("ortho", "b_norm", detail::g17(r.b_norm));
  row("ortho", "h_norm", detail::g17(r.h_norm));
  row("ortho", "f_diag_min", detail::g17(r.f_diag_min));
  row("ortho", "f_diag_max", detail::g17(r.f_diag_max));
  row("ortho", "f_row_max", detail::g17(r.f_row_max));
  row("ortho", "fef_residual", detail::g17(r.fef_residual));
  row("ortho", "series_terms", std::to_string(r.series_terms));
  row("ortho", "series_agreement", detail::g17(r.series_agreement));
  row("ortho", "fef_ok", detail::csv_bool(r.fef_ok));
  row("quadrature", "grid_degree", std::to_string(r.gram_grid_degree));
  row("quadrature", "gram_vs_quad", detail::g17(r.gram_vs_quad));
  row("quadrature", "gram_vs_quad_ok", detail::csv_bool(r.gram_vs_quad_ok));
  row("quadrature", "ortho_residual", detail::g17(r.ortho_residual));
  row("quadrature", "ortho_residual_ok", detail::csv_bool(r.ortho_residual_ok));
  for (const NormCheck& nc : r.norms) {
    const std::string sec =
        "norms_p" + (std::isinf(nc.p) ? std::string("inf") : detail::g17(nc.p));
    row(sec, "exact", detail::csv_bool(nc.exact));
    row(sec, "baseline", detail::g17(nc.baseline));
    row(sec, "min_norm", detail::g17(nc.min_norm));
    row(sec, "min_ratio", detail::g17(nc.min_ratio));
    row(sec, "avg_ratio", detail::g17(nc.avg_ratio));
    row(sec, "dim_avg_ratio", detail::g17(nc.dim_avg_ratio));
    row(sec, "half_ok", detail::csv_bool(nc.half_ok));
    row(sec, "chain_ok", detail::csv_bool(nc.chain_ok));
    row(sec, "converged", detail::csv_bool(nc.converged));
  }
  row("result", "pass", detail::csv_bool(r.pass));
  return s;
}

inline std::string to_json(const GramReport& r) {
  detail::ojson j;
  j["kind"] = "gram";
  j["config"] = {{"k", r.k},
                 {"m", r.m},
                 {"density", detail::json_or_null(r.density)},
                 {"seed", r.seed}};
  j["poles"] = {{"d_min", r.d_min},
                {"pass", r.sep_pass},
                {"degenerate", r.sep_degenerate}};
  j["gram"] = {{"r_emp", r.r_emp},
               {"dominant", r.dominant},
               {"eig_min", r.eig_min},
               {"eig_max", r.eig_max},
               {"eig_inside", r.eig_inside}};
  if (r.theory_available)
    j["theory"] = {{"r", r.r_theory}, {"admissible", r.admissible}};
  j["strips"] = {{"bound_max", r.strip_bound_max},
                 {"caps_hold", r.strip_caps_hold},
                 {"rows_ok", r.strip_rows_ok}};
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

inline std::string to_csv(const GramReport& r) {
  std::string s = "section,key,value\n";
  auto row = [&](const std::string& sec, const std::string& key,
                 const std::string& val) {
    s += sec + "," + key + "," + val + "\n";
  };
  row("config", "k", std::to_string(r.k));
  row("config", "m", std::to_string(r.m));
  row("config", "density", detail::g17(r.density));
  row("config", "seed", std::to_string(r.seed));
  row("poles", "d_min", detail::g17(r.d_min));
  row("poles", "pass", detail::csv_bool(r.sep_pass));
  row("gram", "r_emp", detail::g17(r.r_emp));
  row("gram", "dominant", detail::csv_bool(r.dominant));
  row("gram", "eig_min", detail::g17(r.eig_min));
  row("gram", "eig_max", detail::g17(r.eig_max));
  row("gram", "eig_inside", detail::csv_bool(r.eig_inside));
  if (r.theory_available) {
    row("theory", "r", detail::g17(r.r_theory));
    row("theory", "admissible", detail::csv_bool(r.admissible));
  }
  row("strips", "bound_max", detail::g17(r.strip_bound_max));
  row("strips", "caps_hold", detail::csv_bool(r.strip_caps_hold));
  row("strips", "rows_ok", detail::csv_bool(r.strip_rows_ok));
  row("result", "pass", detail::csv_bool(r.pass));
  return s;
}

inline std::string to_json(const SweepReport& r) {
  detail::ojson j;
  j["kind"] = "sweep";
  j["config"] = {{"k_list", r.k_list},
                 {"density", detail::json_or_null(r.density)},
                 {"seed", r.seed},
                 {"slope_tol", r.slope_tol}};
  detail::ojson rows = detail::ojson::array();
  for (const SweepRow& row : r.rows) {
    detail::ojson o;
    o["k"] = row.k;
    o["m"] = row.m;
    o["d_min"] = row.d_min;
    o["r_emp"] = row.r_emp;
    o["p"] = std::isinf(row.p) ? detail::ojson("inf") : detail::ojson(row.p);
    o["baseline"] = row.baseline;
    o["min_norm"] = row.min_norm;
    o["min_ratio"] = row.min_ratio;
    o["avg_ratio"] = row.avg_ratio;
    o["half_ok"] = row.half_ok;
    o["converged"] = row.converged;
    rows.push_back(o);
  }
  j["rows"] = rows;
  detail::ojson slopes = detail::ojson::array();
  for (const SweepSlope& sl : r.slopes) {
    detail::ojson o;
    o["p"] = std::isinf(sl.p) ? detail::ojson("inf") : detail::ojson(sl.p);
    o["slope"] = sl.slope;
    o["expected"] = sl.expected;
    o["max_residual"] = sl.max_residual;
    o["pass"] = sl.pass;
    slopes.push_back(o);
  }
  j["slopes"] = slopes;
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

inline std::string to_csv(const SweepReport& r) {
  std::string s =
      "kind,k,m,p,d_min,r_emp,baseline,min_norm,min_ratio,avg_ratio,half_ok,"
      "converged,slope,expected,max_residual,pass\n";
  auto pstr = [](double p) {
    return std::isinf(p) ? std::string("inf") : detail::g17(p);
  };
  for (const SweepRow& row : r.rows) {
    s += "sample," + std::to_string(row.k) + "," + std::to_string(row.m) +
         "," + pstr(row.p) + "," + detail::g17(row.d_min) + "," +
         detail::g17(row.r_emp) + "," + detail::g17(row.baseline) + "," +
         detail::g17(row.min_norm) + "," + detail::g17(row.min_ratio) + "," +
         detail::g17(row.avg_ratio) + "," + detail::csv_bool(row.half_ok) +
         "," + detail::csv_bool(row.converged) + ",,,,\n";
  }
  for (const SweepSlope& sl : r.slopes) {
    s += "slope,,," + pstr(sl.p) + ",,,,,,,,," + detail::g17(sl.slope) + "," +
         detail::g17(sl.expected) + "," + detail::g17(sl.max_residual) + "," +
         detail::csv_bool(sl.pass) + "\n";
  }
  return s;
}

inline std::string to_json(const LocalizeReport& r) {
  detail::ojson j;
  j["kind"] = "localize";
  j["config"] = {{"k", r.k},
                 {"m", r.m},
                 {"density", detail::json_or_null(r.density)},
                 {"seed", r.seed}};
  j["r_emp"] = r.r_emp;
  j["grid_degree"] = r.grid_degree;
  j["profile_rings"] = r.profile_rings;
  detail::ojson profiles = detail::ojson::array();
  for (const LocalizeProfile& p : r.profiles) {
    detail::ojson o;
    o["c"] = p.c;
    o["w"] = p.w;
    o["mass_ratio"] = p.mass_ratio;
    o["gaussian_limit"] = p.gaussian_limit;
    o["profile_error"] = p.profile_error;
    o["exact_route"] = p.exact_route;
    o["resolved"] = p.resolved;
    o["profile_ok"] = p.profile_ok;
    profiles.push_back(o);
  }
  j["beam_profiles"] = profiles;
  detail::ojson rows = detail::ojson::array();
  for (const LocalizeRow& row : r.rows) {
    detail::ojson o;
    o["c"] = row.c;
    o["min_mass_in"] = row.min_mass_in;
    o["max_mass_out"] = row.max_mass_out;
    o["all_mass_eighth"] = row.all_mass_eighth;
    o["all_chains"] = row.all_chains;
    o["resolved"] = row.resolved;
    detail::ojson items = detail::ojson::array();
    for (const LocalizationReport& it : row.items) {
      detail::ojson oi;
      oi["index"] = it.index;
      oi["mass_in"] = it.mass_in;
      oi["mass_out"] = it.mass_out;
      oi["beam_mass_in"] = it.beam_mass_in;
      oi["norm_in"] = it.norm_in;
      oi["in_chain_lower"] = it.in_chain_lower;
      oi["in_chain_ok"] = it.in_chain_ok;
      oi["eighth_applicable"] = it.eighth_applicable;
      oi["eighth_ok"] = it.eighth_ok;
      oi["mass_eighth_ok"] = it.mass_eighth_ok;
      oi["out_chain_upper"] = it.out_chain_upper;
      oi["out_chain_ok"] = it.out_chain_ok;
      oi["out_theory_upper"] = it.out_theory_upper;
      items.push_back(oi);
    }
    o["items"] = items;
    rows.push_back(o);
  }
  j["tubes"] = rows;
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

inline std::string to_csv(const LocalizeReport& r) {
  std::string s = "kind,c,index,value1,value2,value3,ok\n";
  for (const LocalizeProfile& p : r.profiles)
    s += "profile," + detail::g17(p.c) + ",," + detail::g17(p.mass_ratio) +
         "," + detail::g17(p.gaussian_limit) + "," +
         detail::g17(p.profile_error) + "," + detail::csv_bool(p.profile_ok) +
         "\n";
  for (const LocalizeRow& row : r.rows)
    for (const LocalizationReport& it : row.items)
      s += "tube," + detail::g17(row.c) + "," + std::to_string(it.index) +
           "," + detail::g17(it.mass_in) + "," + detail::g17(it.mass_out) +
           "," + detail::g17(it.norm_in) + "," +
           detail::csv_bool(it.mass_eighth_ok && it.in_chain_ok &&
                            it.out_chain_ok) +
           "\n";
  s += "result,,,,,," + detail::csv_bool(r.pass) + "\n";
  return s;
}

inline std::string to_json(const VerifyReport& r) {
  detail::ojson j;
  j["kind"] = "verify";
  detail::ojson items = detail::ojson::array();
  for (const VerifyItem& it : r.items) {
    detail::ojson o;
    o["name"] = it.name;
    o["pass"] = it.pass;
    o["detail"] = it.detail;
    items.push_back(o);
  }
  j["items"] = items;
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

inline std::string to_csv(const VerifyReport& r) {
  std::string s = "name,pass,detail\n";
  for (const VerifyItem& it : r.items) {
    std::string d = it.detail;
    for (char& ch : d)
      if (ch == ',') ch = ';';
    s += it.name + "," + detail::csv_bool(it.pass) + "," + d + "\n";
  }
  s += "all," + detail::csv_bool(r.pass) + ",\n";
  return s;
}

}  // namespace beamset
