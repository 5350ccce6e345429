#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "beamset/gram.hpp"
#include "beamset/ortho.hpp"
#include "beamset/quad.hpp"

using namespace beamset;
using cd = std::complex<double>;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

std::vector<GaussianBeam> beams_from(const PoleSet& ps, int k) {
  std::vector<GaussianBeam> beams;
  for (const auto& p : ps.poles) beams.push_back(make_beam(k, canonical_frame(p)));
  return beams;
}
}  // namespace

TEST_CASE("orthonormalization of an already orthogonal pair", "[ortho]") {
  // Antipodal poles have exactly zero overlap, so F is the identity and the
  // orthonormalized functions coincide with the beams.
  const int k = 12;
  std::vector<GaussianBeam> beams{make_beam(k, canonical_frame({0, 0, 1})),
                                  make_beam(k, canonical_frame({0, 0, -1}))};
  const GramMatrix gm = build_gram(beams);
  CHECK(gm.r_emp == 0.0);
  const OrthoSet os = orthonormalize(beams, gm);
  CHECK(os.b_norm == 0.0);
  CHECK(os.h_norm == 0.0);
  CHECK(os.fef_residual < 1e-15);
  CHECK(os.f_diag_min == Catch::Approx(1.0).epsilon(1e-14));
  const UnitVec y = normalize(UnitVec{0.3, -0.2, 0.9});
  CHECK(std::abs(ortho_eval(os, 0, y) - beam_eval(beams[0], y)) < 1e-15);
}

TEST_CASE("orthonormalized family has identity gram", "[ortho]") {
  const int k = 16;
  const PoleSet ps = poles_from_density(0.25, k, 5);
  const std::vector<GaussianBeam> beams = beams_from(ps, k);
  const GramMatrix gm = build_gram(beams);
  REQUIRE(gm.r_emp > 1e-6);  // non-trivial mixing
  REQUIRE(gm.r_emp < 1.0);
  const OrthoSet os = orthonormalize(beams, gm);
  CHECK(os.fef_residual < 1e-13);
  CHECK(os.series_terms > 0);
  CHECK(os.series_agreement < 1e-11);
  CHECK(os.e_min_eigenvalue > 0.0);
  CHECK(os.b_norm == Catch::Approx(gm.r_emp));
  // Quadrature route: inner products of the u_i reproduce the identity.
  const SphereGrid g = build_grid(2 * k + 8);
  const HermitianMatrix ug = family_gram_quadrature(beams, &os.f, g);
  CHECK(max_abs_entry(ug - ComplexMatrix::identity(gm.m)) < 1e-11);
}

TEST_CASE("f bounds follow the row-sum radius", "[ortho]") {
  const int k = 16;
  const PoleSet ps = poles_from_density(0.25, k, 5);
  const std::vector<GaussianBeam> beams = beams_from(ps, k);
  const GramMatrix gm = build_gram(beams);
  const OrthoSet os = orthonormalize(beams, gm);
  const FBoundsReport fb = f_bounds_check(os, gm.r_emp);
  CHECK(fb.six_r == Catch::Approx(6 * gm.r_emp));
  CHECK(fb.diag_ok);
  CHECK(fb.row_ok);
  CHECK(fb.diag_min >= 1 - fb.six_r);
  CHECK(fb.diag_max <= 1 + fb.six_r);
  CHECK(fb.row_max <= fb.six_r);
  if (gm.r_emp <= 1.0 / 24) {
    CHECK(fb.strong_applicable);
    CHECK(fb.strong_diag_ok);
    CHECK(fb.strong_row_ok);
    CHECK(fb.diag_min >= 0.75);
    CHECK(fb.diag_max <= 1.25);
    CHECK(fb.row_max <= 0.25);
  }
}

TEST_CASE("heavily overlapping family still orthonormalizes", "[ortho]") {
  // Row sums far above 1: the series route is skipped and the eigen route
  // must still produce F E F = I.
  PoleSet ps;
  ps.poles = {{0, 0, 1},
              normalize(UnitVec{0.05, 0, 1}),
              normalize(UnitVec{0, 0.05, 1}),
              normalize(UnitVec{-0.05, 0, 1})};
  ps.m = 4;
  const std::vector<GaussianBeam> beams = beams_from(ps, 4);
  const GramMatrix gm = build_gram(beams);
  REQUIRE(gm.r_emp > 1.0);
  const OrthoSet os = orthonormalize(beams, gm);
  CHECK(os.series_terms == 0);  // series not applicable
  CHECK(std::isnan(os.series_agreement));
  CHECK(os.fef_residual < 1e-7);
}

TEST_CASE("family norm pass matches the generic route", "[ortho]") {
  const int k = 8;
  const PoleSet ps = generate_poles(3, 11);
  const std::vector<GaussianBeam> beams = beams_from(ps, k);
  const GramMatrix gm = build_gram(beams);
  const OrthoSet os = orthonormalize(beams, gm);
  const SphereGrid g = build_grid(6 * k + 8);
  const FamilyNorms fam = family_lp_norms(beams, &os.f, g, {3.0, 4.0, 6.0});
  REQUIRE(fam.norms.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t ip = 0; ip < 3; ++ip) {
      const double p = fam.p_list[ip];
      const double generic = lp_norm(
          [&](const UnitVec& y) { return ortho_eval(os, i, y); }, p, g);
      CHECK(fam.norms[i][ip] == Catch::Approx(generic).epsilon(1e-12));
    }
    // grid_max matches the generic sup over nodes.
    const double generic_sup = lp_norm(
        [&](const UnitVec& y) { return ortho_eval(os, i, y); }, inf, g);
    CHECK(fam.grid_max[i] == Catch::Approx(generic_sup).epsilon(1e-12));
  }
}

TEST_CASE("family norm pass without a transform", "[ortho]") {
  const int k = 8;
  const PoleSet ps = generate_poles(3, 11);
  const std::vector<GaussianBeam> beams = beams_from(ps, k);
  const SphereGrid g = build_grid(4 * k + 8);
  const FamilyNorms fam = family_lp_norms(beams, nullptr, g, {2.0, 4.0});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(fam.norms[i][0] == Catch::Approx(1.0).epsilon(1e-12));
    const double generic = lp_norm(
        [&](const UnitVec& y) { return beam_eval(beams[i], y); }, 4.0, g);
    CHECK(fam.norms[i][1] == Catch::Approx(generic).epsilon(1e-12));
  }
}

TEST_CASE("value drop tolerance perturbs norms negligibly", "[ortho]") {
  const int k = 64;
  const PoleSet ps = poles_from_density(0.1, k, 3);
  const std::vector<GaussianBeam> beams = beams_from(ps, k);
  const GramMatrix gm = build_gram(beams);
  const OrthoSet os = orthonormalize(beams, gm);
  const SphereGrid g = build_grid(4 * k + 8);
  const FamilyNorms exact = family_lp_norms(beams, &os.f, g, {4.0}, 0.0);
  const FamilyNorms cut = family_lp_norms(beams, &os.f, g, {4.0}, 1e-15);
  for (std::size_t i = 0; i < beams.size(); ++i)
    CHECK(cut.norms[i][0] == Catch::Approx(exact.norms[i][0]).epsilon(1e-12));
}

TEST_CASE("family gram quadrature matches the closed form", "[ortho]") {
  const int k = 16;
  const PoleSet ps = generate_poles(5, 21);
  const std::vector<GaussianBeam> beams = beams_from(ps, k);
  const GramMatrix gm = build_gram(beams);
  const SphereGrid g = build_grid(2 * k + 8);
  const HermitianMatrix qg = family_gram_quadrature(beams, nullptr, g);
  CHECK(max_abs_entry(qg - gm.e) < 1e-12);
}

TEST_CASE("ring sampling finds the sup norm of a lone beam", "[ortho]") {
  const int k = 32;
  std::vector<GaussianBeam> beams{make_beam(k, canonical_frame({0, 0, 1}))};
  const std::vector<double> sup = family_ring_sup(beams, nullptr);
  REQUIRE(sup.size() == 1);
  CHECK(sup[0] == Catch::Approx(beams[0].c_k).epsilon(1e-12));
}

TEST_CASE("norm lower bound report arithmetic", "[ortho]") {
  const int k = 16;
  const PoleSet ps = poles_from_density(0.25, k, 5);
  const std::vector<GaussianBeam> beams = beams_from(ps, k);
  const GramMatrix gm = build_gram(beams);
  const OrthoSet os = orthonormalize(beams, gm);
  std::vector<double> norms(gm.m, 2.0);
  const LpLowerBoundReport all2 =
      lp_lower_bound_report(os, 4.0, norms, 2.0, 0.25);
  CHECK(all2.min_ratio == Catch::Approx(1.0));
  CHECK(all2.half_ok);
  CHECK(all2.chain_ok);
  CHECK(all2.dim_avg_bound == Catch::Approx(0.25 / 3));
  for (std::size_t i = 0; i < gm.m; ++i) {
    CHECK(all2.chain_lower[i] ==
          (os.f(i, i).real() - os.f_row_sums[i]) * 2.0);
    CHECK(all2.chain_lower[i] > 0.0);
  }
  // One norm dipping to 0.6x the baseline keeps the half bound but breaks
  // the per-beam chain for a well-conditioned family.
  norms[2] = 1.2;
  const LpLowerBoundReport rep =
      lp_lower_bound_report(os, 4.0, norms, 2.0, 0.25);
  CHECK(rep.min_norm == 1.2);
  CHECK(rep.min_ratio == Catch::Approx(0.6));
  CHECK(rep.half_ok);
  CHECK(rep.avg_ratio ==
        Catch::Approx((2.0 * (gm.m - 1) + 1.2) / (2.0 * gm.m)));
  CHECK_FALSE(rep.chain_ok);
  // A norm below half the baseline flips the headline check.
  norms[2] = 0.9;
  const LpLowerBoundReport low =
      lp_lower_bound_report(os, 4.0, norms, 2.0, 0.25);
  CHECK_FALSE(low.half_ok);
}

TEST_CASE("full norm verification at small scale", "[ortho]") {
  const int k = 32;
  const PoleSet ps = poles_from_density(0.25, k, 5);
  const std::vector<GaussianBeam> beams = beams_from(ps, k);
  const GramMatrix gm = build_gram(beams);
  OrthoSet os = orthonormalize(beams, gm);
  const SphereGrid g = build_grid(4 * k + 8);
  const LpLowerBoundReport p4 = verify_lp_lower_bound(os, 4.0, g, 0.25);
  CHECK(p4.half_ok);
  CHECK(p4.chain_ok);
  CHECK(p4.dim_avg_ok);
  CHECK(p4.min_ratio > 0.9);  // well-separated family barely moves
  const LpLowerBoundReport psup = verify_lp_lower_bound(os, inf, g, 0.25);
  CHECK(psup.baseline == Catch::Approx(beams[0].c_k));
  CHECK(psup.half_ok);
}

TEST_CASE("log-log slope fit recovers an exact power law", "[ortho]") {
  std::vector<double> ks{32, 64, 128, 256};
  std::vector<double> vals;
  for (double k : ks) vals.push_back(3.0 * std::pow(k, 0.37));
  const SlopeFit fit = fit_log_slope(ks, vals);
  CHECK(fit.slope == Catch::Approx(0.37).epsilon(1e-12));
  CHECK(fit.intercept == Catch::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(fit.max_residual < 1e-12);
  CHECK_THROWS_AS(fit_log_slope({8.0}, {1.0}), numeric_error);
}

TEST_CASE("scaling report carries the right exponent target", "[ortho]") {
  std::vector<double> ks{64, 128, 256};
  std::vector<double> vals;
  for (double k : ks) vals.push_back(std::pow(k, 0.125));
  const ScalingReport sr = verify_corollary_scaling(ks, vals, 4.0);
  CHECK(sr.expected == Catch::Approx(0.125));
  CHECK(sr.slope == Catch::Approx(0.125).epsilon(1e-10));
  CHECK(verify_corollary_scaling(ks, vals, 8.0).expected ==
        Catch::Approx(corollary_exponent(8.0)));
  CHECK(verify_corollary_scaling(ks, vals, inf).expected == 0.25);
}
