#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "beamset/beams.hpp"
#include "beamset/quad.hpp"

using namespace beamset;

TEST_CASE("gauss-legendre nodes and weights", "[quad]") {
  std::vector<double> x, w;
  detail::gauss_legendre(5, x, w);
  REQUIRE(x.size() == 5);
  double wsum = 0.0;
  for (double v : w) wsum += v;
  CHECK(wsum == Catch::Approx(2.0).epsilon(1e-15));
  CHECK(x[2] == 0.0);  // odd count pins the middle node
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(x[i] == Catch::Approx(-x[4 - i]).margin(1e-15));
  // Exact for polynomials through degree 2n-1 = 9, wrong at degree 10.
  for (int j = 0; j <= 9; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i) s += w[i] * std::pow(x[i], j);
    const double exact = (j % 2 == 0) ? 2.0 / (j + 1) : 0.0;
    CHECK(s == Catch::Approx(exact).margin(1e-14));
  }
  double s10 = 0.0;
  for (std::size_t i = 0; i < 5; ++i) s10 += w[i] * std::pow(x[i], 10);
  CHECK(std::abs(s10 - 2.0 / 11) > 1e-6);
}

TEST_CASE("sphere grid integrates polynomials exactly", "[quad]") {
  const SphereGrid g = build_grid(12);
  CHECK(g.degree == 12);
  // Monomial moments of x3: integral of x3^(2j) = 4 pi / (2j+1).
  for (int j = 0; j <= 6; ++j) {
    const double got = std::pow(
        lp_norm([&](const UnitVec& y) {
          return std::complex<double>(std::pow(y.x3, j), 0.0);
        }, 2.0, g), 2.0);
    CHECK(got == Catch::Approx(4 * pi / (2 * j + 1)).epsilon(1e-14));
  }
  // Mixed moment x1^2 x2^2 x3^2 = 4 pi / 105.
  const std::complex<double> mixed = inner_product(
      [](const UnitVec& y) {
        return std::complex<double>(y.x1 * y.x2 * y.x3, 0.0);
      },
      [](const UnitVec& y) {
        return std::complex<double>(y.x1 * y.x2 * y.x3, 0.0);
      },
      g);
  CHECK(mixed.real() == Catch::Approx(4 * pi / 105).epsilon(1e-14));
  CHECK(std::abs(mixed.imag()) < 1e-18);
}

TEST_CASE("grid sizes follow the requested degree", "[quad]") {
  const SphereGrid g = build_grid(20);
  CHECK(g.n_phi() == 11);
  CHECK(g.n_theta() == 21);
  CHECK(g.n_nodes() == std::size_t{11 * 21});
  CHECK_THROWS_AS(build_grid(-1), numeric_error);
  CHECK_THROWS_AS(build_grid(200000), resource_error);
  CHECK_THROWS_AS(make_grid(70000, 8), resource_error);
}

TEST_CASE("smooth integrand converges spectrally", "[quad]") {
  // exp(x3) is entire; both grids agree with 4 pi sinh(1) to near machine.
  const double exact = 4 * pi * std::sinh(1.0);
  for (int n : {16, 32}) {
    const SphereGrid g = build_grid(n);
    const std::complex<double> got = inner_product(
        [](const UnitVec& y) {
          return std::complex<double>(std::exp(y.x3), 0.0);
        },
        [](const UnitVec&) { return std::complex<double>(1.0, 0.0); }, g);
    CHECK(got.real() == Catch::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("inner product is conjugate symmetric", "[quad]") {
  const SphereGrid g = build_grid(24);
  const GaussianBeam b1 = make_beam(8, canonical_frame(normalize({1, 2, 3})));
  const GaussianBeam b2 = make_beam(8, canonical_frame(normalize({-2, 1, 1})));
  auto f1 = [&](const UnitVec& y) { return beam_eval(b1, y); };
  auto f2 = [&](const UnitVec& y) { return beam_eval(b2, y); };
  const std::complex<double> a = inner_product(f1, f2, g);
  const std::complex<double> b = inner_product(f2, f1, g);
  CHECK(a.real() == Catch::Approx(b.real()).margin(1e-16));
  CHECK(a.imag() == Catch::Approx(-b.imag()).margin(1e-16));
}

TEST_CASE("lp_norm agrees with inner_product at p = 2", "[quad]") {
  const SphereGrid g = build_grid(20);
  const GaussianBeam b = make_beam(6, Frame{});
  auto f = [&](const UnitVec& y) { return beam_eval(b, y); };
  const double n2 = lp_norm(f, 2.0, g);
  const double ip = std::sqrt(inner_product(f, f, g).real());
  CHECK(n2 == Catch::Approx(ip).epsilon(1e-15));
  CHECK_THROWS_AS(lp_norm(f, 0.5, g), numeric_error);
}

TEST_CASE("sup norm over the grid", "[quad]") {
  const SphereGrid g = build_grid(64);
  const GaussianBeam b = make_beam(4, Frame{});
  const double got = lp_norm(
      [&](const UnitVec& y) { return beam_eval(b, y); },
      std::numeric_limits<double>::infinity(), g);
  // Grid nodes sample near but not exactly on the maximizing circle.
  CHECK(got <= b.c_k * (1 + 1e-12));
  CHECK(got > 0.95 * b.c_k);
}

TEST_CASE("odd-power identity against the closed form", "[quad]") {
  for (int k : {0, 1, 5, 42, 200}) {
    const IntegralIdentity ii = integral_identity_check(k);
    INFO("k=" << k << " err=" << ii.abs_error);
    CHECK(ii.pass);
    CHECK(ii.closed_form == Catch::Approx(2.0 / (k + 1)).epsilon(1e-15));
  }
}

TEST_CASE("tube mass of the constant function is the band measure", "[quad]") {
  const SphereGrid g = build_grid(400);
  auto one = [](const UnitVec&) { return std::complex<double>(1.0, 0.0); };
  for (double w : {0.2, 0.5, 1.0}) {
    const TubeMass tm = tube_mass(one, Frame{}, w, g);
    CHECK(tm.resolved);
    CHECK(tm.total == Catch::Approx(4 * pi).epsilon(1e-13));
    // Band |x3| <= sin(w) has normalized measure sin(w); the indicator is
    // not a polynomial, so only a quantization-level match is expected.
    CHECK(tm.mass_in / tm.total ==
          Catch::Approx(std::sin(w)).margin(2 * pi / g.n_phi()));
    CHECK(tm.mass_in + tm.mass_out == Catch::Approx(tm.total).epsilon(1e-13));
  }
  const TubeMass coarse = tube_mass(one, Frame{}, 0.01, build_grid(32));
  CHECK_FALSE(coarse.resolved);
  CHECK_THROWS_AS(tube_mass(one, Frame{}, 0.0, g), numeric_error);
  CHECK_THROWS_AS(tube_mass(one, Frame{}, 2.0, g), numeric_error);
}

TEST_CASE("tube mass grows with the width", "[quad]") {
  const SphereGrid g = build_grid(256);
  const GaussianBeam b = make_beam(64, Frame{});
  auto f = [&](const UnitVec& y) { return beam_eval(b, y); };
  double prev = 0.0;
  for (double w : {0.05, 0.1, 0.2, 0.4}) {
    const TubeMass tm = tube_mass(f, b.frame, w, g);
    CHECK(tm.mass_in > prev);
    prev = tm.mass_in;
  }
  CHECK(prev <= 1.0 + 1e-12);
}

TEST_CASE("block reduction matches a plain serial sum", "[quad]") {
  const SphereGrid g = build_grid(48);
  const GaussianBeam b = make_beam(10, Frame{});
  auto f = [&](const UnitVec& y) { return beam_eval(b, y); };
  // Plain double loop in node order, no compensation.
  double plain = 0.0;
  for (int r = 0; r < g.n_phi(); ++r) {
    const double rw = g.ring_weight(r);
    for (int a = 0; a < g.n_theta(); ++a)
      plain += rw * std::norm(f(g.node(r, a)));
  }
  const double reduced = std::pow(lp_norm(f, 2.0, g), 2.0);
  CHECK(reduced == Catch::Approx(plain).epsilon(1e-13));
  // Same call twice is bitwise identical.
  CHECK(reduced == std::pow(lp_norm(f, 2.0, g), 2.0));
}
