#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "beamset/sphere.hpp"

using namespace beamset;

TEST_CASE("vector algebra on the unit sphere", "[sphere]") {
  const UnitVec e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
  const UnitVec c = cross(e1, e2);
  CHECK(c.x1 == 0.0);
  CHECK(c.x2 == 0.0);
  CHECK(c.x3 == 1.0);
  CHECK(dot(e1, e2) == 0.0);
  CHECK(norm(e3) == 1.0);
  CHECK(angle_between(e1, e2) == Catch::Approx(pi / 2));
  CHECK(angle_between(e1, e1) == 0.0);
  CHECK(angle_between(e1, -e1) == Catch::Approx(pi));
  CHECK_THROWS_AS(normalize(UnitVec{0, 0, 0}), numeric_error);
  const UnitVec v = normalize(UnitVec{3, 4, 0});
  CHECK(v.x1 == Catch::Approx(0.6));
  CHECK(is_unit(v));
}

TEST_CASE("angle_between is accurate for nearly parallel vectors", "[sphere]") {
  // acos-based formulas lose half the digits here; atan2 must not.
  const double eps = 1e-8;
  const UnitVec a{1, 0, 0};
  const UnitVec b = normalize(UnitVec{1, eps, 0});
  CHECK(angle_between(a, b) == Catch::Approx(eps).epsilon(1e-12));
}

TEST_CASE("canonical frame is orthonormal and matches its pole", "[sphere]") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const double z = 2.0 * detail::uniform01(rng) - 1.0;
    const double th = 2.0 * pi * detail::uniform01(rng);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const UnitVec p{s * std::cos(th), s * std::sin(th), z};
    const Frame f = canonical_frame(p);
    CHECK(frame_is_orthonormal(f, 1e-12));
    CHECK(dot(f.pole, p) == Catch::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("canonical frame at the coordinate poles", "[sphere]") {
  const Frame n = canonical_frame({0, 0, 1});
  CHECK(n.a.x1 == 1.0);
  CHECK(n.b.x2 == 1.0);
  CHECK(n.pole.x3 == 1.0);
  const Frame s = canonical_frame({0, 0, -1});
  CHECK(s.a.x1 == 1.0);
  CHECK(s.b.x2 == -1.0);
  CHECK(s.pole.x3 == -1.0);
  CHECK(frame_is_orthonormal(s, 1e-15));
  // Just below the branch cut the frame must stay orthonormal.
  const UnitVec near_south = normalize(UnitVec{1e-8, 0, -1});
  CHECK(frame_is_orthonormal(canonical_frame(near_south), 1e-9));
}

TEST_CASE("random rotations are proper orthogonal", "[sphere]") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto r = detail::random_rotation(rng);
    const UnitVec r1 = detail::apply_rotation(r, {1, 0, 0});
    const UnitVec r2 = detail::apply_rotation(r, {0, 1, 0});
    const UnitVec r3 = detail::apply_rotation(r, {0, 0, 1});
    CHECK(norm(r1) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(norm(r2) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(dot(r1, r2)) < 1e-12);
    CHECK(std::abs(dot(r1, r3)) < 1e-12);
    CHECK(dot(cross(r1, r2), r3) == Catch::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("pole generation meets the separation window", "[sphere]") {
  for (std::size_t m : {3u, 10u, 50u, 200u}) {
    const PoleSet ps = generate_poles(m, 1);
    REQUIRE(ps.m == m);
    for (const auto& p : ps.poles) CHECK(is_unit(p, 1e-12));
    const SeparationReport rep = check_separation(ps);
    INFO("m=" << m << " d_min=" << ps.d_min);
    CHECK(rep.pass);
    CHECK(ps.d_min >= 1.0 / std::sqrt(double(m)));
    CHECK(ps.d_min <= 6.0 / std::sqrt(double(m)));
  }
}

TEST_CASE("pole generation is deterministic in the seed", "[sphere]") {
  const PoleSet a = generate_poles(40, 9);
  const PoleSet b = generate_poles(40, 9);
  const PoleSet c = generate_poles(40, 10);
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(a.poles[i].x1 == b.poles[i].x1);
    CHECK(a.poles[i].x2 == b.poles[i].x2);
    CHECK(a.poles[i].x3 == b.poles[i].x3);
  }
  CHECK(a.d_min != c.d_min);
}

TEST_CASE("degenerate and invalid pole counts", "[sphere]") {
  CHECK_THROWS_AS(generate_poles(0, 1), numeric_error);
  CHECK_THROWS_AS(generate_poles(200000, 1), resource_error);
  const PoleSet one = generate_poles(1, 1);
  CHECK(std::isinf(one.d_min));
  const SeparationReport rep = check_separation(one);
  CHECK(rep.degenerate);
  CHECK(rep.pass);
  // Two repelled points end up nearly antipodal.
  const PoleSet two = generate_poles(2, 1);
  CHECK(two.d_min > 3.0);
}

TEST_CASE("density determines the pole count", "[sphere]") {
  const PoleSet ps = poles_from_density(0.02, 512, 1);
  CHECK(ps.m == 20);  // floor(0.02 * 1025)
  CHECK(ps.degree == 512);
  CHECK_THROWS_AS(poles_from_density(0.0, 512, 1), numeric_error);
  CHECK_THROWS_AS(poles_from_density(1.5, 512, 1), numeric_error);
  CHECK_THROWS_AS(poles_from_density(0.5, -1, 1), numeric_error);
  CHECK_THROWS_AS(poles_from_density(1e-4, 4, 1), numeric_error);  // m = 0
}

TEST_CASE("strip width divides pi and stays within a factor two", "[sphere]") {
  for (double d : {0.01, 0.1, 0.5, 1.0, 2.0, 3.0, pi, 5.0}) {
    const double delta = build_delta(d);
    const double eff = std::min(d, pi);
    CHECK(delta <= eff * (1 + 1e-12));
    CHECK(delta >= eff / 2 * (1 - 1e-12));
    const double ratio = pi / delta;
    CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
  }
}

TEST_CASE("strip counts for the octahedron", "[sphere]") {
  // Vertices +-e1, +-e2, +-e3; from any vertex the others sit at pi/2 (4 of
  // them) and pi (1), and d_min = pi/2 gives delta = pi/2 with 2 strips.
  PoleSet ps;
  ps.poles = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  ps.m = 6;
  ps.d_min = detail::min_pairwise_angle(ps.poles);
  CHECK(ps.d_min == Catch::Approx(pi / 2));
  const double delta = build_delta(ps.d_min);
  const StripPartition sp = strip_counts(ps, 0, delta);
  REQUIRE(sp.n_strips == 2);
  CHECK(sp.counts[0] == 4);
  CHECK(sp.counts[1] == 1);
}

TEST_CASE("pole set io round-trips exactly", "[sphere]") {
  const PoleSet ps = generate_poles(17, 23);
  std::stringstream ss;
  write_pole_set(ss, ps);
  const PoleSet back = read_pole_set(ss);
  REQUIRE(back.m == ps.m);
  CHECK(back.seed == ps.seed);
  CHECK(back.d_min == ps.d_min);
  for (std::size_t i = 0; i < ps.m; ++i) {
    CHECK(back.poles[i].x1 == ps.poles[i].x1);
    CHECK(back.poles[i].x2 == ps.poles[i].x2);
    CHECK(back.poles[i].x3 == ps.poles[i].x3);
  }
}

TEST_CASE("pole set reader rejects non-unit vectors", "[sphere]") {
  std::stringstream ss("# m=2 seed=1 d_min=1\n1 0 0\n0.5 0 0\n");
  CHECK_THROWS_AS(read_pole_set(ss), numeric_error);
}
