#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "beamset/pipeline.hpp"

using namespace beamset;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.k_list = {16};
  cfg.m = 4;
  cfg.p_list = {4.0};
  cfg.seed = 7;
  return cfg;
}
}  // namespace

TEST_CASE("config validation", "[pipeline]") {
  CHECK_NOTHROW(validate_config(small_config()));
  ExperimentConfig cfg = small_config();
  cfg.k_list.clear();
  CHECK_THROWS_AS(validate_config(cfg), usage_error);
  cfg = small_config();
  cfg.k_list = {-1};
  CHECK_THROWS_AS(validate_config(cfg), usage_error);
  cfg = small_config();
  cfg.m = 0;  // no density either
  CHECK_THROWS_AS(validate_config(cfg), usage_error);
  cfg = small_config();
  cfg.m = 0;
  cfg.density = 1.5;
  CHECK_THROWS_AS(validate_config(cfg), usage_error);
  cfg = small_config();
  cfg.p_list = {0.5};
  CHECK_THROWS_AS(validate_config(cfg), usage_error);
  cfg = small_config();
  cfg.c_list = {-1.0};
  CHECK_THROWS_AS(validate_config(cfg), usage_error);
  cfg = small_config();
  cfg.grid_scale = 100.0;
  CHECK_THROWS_AS(validate_config(cfg), usage_error);
  cfg = small_config();
  cfg.tol = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), usage_error);
  cfg = small_config();
  cfg.format = "yaml";
  CHECK_THROWS_AS(validate_config(cfg), usage_error);
  cfg = small_config();
  cfg.p_list = {inf};
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("construct run on an explicit pole count", "[pipeline]") {
  const ConstructReport r = run_construct(small_config());
  CHECK(r.k == 16);
  CHECK(r.m == 4);
  CHECK_FALSE(r.theory_available);
  CHECK(std::isnan(r.density));
  CHECK(r.sep_pass);
  CHECK(r.dominant);
  CHECK(r.eig_inside);
  CHECK(r.fef_ok);
  CHECK(r.gram_vs_quad_ok);
  CHECK(r.ortho_residual_ok);
  REQUIRE(r.norms.size() == 1);
  CHECK(r.norms[0].p == 4.0);
  CHECK(r.norms[0].exact);
  CHECK(r.norms[0].half_ok);
  CHECK(r.norms[0].chain_ok);
  // Explicit m leaves no density-average target.
  CHECK(std::isnan(r.norms[0].dim_avg_bound));
  CHECK(r.norms[0].dim_avg_ok);
  CHECK(r.pass);
}

TEST_CASE("construct run from a density", "[pipeline]") {
  ExperimentConfig cfg;
  cfg.k_list = {32};
  cfg.density = 0.25;
  cfg.p_list = {4.0, 3.0, inf};
  cfg.seed = 5;
  const ConstructReport r = run_construct(cfg);
  CHECK(r.m == 16);  // floor(0.25 * 65)
  CHECK(r.theory_available);
  CHECK(r.density_pass == false);  // 0.25 is far above the admissible range
  CHECK(r.r_emp_within_theory);
  REQUIRE(r.norms.size() == 3);
  CHECK(r.norms[0].exact);
  CHECK_FALSE(r.norms[1].exact);
  CHECK(r.norms[1].converged);
  CHECK(r.norms[1].convergence_rel <= 1e-6);
  CHECK_FALSE(r.norms[2].exact);
  // Sup-norm baseline is the beam peak height.
  CHECK(r.norms[2].baseline ==
        Catch::Approx(make_beam(32, canonical_frame({0, 0, 1})).c_k)
            .epsilon(1e-12));
  for (const NormCheck& nc : r.norms) {
    CHECK(nc.half_ok);
    CHECK(nc.chain_ok);
    CHECK(nc.dim_avg_ok);
  }
  CHECK(r.norm_grid_degree_fine == 2 * r.norm_grid_degree);
  CHECK(r.pass);
}

TEST_CASE("gram run", "[pipeline]") {
  ExperimentConfig cfg;
  cfg.k_list = {16};
  cfg.density = 0.1;
  cfg.seed = 3;
  const GramReport r = run_gram(cfg);
  CHECK(r.k == 16);
  CHECK(r.m == 3);
  CHECK(r.dominant);
  CHECK(r.eig_inside);
  CHECK(r.pass);
}

TEST_CASE("sweep requires at least two degrees", "[pipeline]") {
  ExperimentConfig cfg;
  cfg.k_list = {16};
  cfg.density = 0.2;
  CHECK_THROWS_AS(run_sweep(cfg), usage_error);
}

TEST_CASE("sweep fits the expected slope", "[pipeline]") {
  ExperimentConfig cfg;
  cfg.k_list = {32, 64, 128};
  cfg.density = 0.05;
  cfg.p_list = {4.0};
  cfg.seed = 2;
  const SweepReport r = run_sweep(cfg);
  REQUIRE(r.rows.size() == 3);
  REQUIRE(r.slopes.size() == 1);
  CHECK(r.slopes[0].expected == Catch::Approx(0.125));
  CHECK(std::abs(r.slopes[0].slope - 0.125) <= r.slope_tol);
  CHECK(r.slopes[0].pass);
  CHECK(r.pass);
  // Rows are ordered by k and all converged.
  CHECK(r.rows[0].k == 32);
  CHECK(r.rows[2].k == 128);
  for (const SweepRow& row : r.rows) {
    CHECK(row.half_ok);
    CHECK(row.converged);
  }
}

TEST_CASE("localize run", "[pipeline]") {
  ExperimentConfig cfg;
  cfg.k_list = {64};
  cfg.density = 0.1;
  cfg.c_list = {1.0};
  cfg.seed = 4;
  const LocalizeReport r = run_localize(cfg);
  REQUIRE(r.profiles.size() == 1);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.profiles[0].profile_ok);
  CHECK(r.profiles[0].resolved);
  CHECK(r.profiles[0].exact_route ==
        Catch::Approx(r.profiles[0].mass_ratio).margin(0.02));
  CHECK(r.rows[0].all_mass_eighth);
  CHECK(r.rows[0].all_chains);
  CHECK(r.rows[0].min_mass_in > 0.5);
  CHECK(r.pass);
  // k = 0 has no tube geometry.
  cfg.k_list = {0};
  CHECK_THROWS_AS(run_localize(cfg), usage_error);
}

TEST_CASE("verify battery passes", "[pipeline]") {
  ExperimentConfig cfg;
  const VerifyReport r = run_verify(cfg);
  CHECK(r.items.size() >= 10);
  for (const VerifyItem& it : r.items) {
    INFO(it.name << ": " << it.detail);
    CHECK(it.pass);
  }
  CHECK(r.pass);
}

TEST_CASE("reports serialize deterministically", "[pipeline]") {
  const ExperimentConfig cfg = small_config();
  const ConstructReport a = run_construct(cfg);
  const ConstructReport b = run_construct(cfg);
  CHECK(to_json(a) == to_json(b));
  CHECK(to_csv(a) == to_csv(b));
}

TEST_CASE("json report structure", "[pipeline]") {
  const ConstructReport r = run_construct(small_config());
  const nlohmann::json j = nlohmann::json::parse(to_json(r));
  CHECK(j["kind"] == "construct");
  CHECK(j["config"]["k"] == 16);
  CHECK(j["config"]["density"].is_null());  // explicit m, no density
  CHECK(j["pass"] == true);
  CHECK(j["gram"]["dominant"] == true);
  CHECK(j["norms"]["checks"].size() == 1);
  CHECK(j.contains("theory") == false);
}

TEST_CASE("csv report structure", "[pipeline]") {
  const ConstructReport r = run_construct(small_config());
  const std::string csv = to_csv(r);
  CHECK(csv.rfind("section,key,value\n", 0) == 0);
  CHECK(csv.find("\nresult,pass,true\n") != std::string::npos);
  CHECK(csv.find("gram,dominant,true") != std::string::npos);
}

TEST_CASE("sweep and verify reports serialize", "[pipeline]") {
  ExperimentConfig cfg;
  cfg.k_list = {32, 64};
  cfg.density = 0.1;
  cfg.p_list = {4.0, inf};
  const SweepReport sr = run_sweep(cfg);
  const nlohmann::json js = nlohmann::json::parse(to_json(sr));
  CHECK(js["kind"] == "sweep");
  CHECK(js["rows"].size() == 4);
  CHECK(js["rows"][1]["p"] == "inf");
  CHECK(js["slopes"].size() == 2);
  const std::string csv = to_csv(sr);
  CHECK(csv.find("slope,") != std::string::npos);

  const VerifyReport vr = run_verify(ExperimentConfig{});
  const nlohmann::json jv = nlohmann::json::parse(to_json(vr));
  CHECK(jv["kind"] == "verify");
  CHECK(jv["pass"] == true);
}
