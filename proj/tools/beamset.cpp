// Command line front end: builds separated pole sets, certifies Gram
// dominance, orthonormalizes the beam family and checks norm and
// localization bounds.  Exit codes: 0 all checks pass, 1 a check failed,
// 2 usage error, 3 numeric or resource failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "beamset/beamset.hpp"

namespace {

struct CliOpts {
  int k_single = -1;
  std::vector<int> k_list;
  double density = std::numeric_limits<double>::quiet_NaN();
  std::size_t m = 0;
  std::vector<std::string> p_str;
  std::vector<double> c_list;
  std::uint64_t seed = 1;
  double grid_scale = 1.0;
  double tol = 1e-9;
  std::string out;
  std::string format = "json";
  std::string config;
  std::string write_poles, write_gram, write_f;
};

double parse_p(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF")
    return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw beamset::usage_error("bad exponent: " + s);
    return v;
  } catch (const beamset::usage_error&) {
    throw;
  } catch (const std::exception&) {
    throw beamset::usage_error("bad exponent: " + s);
  }
}

void load_config_file(const std::string& path, CliOpts& o) {
  std::ifstream in(path);
  if (!in) throw beamset::usage_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw beamset::usage_error("bad config file: " + std::string(e.what()));
  }
  if (j.contains("k")) o.k_list = {j["k"].get<int>()};
  if (j.contains("k_list")) o.k_list = j["k_list"].get<std::vector<int>>();
  if (j.contains("density")) o.density = j["density"].get<double>();
  if (j.contains("m")) o.m = j["m"].get<std::size_t>();
  if (j.contains("p_list")) {
    o.p_str.clear();
    for (const auto& v : j["p_list"]) {
      if (v.is_string())
        o.p_str.push_back(v.get<std::string>());
      else
        o.p_str.push_back(beamset::detail::g17(v.get<double>()));
    }
  }
  if (j.contains("c_list")) o.c_list = j["c_list"].get<std::vector<double>>();
  if (j.contains("seed")) o.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("grid_scale")) o.grid_scale = j["grid_scale"].get<double>();
  if (j.contains("tol")) o.tol = j["tol"].get<double>();
  if (j.contains("out")) o.out = j["out"].get<std::string>();
  if (j.contains("format")) o.format = j["format"].get<std::string>();
}

void add_common_options(CLI::App* cmd, CliOpts& o, bool multi_k) {
  cmd->add_option("--k", o.k_single, "beam degree");
  if (multi_k)
    cmd->add_option("--k-list", o.k_list, "beam degrees")->delimiter(',');
  cmd->add_option("--density", o.density, "pole density D; m = floor(D(2k+1))");
  cmd->add_option("--m", o.m, "explicit pole count (overrides density)");
  cmd->add_option("--p", o.p_str, "norm exponents (numbers or inf)")
      ->delimiter(',');
  cmd->add_option("--c", o.c_list, "tube half-widths c (tube width c/sqrt(k))")
      ->delimiter(',');
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--grid-scale", o.grid_scale, "quadrature degree multiplier");
  cmd->add_option("--tol", o.tol, "certification tolerance");
  cmd->add_option("--out", o.out, "write the full report to this file");
  cmd->add_option("--format", o.format, "report format: json or csv");
  cmd->add_option("--config", o.config, "JSON config file (flags override it)");
}

beamset::ExperimentConfig to_config(const CliOpts& o, const CLI::App* cmd) {
  beamset::ExperimentConfig cfg;
  const bool cli_k = cmd->count("--k") > 0;
  const bool cli_klist =
      cmd->get_option_no_throw("--k-list") && cmd->count("--k-list") > 0;
  if (cli_k && cli_klist)
    throw beamset::usage_error("give either --k or --k-list, not both");
  if (cli_k)
    cfg.k_list = {o.k_single};
  else if (!o.k_list.empty())
    cfg.k_list = o.k_list;
  else if (o.k_single >= 0)
    cfg.k_list = {o.k_single};
  cfg.density = o.density;
  cfg.m = o.m;
  if (!o.p_str.empty()) {
    cfg.p_list.clear();
    for (const std::string& s : o.p_str) cfg.p_list.push_back(parse_p(s));
  }
  if (!o.c_list.empty()) cfg.c_list = o.c_list;
  cfg.seed = o.seed;
  cfg.grid_scale = o.grid_scale;
  cfg.tol = o.tol;
  cfg.out = o.out;
  cfg.format = o.format;
  return cfg;
}

void write_report_file(const beamset::ExperimentConfig& cfg,
                       const std::string& body) {
  if (cfg.out.empty()) return;
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw beamset::resource_error("cannot write " + cfg.out);
  out << body;
}

std::string yn(bool b) { return b ? "yes" : "no"; }

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string pstr(double p) { return std::isinf(p) ? "inf" : num(p); }

void print_construct(const beamset::ConstructReport& r) {
  std::printf("construct k=%d m=%zu seed=%llu\n", r.k, r.m,
              static_cast<unsigned long long>(r.seed));
  std::printf("  d_min=%s  bounds=[%s, %s]  separation=%s\n",
              num(r.d_min).c_str(), num(r.sep_lower).c_str(),
              num(r.sep_upper).c_str(), yn(r.sep_pass).c_str());
  std::printf("  r_emp=%s  dominant=%s  spectrum=[%s, %s] inside=%s\n",
              num(r.r_emp).c_str(), yn(r.dominant).c_str(),
              num(r.eig_min).c_str(), num(r.eig_max).c_str(),
              yn(r.eig_inside).c_str());
  if (r.theory_available)
    std::printf("  theory r=%s admissible=%s  r_emp_within=%s\n",
                num(r.r_theory).c_str(), yn(r.admissible).c_str(),
                yn(r.r_emp_within_theory).c_str());
  std::printf("  strips bound_max=%s caps=%s rows=%s\n",
              num(r.strip_bound_max).c_str(), yn(r.strip_caps_hold).c_str(),
              yn(r.strip_rows_ok).c_str());
  std::printf("  fef_residual=%s  gram_vs_quad=%s  ortho_residual=%s\n",
              num(r.fef_residual).c_str(), num(r.gram_vs_quad).c_str(),
              num(r.ortho_residual).c_str());
  std::printf("  F diag=[%s, %s] row_max=%s\n", num(r.f_diag_min).c_str(),
              num(r.f_diag_max).c_str(), num(r.f_row_max).c_str());
  for (const beamset::NormCheck& nc : r.norms)
    std::printf(
        "  p=%s: min_ratio=%s avg_ratio=%s half=%s chain=%s converged=%s\n",
        pstr(nc.p).c_str(), num(nc.min_ratio).c_str(),
        num(nc.avg_ratio).c_str(), yn(nc.half_ok).c_str(),
        yn(nc.chain_ok).c_str(), yn(nc.converged).c_str());
  std::printf("%s\n", r.pass ? "PASS" : "FAIL");
}

void print_gram(const beamset::GramReport& r) {
  std::printf("gram k=%d m=%zu seed=%llu\n", r.k, r.m,
              static_cast<unsigned long long>(r.seed));
  std::printf("  d_min=%s separation=%s\n", num(r.d_min).c_str(),
              yn(r.sep_pass).c_str());
  std::printf("  r_emp=%s dominant=%s spectrum=[%s, %s] inside=%s\n",
              num(r.r_emp).c_str(), yn(r.dominant).c_str(),
              num(r.eig_min).c_str(), num(r.eig_max).c_str(),
              yn(r.eig_inside).c_str());
  if (r.theory_available)
    std::printf("  theory r=%s admissible=%s\n", num(r.r_theory).c_str(),
                yn(r.admissible).c_str());
  std::printf("  strips bound_max=%s caps=%s rows=%s\n",
              num(r.strip_bound_max).c_str(), yn(r.strip_caps_hold).c_str(),
              yn(r.strip_rows_ok).c_str());
  std::printf("%s\n", r.pass ? "PASS" : "FAIL");
}

void print_sweep(const beamset::SweepReport& r) {
  std::printf("sweep seed=%llu\n", static_cast<unsigned long long>(r.seed));
  for (const beamset::SweepRow& row : r.rows)
    std::printf("  k=%d m=%zu p=%s min_norm=%s min_ratio=%s half=%s\n", row.k,
                row.m, pstr(row.p).c_str(), num(row.min_norm).c_str(),
                num(row.min_ratio).c_str(), yn(row.half_ok).c_str());
  for (const beamset::SweepSlope& sl : r.slopes)
    std::printf("  p=%s slope=%s expected=%s residual=%s %s\n",
                pstr(sl.p).c_str(), num(sl.slope).c_str(),
                num(sl.expected).c_str(), num(sl.max_residual).c_str(),
                sl.pass ? "ok" : "off");
  std::printf("%s\n", r.pass ? "PASS" : "FAIL");
}

void print_localize(const beamset::LocalizeReport& r) {
  std::printf("localize k=%d m=%zu seed=%llu r_emp=%s\n", r.k, r.m,
              static_cast<unsigned long long>(r.seed), num(r.r_emp).c_str());
  for (const beamset::LocalizeProfile& p : r.profiles)
    std::printf("  profile c=%s ratio=%s limit=%s err=%s %s\n",
                num(p.c).c_str(), num(p.mass_ratio).c_str(),
                num(p.gaussian_limit).c_str(), num(p.profile_error).c_str(),
                p.profile_ok ? "ok" : "off");
  for (const beamset::LocalizeRow& row : r.rows)
    std::printf("  tubes c=%s min_mass_in=%s max_mass_out=%s eighth=%s chains=%s\n",
                num(row.c).c_str(), num(row.min_mass_in).c_str(),
                num(row.max_mass_out).c_str(), yn(row.all_mass_eighth).c_str(),
                yn(row.all_chains).c_str());
  std::printf("%s\n", r.pass ? "PASS" : "FAIL");
}

void print_verify(const beamset::VerifyReport& r) {
  for (const beamset::VerifyItem& it : r.items)
    std::printf("  %-22s %s  %s\n", it.name.c_str(),
                it.pass ? "pass" : "FAIL", it.detail.c_str());
  std::printf("%s\n", r.pass ? "PASS" : "FAIL");
}

void handle_exports(const beamset::ExperimentConfig& cfg, const CliOpts& o) {
  if (o.write_poles.empty() && o.write_gram.empty() && o.write_f.empty())
    return;
  const int k = cfg.k_list.front();
  const beamset::detail::CoreBuild core = beamset::detail::build_core(k, cfg);
  if (!o.write_poles.empty()) {
    std::ofstream out(o.write_poles, std::ios::binary);
    if (!out) throw beamset::resource_error("cannot write " + o.write_poles);
    beamset::write_pole_set(out, core.poles);
  }
  if (!o.write_gram.empty()) {
    std::ofstream out(o.write_gram, std::ios::binary);
    if (!out) throw beamset::resource_error("cannot write " + o.write_gram);
    beamset::write_matrix(out, core.gram.e);
  }
  if (!o.write_f.empty()) {
    std::ofstream out(o.write_f, std::ios::binary);
    if (!out) throw beamset::resource_error("cannot write " + o.write_f);
    beamset::write_matrix(out, core.os.f);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separated Gaussian beam families on the sphere: construction,"
               " Gram certification, orthonormalization and norm bounds"};
  app.require_subcommand(1);

  CliOpts o;
  // The config file provides defaults, so it must be loaded before CLI11
  // parses the remaining flags (present flags then override it).
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    try {
      if (a == "--config" && i + 1 < argc) {
        load_config_file(argv[i + 1], o);
      } else if (a.rfind("--config=", 0) == 0) {
        load_config_file(a.substr(9), o);
      }
    } catch (const beamset::usage_error& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return 2;
    }
  }

  CLI::App* c_construct = app.add_subcommand(
      "construct", "build a pole set, certify it and check norm bounds");
  add_common_options(c_construct, o, false);
  c_construct->add_option("--write-poles", o.write_poles,
                          "also write the pole set to this file");
  c_construct->add_option("--write-gram", o.write_gram,
                          "also write the Gram matrix to this file");
  c_construct->add_option("--write-f", o.write_f,
                          "also write the inverse square root factor");

  CLI::App* c_gram = app.add_subcommand(
      "gram", "build a pole set and certify Gram dominance only");
  add_common_options(c_gram, o, false);

  CLI::App* c_sweep = app.add_subcommand(
      "sweep", "norm lower bounds across degrees with slope fits");
  add_common_options(c_sweep, o, true);

  CLI::App* c_localize = app.add_subcommand(
      "localize", "tube mass localization for the orthonormalized family");
  add_common_options(c_localize, o, false);

  CLI::App* c_verify = app.add_subcommand(
      "verify", "fast self-check battery of closed-form identities");
  add_common_options(c_verify, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (app.got_subcommand(c_construct)) {
      const beamset::ExperimentConfig cfg = to_config(o, c_construct);
      beamset::validate_config(cfg);
      handle_exports(cfg, o);
      const beamset::ConstructReport r = beamset::run_construct(cfg);
      write_report_file(cfg, cfg.format == "json" ? to_json(r) : to_csv(r));
      print_construct(r);
      rc = r.pass ? 0 : 1;
    } else if (app.got_subcommand(c_gram)) {
      const beamset::ExperimentConfig cfg = to_config(o, c_gram);
      const beamset::GramReport r = beamset::run_gram(cfg);
      write_report_file(cfg, cfg.format == "json" ? to_json(r) : to_csv(r));
      print_gram(r);
      rc = r.pass ? 0 : 1;
    } else if (app.got_subcommand(c_sweep)) {
      const beamset::ExperimentConfig cfg = to_config(o, c_sweep);
      const beamset::SweepReport r = beamset::run_sweep(cfg);
      write_report_file(cfg, cfg.format == "json" ? to_json(r) : to_csv(r));
      print_sweep(r);
      rc = r.pass ? 0 : 1;
    } else if (app.got_subcommand(c_localize)) {
      const beamset::ExperimentConfig cfg = to_config(o, c_localize);
      const beamset::LocalizeReport r = beamset::run_localize(cfg);
      write_report_file(cfg, cfg.format == "json" ? to_json(r) : to_csv(r));
      print_localize(r);
      rc = r.pass ? 0 : 1;
    } else if (app.got_subcommand(c_verify)) {
      const beamset::ExperimentConfig cfg = to_config(o, c_verify);
      const beamset::VerifyReport r = beamset::run_verify(cfg);
      write_report_file(cfg, cfg.format == "json" ? to_json(r) : to_csv(r));
      print_verify(r);
      rc = r.pass ? 0 : 1;
    }
  } catch (const beamset::usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const beamset::resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const beamset::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  const auto t1 = std::chrono::steady_clock::now();
  std::fprintf(stderr, "elapsed %.1fs\n",
               std::chrono::duration<double>(t1 - t0).count());
  return rc;
}
