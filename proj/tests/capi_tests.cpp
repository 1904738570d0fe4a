#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wavelqg/wavelqg.h"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using nlohmann::json;

namespace {

struct StringDeleter {
  void operator()(char* s) const { wlqg_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct GainsDeleter {
  void operator()(wlqg_gains* g) const { wlqg_gains_destroy(g); }
};
struct SweepDeleter {
  void operator()(wlqg_sweep* s) const { wlqg_sweep_destroy(s); }
};
struct SimDeleter {
  void operator()(wlqg_sim* s) const { wlqg_sim_destroy(s); }
};

wlqg_nondim point(double pi1, double pi2, double pi3, double pi4, size_t n) { return wlqg_nondim{pi1, pi2, pi3, pi4, n}; }

std::unique_ptr<wlqg_gains, GainsDeleter> synth(const wlqg_nondim& p, wlqg_gain_kind kind) {
  wlqg_gains* g = nullptr;
  REQUIRE(wlqg_gains_synthesize(&p, kind, &g) == WLQG_OK);
  return std::unique_ptr<wlqg_gains, GainsDeleter>(g);
}

}  // namespace

TEST_CASE("library metadata") {
  CHECK(std::string(wlqg_version()) == "0.1.0");
  CHECK(std::string(wlqg_status_string(WLQG_OK)) == "ok");
  for (int s = 0; s <= WLQG_OUT_OF_MEMORY; ++s) CHECK(std::strlen(wlqg_status_string(static_cast<wlqg_status>(s))) > 0);
  wlqg_string_free(nullptr);
  wlqg_gains_destroy(nullptr);
  wlqg_sweep_destroy(nullptr);
  wlqg_sim_destroy(nullptr);
}

TEST_CASE("parameter validation reports the field") {
  const wlqg_nondim def = wlqg_nondim_default();
  CHECK(def.n == 30);
  CHECK(def.pi2 == 1.0);
  CHECK(wlqg_nondim_validate(&def) == WLQG_OK);
  CHECK(std::string(wlqg_last_error()).empty());
  const wlqg_nondim bad = point(0, -1, 1, 1, 8);
  CHECK(wlqg_nondim_validate(&bad) == WLQG_DOMAIN);
  CHECK_THAT(std::string(wlqg_last_error()), ContainsSubstring("pi2"));
  CHECK(wlqg_nondim_validate(nullptr) == WLQG_INVALID_ARGUMENT);
}

TEST_CASE("dimensional inputs") {
  wlqg_dimensional d{1, 1, 8, 1, 1, 2, 1, 2, 1};
  wlqg_nondim p{};
  REQUIRE(wlqg_nondimensionalize(&d, &p) == WLQG_OK);
  CHECK(p.pi1 == 1.0);
  CHECK(p.pi4 == 2.0);
  CHECK(p.n == 8);
  CHECK(wlqg_check_matched_scaling(&d) == WLQG_OK);
  d.sigma_d = 3;
  CHECK(wlqg_check_matched_scaling(&d) == WLQG_DOMAIN);
  d.c = 0;
  CHECK(wlqg_nondimensionalize(&d, &p) == WLQG_DOMAIN);
  CHECK_THAT(std::string(wlqg_last_error()), ContainsSubstring("'c'"));

  double rk = 1, rl = 1;
  const wlqg_nondim q = point(1, 1, 2, 4, 8);
  REQUIRE(wlqg_locality_residuals(&q, &rk, &rl) == WLQG_OK);
  CHECK(rk == 0.0);
  CHECK(rl == 0.5);
}

TEST_CASE("parameter JSON") {
  const wlqg_nondim p = point(0.5, 1, 4, 4, 8);
  char* text = nullptr;
  REQUIRE(wlqg_params_to_json(&p, &text) == WLQG_OK);
  OwnedString owned(text);
  wlqg_nondim back{};
  REQUIRE(wlqg_params_from_json(text, &back) == WLQG_OK);
  CHECK(back.pi1 == p.pi1);
  CHECK(back.pi3 == p.pi3);
  CHECK(back.n == p.n);
  CHECK(wlqg_params_from_json("{\"pi1\":", &back) == WLQG_PARSE);
  CHECK(wlqg_params_from_json("{\"pi1\":1,\"pi2\":1,\"pi3\":1,\"pi4\":1,\"n\":8,\"c\":1}", &back) == WLQG_PARSE);
  REQUIRE(wlqg_params_from_json(
              "{\"c\":1,\"dx\":1,\"n\":8,\"q1\":1,\"q2\":1,\"r\":2,\"sigma_m\":1,\"sigma_d\":2,\"alpha\":1}", &back) ==
          WLQG_OK);
  CHECK(back.pi1 == 1.0);
  CHECK(back.pi4 == 2.0);
}

TEST_CASE("gain handles") {
  const wlqg_nondim p = point(0.5, 1, 4, 4, 8);
  auto k = synth(p, WLQG_LQR);
  auto l = synth(p, WLQG_KF);
  wlqg_gain_kind kind;
  REQUIRE(wlqg_gains_kind(l.get(), &kind) == WLQG_OK);
  CHECK(kind == WLQG_KF);
  size_t n = 0;
  REQUIRE(wlqg_gains_size(k.get(), &n) == WLQG_OK);
  CHECK(n == 8);

  std::vector<double> row(8);
  REQUIRE(wlqg_gains_first_row(k.get(), 1, row.data(), row.size()) == WLQG_OK);
  CHECK_THAT(row[0], WithinRel(4.0, 1e-14));
  for (size_t j = 1; j < 8; ++j) CHECK(std::abs(row[j]) < 1e-13);
  REQUIRE(wlqg_gains_first_row(k.get(), 2, row.data(), row.size()) == WLQG_OK);
  CHECK_THAT(row[0], WithinRel(std::sqrt(24.0), 1e-14));
  REQUIRE(wlqg_gains_first_row(l.get(), 1, row.data(), row.size()) == WLQG_OK);
  CHECK_THAT(row[0], WithinRel(std::sqrt(0.5), 1e-14));
  REQUIRE(wlqg_gains_first_row(l.get(), 2, row.data(), row.size()) == WLQG_OK);
  CHECK_THAT(row[0], WithinRel(1.0, 1e-14));
  CHECK(wlqg_gains_first_row(k.get(), 3, row.data(), row.size()) == WLQG_INVALID_ARGUMENT);
  CHECK(wlqg_gains_first_row(k.get(), 1, row.data(), 4) == WLQG_INVALID_ARGUMENT);
  CHECK(wlqg_gains_first_row(nullptr, 1, row.data(), 8) == WLQG_INVALID_ARGUMENT);

  std::vector<double> base(8), comp(8);
  REQUIRE(wlqg_gains_spectral(k.get(), base.data(), comp.data(), 8) == WLQG_OK);
  for (double b : base) CHECK_THAT(b, WithinRel(4.0, 1e-14));
  double o1 = 1, o2 = 1;
  REQUIRE(wlqg_gains_offdiag(k.get(), &o1, &o2) == WLQG_OK);
  CHECK(o1 <= 1e-10);
  CHECK(o2 <= 1e-10);
  int dec = 0;
  REQUIRE(wlqg_gains_is_decentralized(l.get(), &dec) == WLQG_OK);
  CHECK(dec == 1);

  auto dense = synth(point(0, 1, 1, 1, 8), WLQG_LQR);
  REQUIRE(wlqg_gains_is_decentralized(dense.get(), &dec) == WLQG_OK);
  CHECK(dec == 0);

  const wlqg_nondim bad = point(0, 1, 1, 1, 1);
  wlqg_gains* none = nullptr;
  CHECK(wlqg_gains_synthesize(&bad, WLQG_LQR, &none) == WLQG_DOMAIN);
  CHECK(none == nullptr);
}

TEST_CASE("gain JSON roundtrip") {
  auto k = synth(point(0.2, 1, 2, 3, 6), WLQG_LQR);
  char* text = nullptr;
  REQUIRE(wlqg_gains_to_json(k.get(), &text) == WLQG_OK);
  OwnedString owned(text);
  const json j = json::parse(text);
  CHECK(j["kind"] == "lqr");
  CHECK(j["block1_first_row"].size() == 6);
  wlqg_gains* back = nullptr;
  REQUIRE(wlqg_gains_from_json(text, &back) == WLQG_OK);
  std::unique_ptr<wlqg_gains, GainsDeleter> owned_back(back);
  std::vector<double> a(6), b(6);
  wlqg_gains_first_row(k.get(), 1, a.data(), 6);
  wlqg_gains_first_row(back, 1, b.data(), 6);
  CHECK(a == b);
  CHECK(wlqg_gains_from_json("[]", &back) == WLQG_PARSE);
}

TEST_CASE("reports, dual cost and closed loop") {
  const wlqg_nondim p = point(0.3, 1.2, 2, 3, 8);
  wlqg_report r{};
  REQUIRE(wlqg_report_compute(&p, &r) == WLQG_OK);
  CHECK(r.j_lqg > 0);
  double dual = 0;
  REQUIRE(wlqg_lqg_cost_dual(&p, &dual) == WLQG_OK);
  CHECK_THAT(dual, WithinRel(r.j_lqg, 1e-6));
  char* text = nullptr;
  REQUIRE(wlqg_report_to_json(&r, &text) == WLQG_OK);
  OwnedString owned(text);
  wlqg_report back{};
  REQUIRE(wlqg_report_from_json(text, &back) == WLQG_OK);
  CHECK(std::memcmp(&back, &r, sizeof r) == 0);

  double ar, ae, aa, mismatch;
  REQUIRE(wlqg_closed_loop_check(&p, &ar, &ae, &aa, &mismatch) == WLQG_OK);
  CHECK(ar < 0);
  CHECK(ae < 0);
  CHECK(aa < 0);
  CHECK(mismatch <= 1e-8);
}

TEST_CASE("sweep handles") {
  const double pi1[] = {0.5, 2.0};
  const double pi34[] = {1.0, 4.0};
  wlqg_sweep_grid grid{pi1, 2, pi34, 2, 1.0, 8, 1, 1.0, 0};
  wlqg_sweep* s = nullptr;
  REQUIRE(wlqg_sweep_run(&grid, &s) == WLQG_OK);
  std::unique_ptr<wlqg_sweep, SweepDeleter> owned(s);
  size_t count = 0;
  REQUIRE(wlqg_sweep_rows(s, &count) == WLQG_OK);
  CHECK(count == 4);
  wlqg_sweep_row row{};
  REQUIRE(wlqg_sweep_row_at(s, 1, &row) == WLQG_OK);
  CHECK(row.params.pi1 == 0.5);
  CHECK(row.params.pi4 == 4.0);
  CHECK(row.on_curve_kf == 1);
  wlqg_report direct{};
  wlqg_report_compute(&row.params, &direct);
  CHECK(std::memcmp(&direct, &row.report, sizeof direct) == 0);
  CHECK(wlqg_sweep_row_at(s, 4, &row) == WLQG_INVALID_ARGUMENT);

  char* csv = nullptr;
  REQUIRE(wlqg_sweep_csv(s, &csv) == WLQG_OK);
  OwnedString owned_csv(csv);
  CHECK(std::string(csv).rfind(
            "pi1,pi2,pi3,pi4,n,j_lqr,j_kf,j_lqg,offdiag_k1,offdiag_k2,offdiag_l1,offdiag_l2,res_k,res_l,on_curve\n",
            0) == 0);

  const double bad34[] = {1.0, -4.0};
  grid.pi34_values = bad34;
  wlqg_sweep* none = nullptr;
  CHECK(wlqg_sweep_run(&grid, &none) == WLQG_DOMAIN);
  CHECK(none == nullptr);

  std::vector<double> vals(5);
  REQUIRE(wlqg_log_grid(0.1, 10, 5, vals.data()) == WLQG_OK);
  CHECK_THAT(vals[2], WithinRel(1.0, 1e-15));
  wlqg_sweep* curve = nullptr;
  REQUIRE(wlqg_curve_run(vals.data(), vals.size(), 1.0, 8, 0, &curve) == WLQG_OK);
  std::unique_ptr<wlqg_sweep, SweepDeleter> owned_curve(curve);
  char* ccsv = nullptr;
  REQUIRE(wlqg_sweep_curve_csv(curve, &ccsv) == WLQG_OK);
  OwnedString owned_ccsv(ccsv);
  CHECK(std::string(ccsv).rfind("pi1,j_kf,j_lqr,j_lqg\n", 0) == 0);
}

TEST_CASE("simulation handles") {
  wlqg_sim_config cfg = wlqg_sim_config_default();
  CHECK(cfg.dt == 0.01);
  CHECK(cfg.n_realizations == 20);
  cfg.params = point(0.5, 1, 4, 4, 4);
  cfg.t_final = 10;
  cfg.n_realizations = 2;
  cfg.record_stride = 100;
  wlqg_sim* sim = nullptr;
  REQUIRE(wlqg_simulate(&cfg, &sim) == WLQG_OK);
  std::unique_ptr<wlqg_sim, SimDeleter> owned(sim);
  wlqg_sim_summary sum{};
  REQUIRE(wlqg_sim_summary_get(sim, &sum) == WLQG_OK);
  CHECK(sum.steps == 1000);
  CHECK(sum.analytic_lqg_cost > 0);
  char* js = nullptr;
  REQUIRE(wlqg_sim_summary_json(sim, &js) == WLQG_OK);
  OwnedString owned_js(js);
  const json j = json::parse(js);
  CHECK(j["seed"] == cfg.seed);
  CHECK(j["generator"].get<std::string>().find("mt19937_64") != std::string::npos);
  char* csv = nullptr;
  REQUIRE(wlqg_sim_trajectory_csv(sim, &csv) == WLQG_OK);
  OwnedString owned_csv(csv);
  const std::string text(csv);
  CHECK(text.rfind("t,running_cost,phi_0,phi_1,phi_2,phi_3,dphi_0", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 12);

  const double state[8] = {1, 0, 0, 0, 0, 0, 0, 0};
  cfg.initial_state = state;
  cfg.noise_scale = 0;
  wlqg_sim* det = nullptr;
  REQUIRE(wlqg_simulate(&cfg, &det) == WLQG_OK);
  std::unique_ptr<wlqg_sim, SimDeleter> owned_det(det);
  wlqg_sim_summary_get(det, &sum);
  CHECK(sum.empirical_lqg_cost_stderr == 0.0);

  cfg.dt = 1.0;
  wlqg_sim* none = nullptr;
  CHECK(wlqg_simulate(&cfg, &none) == WLQG_DOMAIN);
  CHECK_THAT(std::string(wlqg_last_error()), ContainsSubstring("dt"));
  const wlqg_nondim p = point(0, 1, 4, 4, 8);
  CHECK_THAT(wlqg_sim_max_dt(&p), WithinRel(0.1 / std::sqrt(12.0), 1e-15));
}

TEST_CASE("correlated noise draws") {
  std::vector<double> a(3 * 8), b(3 * 8);
  REQUIRE(wlqg_sample_correlated_noise(1.0, 8, 5, 3, a.data()) == WLQG_OK);
  REQUIRE(wlqg_sample_correlated_noise(1.0, 8, 5, 3, b.data()) == WLQG_OK);
  CHECK(a == b);
  CHECK(wlqg_sample_correlated_noise(-1.0, 8, 5, 3, a.data()) == WLQG_DOMAIN);
  CHECK(wlqg_sample_correlated_noise(1.0, 8, 5, 3, nullptr) == WLQG_INVALID_ARGUMENT);
}

TEST_CASE("verification entry point") {
  const wlqg_nondim p = point(0.2, 1, 2, 3, 8);
  int passed = 0;
  char* report = nullptr;
  REQUIRE(wlqg_verify(&p, nullptr, &passed, &report) == WLQG_OK);
  OwnedString owned(report);
  CHECK(passed == 1);
  CHECK(json::parse(report)["passed"] == true);

  auto k = synth(p, WLQG_LQR);
  char* text = nullptr;
  wlqg_gains_to_json(k.get(), &text);
  json g = json::parse(text);
  wlqg_string_free(text);
  g["block2_first_row"][0] = g["block2_first_row"][0].get<double>() * 1.01;
  REQUIRE(wlqg_verify(&p, g.dump().c_str(), &passed, nullptr) == WLQG_OK);
  CHECK(passed == 0);
}

TEST_CASE("last error is per thread") {
  const wlqg_nondim bad = point(0, 1, 1, -1, 8);
  REQUIRE(wlqg_nondim_validate(&bad) == WLQG_DOMAIN);
  std::string other;
  std::thread t([&] {
    const wlqg_nondim good = point(0, 1, 1, 1, 8);
    wlqg_nondim_validate(&good);
    other = wlqg_last_error();
  });
  t.join();
  CHECK(other.empty());
  CHECK_THAT(std::string(wlqg_last_error()), ContainsSubstring("pi4"));
}
