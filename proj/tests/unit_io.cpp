#include <catch_amalgamated.hpp>

#include <chrono>
#include <random>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/serialize.hpp"
#include "core/simulator.hpp"
#include "core/verify.hpp"
#include "test_support.hpp"

using namespace wavelqg;
using nlohmann::json;

TEST_CASE("nondimensional and dimensional parameter schemas", "[io]") {
  const NondimParams p{0.25, 1.5, 3, 4, 12};
  CHECK(io::params_from_json(io::to_json(p)) == p);
  CHECK(io::to_json(p) == json{{"pi1", 0.25}, {"pi2", 1.5}, {"pi3", 3.0}, {"pi4", 4.0}, {"n", 12}});

  DimensionalParams d;
  d.r = 2;
  d.sigma_d = 2;
  d.alpha = 1;
  d.n = 8;
  CHECK(io::dimensional_from_json(io::to_json(d)) == d);
  const auto via = io::params_from_json(io::to_json(d));
  CHECK(via == nondimensionalize(d));

  json both = io::to_json(p);
  both["c"] = 1.0;
  CHECK_THROWS_AS(io::params_from_json(both), ParseError);
  json missing = io::to_json(p);
  missing.erase("pi3");
  CHECK_THROWS_AS(io::params_from_json(missing), ParseError);
  json wrong_type = io::to_json(p);
  wrong_type["pi1"] = "x";
  CHECK_THROWS_AS(io::params_from_json(wrong_type), ParseError);
  json invalid = io::to_json(p);
  invalid["pi2"] = -1;
  CHECK_THROWS_AS(io::params_from_json(invalid), DomainError);
  CHECK_THROWS_AS(io::params_from_json(json::object()), ParseError);
}

TEST_CASE("parse wraps syntax errors", "[io]") {
  CHECK_THROWS_AS(io::parse("{\"pi1\": "), ParseError);
  CHECK(io::parse("{\"a\": 1}")["a"] == 1);
}

TEST_CASE("gain set export", "[io]") {
  const auto g = synthesis::lqr_gains(NondimParams{0.5, 1, 4, 4, 6});
  const json j = io::to_json(g);
  CHECK(j["kind"] == "lqr");
  CHECK(j["n"] == 6);
  CHECK(j["pi"]["pi3"] == 4.0);
  CHECK(j["block1_first_row"].size() == 6);
  CHECK(j["block2_first_row"].size() == 6);
  CHECK(j["spectral"]["k0"].size() == 6);
  CHECK(j["spectral"]["companion"].size() == 6);
  const auto back = io::gain_set_from_json(j);
  CHECK(back.kind == g.kind);
  CHECK(back.params == g.params);
  CHECK(back.block1.first_row() == g.block1.first_row());
  CHECK(back.block2.first_row() == g.block2.first_row());
  CHECK(back.spectral.base == g.spectral.base);

  const auto l = synthesis::kf_gains(NondimParams{0.3, 1, 2, 5, 5});
  CHECK(io::to_json(l)["kind"] == "kf");
  CHECK(io::gain_set_from_json(io::to_json(l)).block2.first_row() == l.block2.first_row());

  json bad = j;
  bad["block1_first_row"].erase(0);
  CHECK_THROWS_AS(io::gain_set_from_json(bad), ParseError);
  bad = j;
  bad["kind"] = "hinf";
  CHECK_THROWS_AS(io::gain_set_from_json(bad), ParseError);
}

TEST_CASE("reports roundtrip losslessly", "[io]") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const auto r = analysis::report(testing::random_params(rng, 10));
    CHECK(io::report_from_json(io::parse(io::to_json(r).dump())) == r);
  }
}

TEST_CASE("simulation summary metadata", "[io]") {
  simulator::SimConfig cfg;
  cfg.params = NondimParams{0.5, 1, 4, 4, 4};
  cfg.t_final = 5;
  cfg.n_realizations = 2;
  cfg.seed = 77;
  const json j = io::to_json(simulator::simulate(cfg).summary);
  CHECK(j["seed"] == 77);
  CHECK(j["dt"] == 0.01);
  CHECK(j["generator"] == simulator::kGeneratorName);
  for (const char* key : {"empirical_lqg_cost", "empirical_est_err_cov_trace", "analytic_lqg_cost",
                          "analytic_kf_cost", "n_realizations", "steps", "burn_in", "t_final"})
    CHECK(j.contains(key));
}

TEST_CASE("verify passes at default parameters", "[io]") {
  NondimParams p;
  p.n = 8;
  const auto r = verify::run(p);
  CHECK(r.passed);
  bool dense_ran = false;
  for (const auto& c : r.checks) {
    INFO(c.name << " " << c.value << " " << c.note);
    CHECK((c.passed || c.skipped));
    if (c.name == "lqr_dense_gain_agreement") dense_ran = !c.skipped;
  }
  CHECK(dense_ran);
  const json j = verify::to_json(r);
  CHECK(j["passed"] == true);
  CHECK(j["failures"].empty());
}

TEST_CASE("verify at n=30 random parameters is fast", "[io]") {
  std::mt19937_64 rng(2);
  const auto p = testing::random_params(rng, 30);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = verify::run(p);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(r.passed);
  CHECK(secs < 10.0);
}

TEST_CASE("verify skips dense checks above the size cap", "[io]") {
  verify::Options opts;
  opts.dense_max_n = 4;
  const auto r = verify::run(NondimParams{0.1, 1, 1, 1, 8}, opts);
  CHECK(r.passed);
  bool skipped = false;
  for (const auto& c : r.checks) skipped = skipped || c.skipped;
  CHECK(skipped);
}

TEST_CASE("corrupted gain set fails with the offending frequency", "[io]") {
  const NondimParams p{0.2, 1, 2, 3, 8};
  auto good = synthesis::lqr_gains(p);
  auto r = verify::run(p);
  verify::check_gain_set(r, good);
  CHECK(r.passed);

  json j = io::to_json(good);
  j["block1_first_row"][1] = j["block1_first_row"][1].get<double>() + 1e-3;
  j["block1_first_row"][7] = j["block1_first_row"][7].get<double>() + 1e-3;
  auto bad = verify::run(p);
  verify::check_gain_set(bad, io::gain_set_from_json(j));
  CHECK_FALSE(bad.passed);
  bool located = false;
  for (const auto& c : bad.checks)
    if (!c.passed && !c.skipped && c.kappa.has_value()) located = true;
  CHECK(located);
  CHECK_FALSE(verify::to_json(bad)["failures"].empty());
}
