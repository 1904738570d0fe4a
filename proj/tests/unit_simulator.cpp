#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <random>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/oracle.hpp"
#include "core/simulator.hpp"
#include "test_support.hpp"

using namespace wavelqg;
using namespace wavelqg::simulator;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.params = NondimParams{0.5, 1, 4, 4, 4};
  cfg.dt = 0.01;
  cfg.t_final = 20;
  cfg.n_realizations = 3;
  return cfg;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t m) {
  std::normal_distribution<double> g;
  std::vector<double> v(m);
  for (auto& x : v) x = g(rng);
  return v;
}

MatrixXd noise_covariance(double pi1, std::size_t n) {
  const MatrixXd d2 = oracle::dense_laplacian(n);
  return (MatrixXd::Identity(n, n) - pi1 * d2).inverse();
}

}  // namespace

TEST_CASE("step guard and config validation", "[simulator]") {
  CHECK_THAT(max_stable_dt(NondimParams{0, 1, 4, 4, 8}), WithinRel(0.1 / std::sqrt(12.0), 1e-15));
  auto cfg = small_config();
  CHECK_NOTHROW(validate(cfg));
  cfg.dt = 1.01 * max_stable_dt(cfg.params);
  CHECK_THROWS_AS(validate(cfg), DomainError);
  cfg = small_config();
  cfg.t_final = 50 * cfg.dt;
  CHECK_THROWS_AS(validate(cfg), DomainError);
  cfg = small_config();
  cfg.n_realizations = 0;
  CHECK_THROWS_AS(validate(cfg), DomainError);
  cfg = small_config();
  cfg.burn_in = 1.0;
  CHECK_THROWS_AS(validate(cfg), DomainError);
  cfg = small_config();
  cfg.initial_state = {1.0};
  CHECK_THROWS_AS(validate(cfg), DomainError);
  cfg = small_config();
  cfg.params.pi2 = -1;
  CHECK_THROWS_AS(validate(cfg), DomainError);
}

TEST_CASE("zero noise from rest stays at rest", "[simulator]") {
  auto cfg = small_config();
  cfg.noise_scale = 0.0;
  cfg.record_stride = 7;
  const auto res = simulate(cfg);
  CHECK(res.summary.empirical_lqg_cost == 0.0);
  CHECK(res.summary.empirical_est_err_cov_trace == 0.0);
  for (const auto& s : res.trajectory.plant_state)
    for (double v : s) CHECK(v == 0.0);
  for (double c : res.trajectory.running_cost) CHECK(c == 0.0);
}

TEST_CASE("zero noise from a random state decays", "[simulator]") {
  std::mt19937_64 rng(1);
  auto cfg = small_config();
  cfg.noise_scale = 0.0;
  cfg.t_final = 60;
  cfg.n_realizations = 1;
  cfg.record_stride = 100;
  cfg.initial_state = random_vector(rng, 8);
  const auto res = simulate(cfg);
  const auto& tr = res.trajectory;
  double first = 0, last = 0, est_last = 0;
  for (double v : tr.plant_state.front()) first = std::max(first, std::abs(v));
  for (double v : tr.plant_state.back()) last = std::max(last, std::abs(v));
  for (double v : tr.estimate.back()) est_last = std::max(est_last, std::abs(v));
  CHECK(last < 1e-6 * first);
  CHECK(est_last < 1e-6 * first);
}

TEST_CASE("estimation error decays at the estimator rate", "[simulator]") {
  // Without noise e = x - xhat obeys e+ = (I + dt (A - LC)) e exactly, so
  // |e(t)| <= cond(V) |e(0)| rho^(t/dt) with V the eigenvectors of A - LC and
  // rho the spectral radius of the step. The continuous rate |abscissa| is
  // recovered up to the first-order Euler-Maruyama defect.
  std::mt19937_64 rng(2);
  for (const auto& p : {NondimParams{0.5, 1, 4, 4, 4}, NondimParams{0.1, 2, 1, 3, 6}}) {
    SimConfig cfg;
    cfg.params = p;
    cfg.noise_scale = 0.0;
    cfg.dt = 1e-3;
    cfg.n_realizations = 1;
    cfg.initial_state = random_vector(rng, 2 * p.n);
    const MatrixXd est = analysis::build_closed_loop(p).estimator();
    const double a = std::abs(oracle::spectral_abscissa(est));
    cfg.t_final = 40 / a;
    cfg.record_stride = 50;
    const auto res = simulate(cfg);
    const auto& tr = res.trajectory;

    Eigen::EigenSolver<MatrixXd> es(est);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(es.eigenvectors());
    const double cond = svd.singularValues()(0) / svd.singularValues().tail(1)(0);
    const auto lambdas = es.eigenvalues();
    double rho = 0.0, radius = 0.0;
    for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
      rho = std::max(rho, std::abs(1.0 + cfg.dt * lambdas[i]));
      radius = std::max(radius, std::abs(lambdas[i]));
    }
    const double discrete_rate = -std::log(rho) / cfg.dt;
    INFO("abscissa " << a << " discrete rate " << discrete_rate << " cond " << cond);
    CHECK(std::abs(discrete_rate - a) <= cfg.dt * radius * radius);

    auto error_norm = [&](std::size_t i) {
      double e = 0.0;
      for (std::size_t j = 0; j < tr.plant_state[i].size(); ++j) {
        const double d = tr.plant_state[i][j] - tr.estimate[i][j];
        e += d * d;
      }
      return std::sqrt(e);
    };
    const double e0 = error_norm(0);
    for (std::size_t i = 1; i < tr.times.size(); ++i) {
      const double steps = std::round(tr.times[i] / cfg.dt);
      CHECK(error_norm(i) <= (1 + 1e-9) * cond * e0 * std::pow(rho, steps));
    }
    const double last = error_norm(tr.times.size() - 1);
    CHECK(last < 1e-12 * e0 * cond);
  }
}

TEST_CASE("seeded runs are bitwise reproducible", "[simulator]") {
  auto cfg = small_config();
  cfg.record_stride = 5;
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  CHECK(a.trajectory.plant_state == b.trajectory.plant_state);
  CHECK(a.trajectory.estimate == b.trajectory.estimate);
  CHECK(a.summary.realization_costs == b.summary.realization_costs);
  cfg.seed = 2;
  CHECK(simulate(cfg).summary.realization_costs != a.summary.realization_costs);
}

TEST_CASE("parallel realizations equal serial ones", "[simulator]") {
  auto cfg = small_config();
  cfg.n_realizations = 6;
  cfg.threads = 1;
  const auto serial = simulate(cfg).summary;
  cfg.threads = 4;
  const auto parallel = simulate(cfg).summary;
  CHECK(serial.realization_costs == parallel.realization_costs);
  CHECK(serial.realization_err_traces == parallel.realization_err_traces);
  CHECK(serial.mean_estimation_error == parallel.mean_estimation_error);
}

TEST_CASE("sub-seeds are distinct and stable", "[simulator]") {
  CHECK(realization_seed(1, 0) == realization_seed(1, 0));
  CHECK(realization_seed(1, 0) != realization_seed(1, 1));
  CHECK(realization_seed(1, 0) != realization_seed(2, 0));
}

TEST_CASE("trajectory bookkeeping", "[simulator]") {
  auto cfg = small_config();
  cfg.record_stride = 10;
  const auto res = simulate(cfg);
  const auto& tr = res.trajectory;
  const std::size_t samples = res.summary.steps / 10 + 1;
  CHECK(res.summary.steps == 2000);
  CHECK(tr.times.size() == samples);
  CHECK(tr.plant_state.size() == samples);
  CHECK(tr.estimate.size() == samples);
  CHECK(tr.control.size() == samples);
  CHECK(tr.running_cost.size() == samples);
  CHECK(tr.plant_state[0].size() == 8);
  CHECK(tr.control[0].size() == 4);
  for (std::size_t i = 1; i < samples; ++i) CHECK(tr.running_cost[i] >= tr.running_cost[i - 1]);
  CHECK_THAT(tr.times.back(), WithinAbs(cfg.t_final, 1e-9));
  CHECK(res.summary.seed == cfg.seed);
  CHECK(res.summary.generator.find("mt19937_64") != std::string::npos);
  CHECK(simulate(small_config()).trajectory.times.empty());
}

TEST_CASE("state cost integrand is potential plus L2 energy", "[simulator]") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto p = testing::random_params(rng, testing::pick(rng, {2, 3, 8, 17}));
    const std::size_t n = p.n;
    const auto s = random_vector(rng, 2 * n);
    const VectorXd phi = Eigen::Map<const VectorXd>(s.data(), n);
    const VectorXd dphi = Eigen::Map<const VectorXd>(s.data() + n, n);
    const MatrixXd d2 = oracle::dense_laplacian(n);
    const double potential = -phi.dot(d2 * phi);
    const double expect = phi.squaredNorm() + p.pi1 * potential + p.pi2 * dphi.squaredNorm();
    const MatrixXd w = MatrixXd::Identity(n, n) - p.pi1 * d2;
    const double quadratic = phi.dot(w * phi) + p.pi2 * dphi.squaredNorm();
    const double got = state_cost_integrand(p, s);
    CHECK(potential >= -1e-12);
    CHECK_THAT(got, WithinRel(expect, 1e-12));
    CHECK_THAT(got, WithinRel(quadratic, 1e-12));
  }
  CHECK_THROWS_AS(state_cost_integrand(NondimParams{0, 1, 1, 1, 4}, std::vector<double>(7)), DomainError);
}

TEST_CASE("noise sampler is the covariance square root applied to white noise", "[simulator]") {
  for (double pi1 : {0.0, 0.3, 1.0, 5.0}) {
    for (std::size_t n : {2u, 4u, 7u, 8u}) {
      const MatrixXd cov = noise_covariance(pi1, n);
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(cov);
      const MatrixXd root = es.operatorSqrt();
      Rng a(42), b(42);
      for (int draw = 0; draw < 5; ++draw) {
        const auto sample = sample_correlated_noise(pi1, n, a);
        std::normal_distribution<double> normal(0.0, 1.0);
        VectorXd white(n);
        for (std::size_t i = 0; i < n; ++i) white[i] = normal(b);
        const VectorXd expect = root * white;
        for (std::size_t i = 0; i < n; ++i) CHECK_THAT(sample[i], WithinAbs(expect[i], 1e-12));
      }
    }
  }
  Rng rng(1);
  CHECK_THROWS_AS(sample_correlated_noise(-1, 4, rng), DomainError);
}

TEST_CASE("noise covariance examples", "[simulator]") {
  const MatrixXd inv = noise_covariance(1.0, 4).inverse();
  const double row[4] = {3, -1, 0, -1};
  for (int j = 0; j < 4; ++j) CHECK_THAT(inv(0, j), WithinAbs(row[j], 1e-12));
  for (double pi1 : {0.0, 1.0, 2.5}) {
    const std::size_t n = 8;
    const auto d = spectral::laplacian_spectrum(n).real_values();
    double site = 0.0;
    for (double v : d) site += 1.0 / (1.0 - pi1 * v);
    site /= static_cast<double>(n);
    const MatrixXd cov = noise_covariance(pi1, n);
    for (std::size_t i = 0; i < n; ++i) CHECK_THAT(cov(i, i), WithinRel(site, 1e-12));
  }
  CHECK(noise_covariance(0.0, 5).isIdentity(1e-15));
}

TEST_CASE("blow-up is reported as an instability", "[simulator]") {
  auto cfg = small_config();
  cfg.noise_scale = 0.0;
  cfg.initial_state.assign(8, 1e13);
  CHECK_THROWS_AS(simulate(cfg), InstabilityError);
}
