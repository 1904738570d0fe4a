// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/nondim.hpp"
#include "core/oracle.hpp"
#include "core/simulator.hpp"
#include "core/spectral.hpp"
#include "core/synthesis.hpp"
#include "test_support.hpp"

using namespace wavelqg;
using Eigen::Matrix2d;
using Eigen::MatrixXd;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double rel_diff(const MatrixXd& got, const MatrixXd& ref) {
  return (got - ref).cwiseAbs().maxCoeff() / std::max(ref.cwiseAbs().maxCoeff(), 1e-300);
}

Matrix2d riccati_block(const synthesis::RiccatiSpectrum& s, std::size_t k) {
  Matrix2d m;
  m << s.diag1[k], s.p0[k], s.p0[k], s.diag2[k];
  return m;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240101);
  double worst_gain = 0, worst_res = 0;
  for (int i = 0; i < 50; ++i) {
    const auto p = testing::random_params(rng, testing::pick(rng, {2, 4, 8, 16, 30}));
    const auto k_dense = oracle::solve_care_dense(oracle::wave_control_full(p)).gain;
    const auto l_dense = oracle::solve_fare_dense(oracle::wave_filter_full(p)).gain;
    worst_gain = std::max(worst_gain, rel_diff(synthesis::dense_gain(synthesis::lqr_gains(p)), k_dense));
    worst_gain = std::max(worst_gain, rel_diff(synthesis::dense_gain(synthesis::kf_gains(p)), l_dense));

    const auto d = spectral::laplacian_spectrum(p.n).real_values();
    const auto ps = synthesis::lqr_riccati_spectrum(p);
    const auto ss = synthesis::kf_riccati_spectrum(p);
    for (std::size_t k = 0; k < p.n; ++k) {
      worst_res = std::max(worst_res, oracle::care_residual(oracle::wave_control_block(p, d[k]), riccati_block(ps, k)));
      worst_res = std::max(worst_res, oracle::fare_residual(oracle::wave_filter_block(p, d[k]), riccati_block(ss, k)));
    }
  }
  const double t = seconds_since(t0);
  return {worst_gain <= 1e-7 && worst_res <= 1e-9 && t < 60.0,
          fmt("gain rel err %.3g (<= 1e-7), ARE residual %.3g (<= 1e-9), %.2f s (< 60)", worst_gain, worst_res, t)};
}

Outcome decentralized_point() {
  const auto t0 = Clock::now();
  const NondimParams p{0.5, 1.0, 4.0, 4.0, 30};
  const auto k = synthesis::lqr_gains(p);
  const auto l = synthesis::kf_gains(p);
  const double t = seconds_since(t0);
  const MatrixXd eye = MatrixXd::Identity(30, 30);
  auto dense = [](const spectral::Circulant& c) {
    MatrixXd m(c.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) m(i, j) = c(i, j);
    return m;
  };
  const double err = std::max({rel_diff(dense(k.block1), p.pi3 * eye),
                               rel_diff(dense(k.block2), std::sqrt(2 * p.pi3 + p.pi2 * p.pi3 * p.pi3) * eye),
                               rel_diff(dense(l.block1), std::sqrt(2 / p.pi4) * eye), rel_diff(dense(l.block2), eye)});
  const double off = std::max({spectral::offdiag_mass(k.block1), spectral::offdiag_mass(k.block2),
                               spectral::offdiag_mass(l.block1), spectral::offdiag_mass(l.block2)});
  return {err <= 1e-12 && off <= 1e-10 && t < 1.0,
          fmt("closed-form rel err %.3g, offdiag %.3g (<= 1e-10), %.4f s (< 1)", err, off, t)};
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

Outcome impossibility() {
  const auto grid = analysis::log_grid(1e-3, 1e3, 30);
  double min_k = std::numeric_limits<double>::infinity(), min_l = min_k;
  for (double v : grid) {
    min_k = std::min(min_k, spread(synthesis::lqr_spectral_gain({0.0, 1.0, v, 1.0, 30}).base));
    min_l = std::min(min_l, spread(synthesis::kf_spectral_gain({0.0, 1.0, 1.0, v, 30}).base));
  }
  return {min_k > 0 && min_l > 0, fmt("min spread K0 %.3g, L0 %.3g (> 0)", min_k, min_l)};
}

Outcome dimensional_locality() {
  const double dxs[] = {1e-3, 1e-1, 1.0, 7.0, 1e2};
  const std::size_t ns[] = {2, 8, 30, 64};
  double worst = 0;
  int i = 0;
  for (double dx : dxs) {
    for (std::size_t n : ns) {
      DimensionalParams d;
      d.c = 0.5 + i;
      d.dx = dx;
      d.n = n;
      d.sigma_m = 0.3 * (i + 1);
      d.sigma_d = 2.0 / (i + 1);
      d.q1 = d.sigma_m;
      d.r = d.sigma_d;
      d.q2 = 1.0 + i;
      d.alpha = d.c * std::sqrt(2 * d.sigma_m / d.sigma_d);
      const auto p = nondimensionalize(d);
      const auto [rk, rl] = locality_residuals(p);
      worst = std::max({worst, std::abs(rk) / p.pi1, std::abs(rl) / p.pi1});
      ++i;
    }
  }
  return {worst <= 1e-12, fmt("20 cases, worst |residual| / pi1 %.3g (<= 1e-12)", worst)};
}

Outcome closed_loop() {
  std::mt19937_64 rng(7);
  double worst_abscissa = -std::numeric_limits<double>::infinity(), worst_sep = 0;
  try {
    for (int i = 0; i < 20; ++i) {
      const auto p = testing::random_params(rng, testing::pick(rng, {2, 4, 8, 16}));
      const auto loop = analysis::build_closed_loop(p);
      worst_abscissa = std::max(worst_abscissa, oracle::spectral_abscissa(loop.augmented()));
      worst_sep = std::max(worst_sep, analysis::separation_mismatch(loop));
    }
  } catch (const std::exception& e) {
    return {false, std::string("closed loop rejected: ") + e.what()};
  }
  return {worst_abscissa < 0 && worst_sep <= 1e-8,
          fmt("max augmented abscissa %.3g (< 0), separation mismatch %.3g (<= 1e-8)", worst_abscissa, worst_sep)};
}

Outcome cost_identity() {
  std::mt19937_64 rng(11);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const auto p = testing::random_params(rng, testing::pick(rng, {2, 4, 8, 16}));
    worst = std::max(worst, testing::rel_err(analysis::lqg_cost_dual(p), analysis::lqg_cost(p)));
  }
  return {worst <= 1e-6, fmt("worst rel diff %.3g (<= 1e-6)", worst)};
}

Outcome monte_carlo() {
  const auto t0 = Clock::now();
  simulator::SimConfig cfg;
  cfg.params = {0.5, 1.0, 4.0, 4.0, 8};
  cfg.dt = 0.01;
  cfg.t_final = 2000.0;
  cfg.n_realizations = 20;
  const auto s = simulator::simulate(cfg).summary;
  const double t = seconds_since(t0);
  const double ec = testing::rel_err(s.empirical_lqg_cost, s.analytic_lqg_cost);
  const double ee = testing::rel_err(s.empirical_est_err_cov_trace, s.analytic_kf_cost);
  return {ec <= 0.05 && ee <= 0.05 && t < 300.0,
          fmt("lqg cost rel err %.4f, estimation-error trace rel err %.4f (<= 0.05), %.1f s (< 300)", ec, ee, t)};
}

Outcome sweep_shape() {
  const auto t0 = Clock::now();
  const auto grid = analysis::default_sweep_grid();
  const auto rows = analysis::sweep(grid);
  bool finite = true;
  for (const auto& r : rows) finite = finite && std::isfinite(r.report.j_lqr) && std::isfinite(r.report.j_kf);

  const std::size_t cols = grid.pi34_values.size(), nrows = grid.pi1_values.size();
  std::size_t slices = 0, bad = 0;
  double worst_ratio = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<double> cost(nrows);
    std::size_t at = nrows;
    for (std::size_t i = 0; i < nrows; ++i) {
      const auto& r = rows[i * cols + c];
      cost[i] = r.report.j_kf;
      if (r.on_curve_kf) at = i;
    }
    if (at == nrows) continue;
    ++slices;
    const bool is_max = cost[at] >= *std::max_element(cost.begin(), cost.end());
    double ratio = 1;
    for (std::size_t j : {at - 1, at + 1}) {
      if (j < nrows) ratio = std::max({ratio, cost[at] / cost[j], cost[j] / cost[at]});
    }
    worst_ratio = std::max(worst_ratio, ratio);
    if (is_max || !(ratio < 10)) ++bad;
  }

  const auto curve = analysis::decentralization_curve(analysis::log_grid(0.1, 10.0, 50), 1.0, 30);
  const double small_end = curve.front().report.j_lqg, large_end = curve.back().report.j_lqg;
  const double t = seconds_since(t0);
  const bool ok = finite && slices > 0 && bad == 0 && small_end < large_end && t < 120.0;
  return {ok, std::string(finite ? "(a) finite" : "(a) non-finite cost") +
                  fmt("; (b) %.0f slices, %.0f bad, worst neighbour ratio %.3g (< 10)", double(slices), double(bad),
                      worst_ratio) +
                  fmt("; (c) j_lqg %.4g at pi1=0.1 vs %.4g at pi1=10", small_end, large_end) +
                  fmt("; %.1f s (< 120)", t)};
}

Outcome noise_model() {
  const std::size_t n = 8, samples = 100000;
  const double pi1 = 1.0;
  const MatrixXd sigma = (MatrixXd::Identity(n, n) - pi1 * oracle::dense_laplacian(n)).inverse();
  simulator::Rng rng(12345);
  MatrixXd acc = MatrixXd::Zero(n, n);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto x = simulator::sample_correlated_noise(pi1, n, rng);
    const Eigen::Map<const Eigen::VectorXd> v(x.data(), n);
    acc += v * v.transpose();
  }
  const MatrixXd emp = acc / double(samples);
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double se = std::sqrt((sigma(i, i) * sigma(j, j) + sigma(i, j) * sigma(i, j)) / double(samples));
      worst = std::max(worst, std::abs(emp(i, j) - sigma(i, j)) / se);
    }
  }
  return {worst <= 3.0, fmt("worst entry %.2f standard errors (<= 3)", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"decentralized closed form", decentralized_point},
      {"no decentralization at pi1 = 0", impossibility},
      {"dimensional locality condition", dimensional_locality},
      {"closed-loop validity", closed_loop},
      {"cost identity", cost_identity},
      {"Monte-Carlo validation", monte_carlo},
      {"sweep shape", sweep_shape},
      {"noise model", noise_model},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d (%s): %s  %s\n", index++, name, o.passed ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
