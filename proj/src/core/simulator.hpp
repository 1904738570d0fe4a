#pragma once

// Euler-Maruyama simulation of the closed-loop LQG system
//
//   dPhi  = A Phi dt + B (omega dt + dW_rho)
//   dY    = C Phi dt + dW_eta,          Cov(dW_eta) = (I - pi1 D2)^{-1} dt
//   dPhi~ = (A - L C) Phi~ dt + B omega dt + L dY,   omega = -K Phi~
//
// with unit-intensity disturbance on every site.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "core/nondim.hpp"

namespace wavelqg::simulator {

using Rng = std::mt19937_64;

inline constexpr const char* kGeneratorName =
    "mt19937_64 seeded per realization by splitmix64(seed, index); std::normal_distribution";

struct SimConfig {
  NondimParams params;
  double dt = 0.01;
  double t_final = 2000.0;
  std::uint64_t seed = 1;
  double burn_in = 0.2;  // fraction of the horizon dropped from the averages
  std::size_t n_realizations = 20;
  double noise_scale = 1.0;  // 0 turns the simulation deterministic
  std::vector<double> initial_state;     // 2n entries, empty means zero
  std::vector<double> initial_estimate;  // 2n entries, empty means zero
  std::size_t record_stride = 0;         // 0: no trajectory; else every k-th step of realization 0
  unsigned threads = 0;
};

// Largest admissible step: 0.1 / sqrt(4 + pi3 + pi4).
double max_stable_dt(const NondimParams& p);
void validate(const SimConfig& cfg);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> plant_state;
  std::vector<std::vector<double>> estimate;
  std::vector<std::vector<double>> control;
  std::vector<double> running_cost;
};

struct SimSummary {
  double empirical_lqg_cost = 0.0;
  double empirical_lqg_cost_stderr = 0.0;
  double empirical_est_err_cov_trace = 0.0;
  double empirical_est_err_cov_trace_stderr = 0.0;
  double analytic_lqg_cost = 0.0;
  double analytic_kf_cost = 0.0;
  // Time-averaged estimation error per state component, averaged over
  // realizations, with its standard error across realizations.
  std::vector<double> mean_estimation_error;
  std::vector<double> mean_estimation_error_stderr;
  std::vector<double> realization_costs;
  std::vector<double> realization_err_traces;
  std::uint64_t seed = 0;
  double dt = 0.0;
  double t_final = 0.0;
  double burn_in = 0.0;
  std::size_t n_realizations = 0;
  std::size_t steps = 0;
  std::string generator = kGeneratorName;
};

struct SimResult {
  Trajectory trajectory;
  SimSummary summary;
};

// Sub-seed for realization `index`.
std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index);

// One draw of N(0, (I - pi1 D2)^{-1}), shaped in frequency space.
std::vector<double> sample_correlated_noise(double pi1, std::size_t n, Rng& rng);

// Phi^T diag(I - pi1 D2, pi2 I) Phi for Phi = [phi; dphi].
double state_cost_integrand(const NondimParams& p, std::span<const double> state);

// Throws InstabilityError when any state magnitude exceeds 1e12.
SimResult simulate(const SimConfig& cfg);

}  // namespace wavelqg::simulator
