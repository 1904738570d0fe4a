#include "core/simulator.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/spectral.hpp"
#include "core/synthesis.hpp"

namespace wavelqg::simulator {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kBlowUp = 1e12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Square root of the measurement-noise covariance, a circulant with
// spectrum (1 - pi1 D_k)^{-1/2}.
std::vector<double> noise_shaping_spectrum(double pi1, std::size_t n) {
  const auto d = spectral::laplacian_spectrum(n).real_values();
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = 1.0 / std::sqrt(1.0 - pi1 * d[k]);
  return s;
}

struct LoopMatrices {
  MatrixXd plant_step;     // I + dt A
  MatrixXd plant_control;  // dt B K
  MatrixXd est_step;       // I + dt (A - L C - B K)
  MatrixXd l;              // L
  MatrixXd c;              // C
  MatrixXd noise_sqrt;     // (I - pi1 D2)^{-1/2}
  MatrixXd k;              // K
};

LoopMatrices loop_matrices(const SimConfig& cfg) {
  const auto loop = analysis::build_closed_loop(cfg.params);
  const Eigen::Index m = loop.a.rows();
  const MatrixXd eye = MatrixXd::Identity(m, m);
  LoopMatrices out;
  out.k = loop.k();
  out.l = loop.l();
  out.c = loop.c_meas;
  out.plant_step = eye + cfg.dt * loop.a;
  out.plant_control = cfg.dt * loop.b * out.k;
  out.est_step = eye + cfg.dt * (loop.a - out.l * out.c - loop.b * out.k);
  out.noise_sqrt = spectral::to_dense(spectral::circulant_from_spectrum(
      spectral::Spectrum::from_real(noise_shaping_spectrum(cfg.params.pi1, cfg.params.n))));
  return out;
}

struct RealizationOutput {
  double cost = 0.0;
  double err_trace = 0.0;
  VectorXd mean_error;
  Trajectory trajectory;
};

std::vector<double> to_std(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

RealizationOutput run_realization(const SimConfig& cfg, const LoopMatrices& mats, std::size_t index,
                                  std::size_t steps, std::size_t burn_steps) {
  const std::size_t n = cfg.params.n;
  const auto en = static_cast<Eigen::Index>(n);
  const double r_weight = 1.0 / (cfg.params.pi3 * cfg.params.pi3);
  const double sqrt_dt = std::sqrt(cfg.dt);
  const bool noisy = cfg.noise_scale != 0.0;
  const bool record = index == 0 && cfg.record_stride > 0;

  Rng rng(realization_seed(cfg.seed, index));
  std::normal_distribution<double> normal(0.0, 1.0);

  VectorXd x = VectorXd::Zero(2 * en);
  VectorXd xh = VectorXd::Zero(2 * en);
  if (!cfg.initial_state.empty()) x = Eigen::Map<const VectorXd>(cfg.initial_state.data(), 2 * en);
  if (!cfg.initial_estimate.empty()) xh = Eigen::Map<const VectorXd>(cfg.initial_estimate.data(), 2 * en);

  VectorXd x_next(2 * en), xh_next(2 * en), omega(en), dy(en), w_rho(en), z(en), e(2 * en);
  VectorXd err_sum = VectorXd::Zero(2 * en);
  double cost_sum = 0.0, err_sq_sum = 0.0, running = 0.0;

  RealizationOutput out;
  auto push_sample = [&](std::size_t step) {
    out.trajectory.times.push_back(static_cast<double>(step) * cfg.dt);
    out.trajectory.plant_state.push_back(to_std(x));
    out.trajectory.estimate.push_back(to_std(xh));
    out.trajectory.control.push_back(to_std(-mats.k * xh));
    out.trajectory.running_cost.push_back(running);
  };
  if (record) push_sample(0);

  for (std::size_t step = 0; step < steps; ++step) {
    omega.noalias() = -mats.k * xh;
    const double integrand = state_cost_integrand(cfg.params, std::span<const double>(x.data(), 2 * n)) +
                             r_weight * omega.squaredNorm();
    running += integrand * cfg.dt;
    if (step >= burn_steps) {
      e = x - xh;
      cost_sum += integrand * cfg.dt;
      err_sq_sum += e.squaredNorm() * cfg.dt;
      err_sum += e * cfg.dt;
    }

    dy.noalias() = cfg.dt * (mats.c * x);
    x_next.noalias() = mats.plant_step * x;
    x_next.noalias() -= mats.plant_control * xh;
    if (noisy) {
      for (Eigen::Index i = 0; i < en; ++i) w_rho[i] = normal(rng);
      for (Eigen::Index i = 0; i < en; ++i) z[i] = normal(rng);
      x_next.tail(en) += (cfg.noise_scale * sqrt_dt) * w_rho;
      dy.noalias() += (cfg.noise_scale * sqrt_dt) * (mats.noise_sqrt * z);
    }
    xh_next.noalias() = mats.est_step * xh;
    xh_next.noalias() += mats.l * dy;
    x.swap(x_next);
    xh.swap(xh_next);

    if (!(x.cwiseAbs().maxCoeff() <= kBlowUp && xh.cwiseAbs().maxCoeff() <= kBlowUp)) {
      std::ostringstream os;
      os << "simulation blew up at t=" << static_cast<double>(step + 1) * cfg.dt << " with dt=" << cfg.dt
         << "; reduce dt";
      throw InstabilityError(os.str());
    }
    if (record && (step + 1) % cfg.record_stride == 0) push_sample(step + 1);
  }

  const double window = static_cast<double>(steps - burn_steps) * cfg.dt;
  out.cost = cost_sum / window;
  out.err_trace = err_sq_sum / window;
  out.mean_error = err_sum / window;
  return out;
}

void mean_and_stderr(const std::vector<double>& v, double& mean, double& stderr_out) {
  mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  stderr_out = 0.0;
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  stderr_out = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

double max_stable_dt(const NondimParams& p) { return 0.1 / std::sqrt(4.0 + p.pi3 + p.pi4); }

void validate(const SimConfig& cfg) {
  wavelqg::validate(cfg.params);
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw DomainError("dt must be positive");
  if (cfg.dt > max_stable_dt(cfg.params)) {
    throw DomainError("dt=" + std::to_string(cfg.dt) + " exceeds the step guard 0.1/sqrt(4+pi3+pi4)=" +
                      std::to_string(max_stable_dt(cfg.params)));
  }
  if (!(cfg.t_final >= 100.0 * cfg.dt)) throw DomainError("t_final must be at least 100 dt");
  if (!(cfg.burn_in >= 0.0 && cfg.burn_in < 1.0)) throw DomainError("burn_in must lie in [0, 1)");
  if (cfg.n_realizations < 1) throw DomainError("n_realizations must be at least 1");
  if (!std::isfinite(cfg.noise_scale) || cfg.noise_scale < 0.0) throw DomainError("noise_scale must be >= 0");
  const std::size_t dim = 2 * cfg.params.n;
  if (!cfg.initial_state.empty() && cfg.initial_state.size() != dim) {
    throw DomainError("initial_state must have 2n entries");
  }
  if (!cfg.initial_estimate.empty() && cfg.initial_estimate.size() != dim) {
    throw DomainError("initial_estimate must have 2n entries");
  }
}

std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

std::vector<double> sample_correlated_noise(double pi1, std::size_t n, Rng& rng) {
  if (!(pi1 >= 0.0)) throw DomainError("pi1 must be nonnegative");
  if (n < 2) throw DomainError("noise sampling needs n >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> white(n);
  for (auto& w : white) w = normal(rng);
  // Shaping a real white vector keeps the conjugate pairing of its transform,
  // so the inverse transform is real.
  auto spectrum = spectral::dft_forward(std::span<const double>(white));
  const auto shape = noise_shaping_spectrum(pi1, n);
  for (std::size_t k = 0; k < n; ++k) spectrum[k] *= shape[k];
  const auto shaped = spectral::dft_inverse(spectrum);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = shaped[j].real();
  return out;
}

double state_cost_integrand(const NondimParams& p, std::span<const double> state) {
  const std::size_t n = p.n;
  if (state.size() != 2 * n) throw DomainError("state must have 2n entries");
  const auto phi = state.first(n);
  const auto dphi = state.subspan(n, n);
  double potential = 0.0, l2 = 0.0, kinetic = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // -phi^T D2 phi = sum_i phi_i (2 phi_i - phi_{i-1} - phi_{i+1})
    potential += phi[i] * (2.0 * phi[i] - phi[(i + n - 1) % n] - phi[(i + 1) % n]);
    l2 += phi[i] * phi[i];
    kinetic += dphi[i] * dphi[i];
  }
  return l2 + p.pi1 * potential + p.pi2 * kinetic;
}

SimResult simulate(const SimConfig& cfg) {
  validate(cfg);
  const auto mats = loop_matrices(cfg);
  const auto steps = static_cast<std::size_t>(std::llround(cfg.t_final / cfg.dt));
  const auto burn_steps = static_cast<std::size_t>(std::llround(cfg.burn_in * static_cast<double>(steps)));

  std::vector<RealizationOutput> runs(cfg.n_realizations);
  parallel_for(runs.size(), resolve_threads(cfg.threads),
               [&](std::size_t i) { runs[i] = run_realization(cfg, mats, i, steps, burn_steps); });

  SimResult result;
  result.trajectory = std::move(runs[0].trajectory);
  auto& s = result.summary;
  for (const auto& r : runs) {
    s.realization_costs.push_back(r.cost);
    s.realization_err_traces.push_back(r.err_trace);
  }
  mean_and_stderr(s.realization_costs, s.empirical_lqg_cost, s.empirical_lqg_cost_stderr);
  mean_and_stderr(s.realization_err_traces, s.empirical_est_err_cov_trace, s.empirical_est_err_cov_trace_stderr);
  const std::size_t dim = 2 * cfg.params.n;
  s.mean_estimation_error.resize(dim);
  s.mean_estimation_error_stderr.resize(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<double> comp;
    for (const auto& r : runs) comp.push_back(r.mean_error[static_cast<Eigen::Index>(c)]);
    mean_and_stderr(comp, s.mean_estimation_error[c], s.mean_estimation_error_stderr[c]);
  }
  s.analytic_lqg_cost = analysis::lqg_cost(cfg.params);
  s.analytic_kf_cost = analysis::kf_cost(cfg.params);
  s.seed = cfg.seed;
  s.dt = cfg.dt;
  s.t_final = cfg.t_final;
  s.burn_in = cfg.burn_in;
  s.n_realizations = cfg.n_realizations;
  s.steps = steps;
  return result;
}

}  // namespace wavelqg::simulator
