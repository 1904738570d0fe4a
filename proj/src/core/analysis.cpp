#include "core/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "core/error.hpp"
#include "core/oracle.hpp"
#include "core/parallel.hpp"
#include "core/spectral.hpp"

namespace wavelqg::analysis {
namespace {

using Eigen::MatrixXd;
using synthesis::GainSet;

struct FrequencyData {
  std::vector<double> d;
  synthesis::RiccatiSpectrum control;
  synthesis::RiccatiSpectrum filter;
  synthesis::SpectralGain k;
  synthesis::SpectralGain l;
};

FrequencyData frequency_data(const NondimParams& p) {
  return FrequencyData{spectral::laplacian_spectrum(p.n).real_values(), synthesis::lqr_riccati_spectrum(p),
                       synthesis::kf_riccati_spectrum(p), synthesis::lqr_spectral_gain(p),
                       synthesis::kf_spectral_gain(p)};
}

double half_log_cell(const std::vector<double>& values) {
  std::vector<double> logs;
  for (double v : values)
    if (v > 0.0) logs.push_back(std::log(v));
  std::sort(logs.begin(), logs.end());
  double cell = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < logs.size(); ++i) {
    const double gap = logs[i] - logs[i - 1];
    if (gap > 0.0) cell = std::min(cell, gap);
  }
  // Single-point or degenerate grids fall back to an exactness test.
  return std::isfinite(cell) ? 0.5 * cell : 1e-9;
}

bool near_curve(double pi1, double pi, double half_cell) {
  return pi1 > 0.0 && std::abs(std::log(pi1) - std::log(2.0 / pi)) < half_cell;
}

void validate_grid_values(const std::vector<double>& pi1_values, const std::vector<double>& pi34_values,
                          double pi2, std::size_t n) {
  if (pi1_values.empty() || pi34_values.empty()) throw DomainError("sweep grids must be nonempty");
  NondimParams probe;
  probe.pi2 = pi2;
  probe.n = n;
  for (double v : pi1_values) {
    probe.pi1 = v;
    validate(probe);
  }
  probe.pi1 = 0.0;
  for (double v : pi34_values) {
    probe.pi3 = v;
    probe.pi4 = v;
    validate(probe);
  }
}

}  // namespace

MatrixXd ClosedLoopLqg::k() const { return synthesis::dense_gain(gain_k); }
MatrixXd ClosedLoopLqg::l() const { return synthesis::dense_gain(gain_l); }
MatrixXd ClosedLoopLqg::regulator() const { return a - b * k(); }
MatrixXd ClosedLoopLqg::estimator() const { return a - l() * c_meas; }

MatrixXd ClosedLoopLqg::augmented() const {
  const Eigen::Index m = a.rows();
  const MatrixXd bk = b * k();
  const MatrixXd lc = l() * c_meas;
  MatrixXd aug(2 * m, 2 * m);
  aug << a, -bk, lc, a - lc - bk;
  return aug;
}

ClosedLoopLqg build_closed_loop(const NondimParams& p) {
  validate(p);
  const auto en = static_cast<Eigen::Index>(p.n);
  ClosedLoopLqg loop{oracle::wave_plant(p.n), MatrixXd::Zero(2 * en, en), MatrixXd::Zero(en, 2 * en),
                     synthesis::lqr_gains(p), synthesis::kf_gains(p), p};
  loop.b.bottomRows(en).setIdentity();
  loop.c_meas.leftCols(en) = p.pi4 * MatrixXd::Identity(en, en);
  const double reg = oracle::spectral_abscissa(loop.regulator());
  const double est = oracle::spectral_abscissa(loop.estimator());
  const double aug = oracle::spectral_abscissa(loop.augmented());
  if (!(reg < 0.0 && est < 0.0 && aug < 0.0)) {
    std::ostringstream os;
    os << "closed loop is not stable (regulator " << reg << ", estimator " << est << ", augmented " << aug
       << ")";
    throw InternalError(os.str());
  }
  return loop;
}

double separation_mismatch(const ClosedLoopLqg& loop) {
  // Assembled and solved in extended precision: at parameter points where a
  // closed-loop block has a repeated (defective) eigenvalue, double precision
  // only resolves the spectra to about sqrt(machine epsilon).
  using MatrixXl = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const MatrixXl a = loop.a.cast<long double>();
  const MatrixXl bk = loop.b.cast<long double>() * loop.k().cast<long double>();
  const MatrixXl lc = loop.l().cast<long double>() * loop.c_meas.cast<long double>();
  const Eigen::Index m = a.rows();
  MatrixXl aug(2 * m, 2 * m);
  aug << a, -bk, lc, a - lc - bk;
  auto spectrum = [](const MatrixXl& mat) {
    Eigen::EigenSolver<MatrixXl> es(mat, false);
    if (es.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
    return es.eigenvalues();
  };
  const auto aug_eigs = spectrum(aug);
  const auto reg = spectrum(a - bk);
  const auto est = spectrum(a - lc);
  std::vector<std::complex<long double>> pool;
  pool.reserve(static_cast<std::size_t>(reg.size() + est.size()));
  for (Eigen::Index i = 0; i < reg.size(); ++i) pool.push_back(reg[i]);
  for (Eigen::Index i = 0; i < est.size(); ++i) pool.push_back(est[i]);
  std::vector<bool> used(pool.size(), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < aug_eigs.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (used[j]) continue;
      const double dist = static_cast<double>(std::abs(aug_eigs[i] - pool[j]));
      if (dist < best) {
        best = dist;
        best_j = j;
      }
    }
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

double lqr_cost(const NondimParams& p) {
  const auto ric = synthesis::lqr_riccati_spectrum(p);
  double total = 0.0;
  for (std::size_t k = 0; k < p.n; ++k) total += ric.diag1[k] + ric.diag2[k];
  return total;
}

double kf_cost(const NondimParams& p) {
  const auto ric = synthesis::kf_riccati_spectrum(p);
  double total = 0.0;
  for (std::size_t k = 0; k < p.n; ++k) total += ric.diag1[k] + ric.diag2[k];
  return total;
}

double lqg_cost(const NondimParams& p) {
  const auto f = frequency_data(p);
  const double r = 1.0 / (p.pi3 * p.pi3);
  double total = 0.0;
  for (std::size_t k = 0; k < p.n; ++k) {
    const double k1 = f.k.base[k], k2 = f.k.companion[k];
    const double s1 = f.filter.diag1[k], s0 = f.filter.p0[k], s2 = f.filter.diag2[k];
    total += f.control.diag2[k] + r * (k1 * k1 * s1 + 2.0 * k1 * k2 * s0 + k2 * k2 * s2);
  }
  return total;
}

double lqg_cost_dual(const NondimParams& p) {
  const auto f = frequency_data(p);
  double total = 0.0;
  for (std::size_t k = 0; k < p.n; ++k) {
    const double weight = 1.0 - p.pi1 * f.d[k];
    const double l1 = f.l.companion[k], l2 = f.l.base[k];
    const double p1 = f.control.diag1[k], p0 = f.control.p0[k], p2 = f.control.diag2[k];
    total += f.filter.diag1[k] * weight + f.filter.diag2[k] * p.pi2 +
             (p1 * l1 * l1 + 2.0 * p0 * l1 * l2 + p2 * l2 * l2) / weight;
  }
  return total;
}

CostLocalityReport report(const NondimParams& p) {
  validate(p);
  const auto k = synthesis::lqr_gains(p);
  const auto l = synthesis::kf_gains(p);
  CostLocalityReport out;
  out.j_lqr = lqr_cost(p);
  out.j_kf = kf_cost(p);
  out.j_lqg = lqg_cost(p);
  out.offdiag_k1 = spectral::offdiag_mass(k.block1);
  out.offdiag_k2 = spectral::offdiag_mass(k.block2);
  out.offdiag_l1 = spectral::offdiag_mass(l.block1);
  out.offdiag_l2 = spectral::offdiag_mass(l.block2);
  const auto [res_k, res_l] = locality_residuals(p);
  out.residual_lqr_decentral = res_k;
  out.residual_kf_decentral = res_l;
  for (double v : {out.j_lqr, out.j_kf, out.j_lqg}) {
    if (!std::isfinite(v) || v < 0.0) throw InternalError("report: cost is not finite and nonnegative");
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > 0.0) || count == 0) throw DomainError("log_grid needs positive bounds and count");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

SweepGrid default_sweep_grid() {
  SweepGrid g;
  g.pi1_values = log_grid(0.1, 10.0, 50);
  g.pi34_values = log_grid(0.1, 10.0, 50);
  g.pi2 = 1.0;
  g.n = 30;
  g.tie_pi3_pi4 = true;
  return g;
}

std::vector<SweepRow> sweep(const SweepGrid& grid) {
  validate_grid_values(grid.pi1_values, grid.pi34_values, grid.pi2, grid.n);
  if (!grid.tie_pi3_pi4 && !(grid.pi3_fixed > 0.0)) throw DomainError("pi3_fixed must be positive");
  const double half_cell = half_log_cell(grid.pi1_values);
  const std::size_t cols = grid.pi34_values.size();
  std::vector<SweepRow> rows(grid.pi1_values.size() * cols);
  parallel_for(rows.size(), resolve_threads(grid.threads), [&](std::size_t idx) {
    SweepRow row;
    row.pi1_index = idx / cols;
    row.pi34_index = idx % cols;
    row.params.pi1 = grid.pi1_values[row.pi1_index];
    row.params.pi2 = grid.pi2;
    row.params.pi4 = grid.pi34_values[row.pi34_index];
    row.params.pi3 = grid.tie_pi3_pi4 ? row.params.pi4 : grid.pi3_fixed;
    row.params.n = grid.n;
    row.report = report(row.params);
    row.on_curve_lqr = near_curve(row.params.pi1, row.params.pi3, half_cell);
    row.on_curve_kf = near_curve(row.params.pi1, row.params.pi4, half_cell);
    rows[idx] = row;
  });
  return rows;
}

std::vector<SweepRow> decentralization_curve(const std::vector<double>& pi1_values, double pi2, std::size_t n,
                                             unsigned threads) {
  if (pi1_values.empty()) throw DomainError("curve needs at least one pi1 value");
  for (double v : pi1_values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("curve pi1 values must be positive");
  }
  std::vector<SweepRow> rows(pi1_values.size());
  parallel_for(rows.size(), resolve_threads(threads), [&](std::size_t i) {
    SweepRow row;
    row.pi1_index = i;
    row.params = NondimParams{pi1_values[i], pi2, 2.0 / pi1_values[i], 2.0 / pi1_values[i], n};
    row.report = report(row.params);
    row.on_curve_lqr = true;
    row.on_curve_kf = true;
    rows[i] = row;
  });
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& row : rows) {
    const auto& p = row.params;
    const auto& r = row.report;
    const int flags = (row.on_curve_lqr ? 1 : 0) | (row.on_curve_kf ? 2 : 0);
    for (double v : {p.pi1, p.pi2, p.pi3, p.pi4}) out += format_double(v) + ',';
    out += std::to_string(p.n) + ',';
    for (double v : {r.j_lqr, r.j_kf, r.j_lqg, r.offdiag_k1, r.offdiag_k2, r.offdiag_l1, r.offdiag_l2,
                     r.residual_lqr_decentral, r.residual_kf_decentral}) {
      out += format_double(v) + ',';
    }
    out += std::to_string(flags) + '\n';
  }
  return out;
}

std::string curve_csv(const std::vector<SweepRow>& rows) {
  std::string out = kCurveCsvHeader;
  out += '\n';
  for (const auto& row : rows) {
    out += format_double(row.params.pi1) + ',' + format_double(row.report.j_kf) + ',' +
           format_double(row.report.j_lqr) + ',' + format_double(row.report.j_lqg) + '\n';
  }
  return out;
}

}  // namespace wavelqg::analysis
