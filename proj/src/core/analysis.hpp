#pragma once

// Closed-loop LQG assembly, trace costs and locality metrics.
//
// Cost definitions (all spectral sums over k):
//   j_lqr = tr(P)                          unit-covariance initial state
//   j_kf  = tr(S)                          steady-state estimation error
//   j_lqg = tr(P B B^T) + tr(S K^T R K)    unit-intensity disturbance
// with the dual identity j_lqg = tr(S Qbar) + tr(P L V L^T),
// V = (I - pi1 D2)^{-1}, Qbar = diag(I - pi1 D2, pi2 I).

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/nondim.hpp"
#include "core/synthesis.hpp"

namespace wavelqg::analysis {

struct ClosedLoopLqg {
  Eigen::MatrixXd a;       // [[0, I], [D2, 0]]
  Eigen::MatrixXd b;       // [0; I]
  Eigen::MatrixXd c_meas;  // [pi4 I, 0]
  synthesis::GainSet gain_k;
  synthesis::GainSet gain_l;
  NondimParams params;

  Eigen::MatrixXd k() const;
  Eigen::MatrixXd l() const;
  Eigen::MatrixXd regulator() const;  // A - B K
  Eigen::MatrixXd estimator() const;  // A - L C
  // Plant state and estimate stacked: [[A, -B K], [L C, A - L C - B K]].
  Eigen::MatrixXd augmented() const;
};

// Throws InternalError if any of the three closed loops is not Hurwitz.
ClosedLoopLqg build_closed_loop(const NondimParams& p);

// Largest distance in a nearest-neighbour matching between the augmented
// spectrum and the union of regulator and estimator spectra.
double separation_mismatch(const ClosedLoopLqg& loop);

double lqr_cost(const NondimParams& p);
double kf_cost(const NondimParams& p);
double lqg_cost(const NondimParams& p);
double lqg_cost_dual(const NondimParams& p);

struct CostLocalityReport {
  double j_lqr = 0.0;
  double j_kf = 0.0;
  double j_lqg = 0.0;
  double offdiag_k1 = 0.0;
  double offdiag_k2 = 0.0;
  double offdiag_l1 = 0.0;
  double offdiag_l2 = 0.0;
  double residual_lqr_decentral = 0.0;
  double residual_kf_decentral = 0.0;

  bool operator==(const CostLocalityReport&) const = default;
};

CostLocalityReport report(const NondimParams& p);

struct SweepGrid {
  std::vector<double> pi1_values;
  std::vector<double> pi34_values;
  double pi2 = 1.0;
  std::size_t n = 30;
  // When false the sweep axis drives pi4 only and pi3 stays at pi3_fixed.
  bool tie_pi3_pi4 = true;
  double pi3_fixed = 1.0;
  unsigned threads = 0;
};

struct SweepRow {
  NondimParams params;
  CostLocalityReport report;
  std::size_t pi1_index = 0;
  std::size_t pi34_index = 0;
  bool on_curve_lqr = false;  // pi1 within half a log-grid cell of 2/pi3
  bool on_curve_kf = false;   // pi1 within half a log-grid cell of 2/pi4
};

std::vector<double> log_grid(double lo, double hi, std::size_t count);

// 50 x 50 log grid over pi1, pi3 = pi4 in [0.1, 10], pi2 = 1, n = 30.
SweepGrid default_sweep_grid();

// Rows in pi1-major order. Every grid value is validated before any
// evaluation starts.
std::vector<SweepRow> sweep(const SweepGrid& grid);

// Points on pi1 = 2/pi3 = 2/pi4.
std::vector<SweepRow> decentralization_curve(const std::vector<double>& pi1_values, double pi2,
                                             std::size_t n, unsigned threads = 0);

inline constexpr const char* kSweepCsvHeader =
    "pi1,pi2,pi3,pi4,n,j_lqr,j_kf,j_lqg,offdiag_k1,offdiag_k2,offdiag_l1,offdiag_l2,res_k,res_l,on_curve";
inline constexpr const char* kCurveCsvHeader = "pi1,j_kf,j_lqr,j_lqg";

// on_curve column: bit 0 = LQR curve, bit 1 = KF curve.
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string curve_csv(const std::vector<SweepRow>& rows);

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

}  // namespace wavelqg::analysis
