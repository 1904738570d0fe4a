#pragma once

// Closed-form LQR and Kalman-filter synthesis for the ring wave equation.
//
// In frequency k the plant is the 2x2 block A_k = [[0, 1], [D_k, 0]] with
// D_k = -4 sin^2(pi k / n), input B = [0; 1], and
//   control: Q_k = diag(1 - pi1 D_k, pi2),  R = 1 / pi3^2
//   filter:  C = [pi4, 0], process noise BB^T, measurement-noise inverse
//            covariance 1 - pi1 D_k.
// Every quantity below is computed per frequency from these blocks.

#include <vector>

#include "core/nondim.hpp"
#include "core/spectral.hpp"

namespace wavelqg::synthesis {

enum class GainKind { Lqr, Kf };
enum class RiccatiKind { Control, Filter };

const char* to_string(GainKind kind);

// Per-frequency entries of the symmetric 2x2 Riccati solution
//   [[diag1, p0], [p0, diag2]].
struct RiccatiSpectrum {
  std::vector<double> p0;
  std::vector<double> diag1;
  std::vector<double> diag2;
  RiccatiKind kind = RiccatiKind::Control;
};

// LQR: K_k = [base, companion] with companion = sqrt(2 base + pi2 pi3^2).
// KF:  L_k = [companion; base] with companion = sqrt(2 base / pi4).
struct SpectralGain {
  std::vector<double> base;
  std::vector<double> companion;
  GainKind kind = GainKind::Lqr;
  NondimParams params;
};

// block1/block2 are (K1, K2) for LQR and (L1, L2) for KF.
struct GainSet {
  spectral::Circulant block1;
  spectral::Circulant block2;
  GainKind kind;
  NondimParams params;
  SpectralGain spectral;
};

RiccatiSpectrum lqr_riccati_spectrum(const NondimParams& p);
RiccatiSpectrum kf_riccati_spectrum(const NondimParams& p);

SpectralGain lqr_spectral_gain(const NondimParams& p);
SpectralGain kf_spectral_gain(const NondimParams& p);

GainSet assemble_gains(const SpectralGain& g);

inline GainSet lqr_gains(const NondimParams& p) { return assemble_gains(lqr_spectral_gain(p)); }
inline GainSet kf_gains(const NondimParams& p) { return assemble_gains(kf_spectral_gain(p)); }

// offdiag_mass classification threshold for "completely decentralized".
inline constexpr double kDecentralizedTol = 1e-10;

bool is_decentralized(const GainSet& g, double tol = kDecentralizedTol);

// Dense gain for export only: K = [K1 K2] (n x 2n) or L = [L1; L2] (2n x n).
Eigen::MatrixXd dense_gain(const GainSet& g);

}  // namespace wavelqg::synthesis
