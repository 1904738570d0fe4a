#pragma once

#include <cstddef>
#include <utility>

namespace wavelqg {

// Physical parameters of the discretized wave problem. Units are given with
// time t, length l and state s.
struct DimensionalParams {
  double c = 1.0;        // wave speed, l/t
  double dx = 1.0;       // grid spacing, l
  std::size_t n = 30;    // grid size
  double q1 = 1.0;       // state weight on p, s
  double q2 = 1.0;       // state weight on dp/dt, s/t
  double r = 1.0;        // control weight, s/t^2
  double sigma_m = 1.0;  // measurement-noise scale, s
  double sigma_d = 1.0;  // disturbance scale, s/t^2
  double alpha = 0.0;    // Sobolev length scale, l

  bool operator==(const DimensionalParams&) const = default;
};

// Dimensionless groups:
//   pi1 = alpha^2 / dx^2                 (potential-energy weight)
//   pi2 = c^2 q1^2 / (q2^2 dx^2)         (kinetic-energy weight)
//   pi3 = dx^2 r / (c^2 q1)              (inverse control-effort weight)
//   pi4 = dx^2 sigma_d / (c^2 sigma_m)   (model-to-sensor quality ratio)
struct NondimParams {
  double pi1 = 0.0;
  double pi2 = 1.0;
  double pi3 = 1.0;
  double pi4 = 1.0;
  std::size_t n = 30;

  bool operator==(const NondimParams&) const = default;
};

// Throw DomainError naming the offending field.
void validate(const DimensionalParams& p);
void validate(const NondimParams& p);

NondimParams nondimensionalize(const DimensionalParams& p);

// (pi1 - 2/pi3, pi1 - 2/pi4): LQR and KF gains are completely decentralized
// exactly when the first (resp. second) entry vanishes.
std::pair<double, double> locality_residuals(const NondimParams& p);

// State scalings phi = lqr_state_scale * p and psi = kf_state_scale * p.
// They coincide only when r == sigma_d.
double lqr_state_scale(const DimensionalParams& p);
double kf_state_scale(const DimensionalParams& p);

// Closed-loop LQG assembly identifies the two scalings; throws DomainError
// unless r and sigma_d agree to `rel_tol`.
void require_matched_scaling(const DimensionalParams& p, double rel_tol = 1e-12);

// Alpha that places the dimensional problem on the decentralization curve,
// alpha^2 sigma_d / (c^2 sigma_m) = 2.
double decentralizing_alpha(const DimensionalParams& p);

}  // namespace wavelqg
