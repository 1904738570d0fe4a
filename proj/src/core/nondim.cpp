#include "core/nondim.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"

namespace wavelqg {
namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string("parameter '") + field + "' must be positive and finite, got " +
                      std::to_string(value));
  }
}

void require_grid(std::size_t n) {
  if (n < 2) throw DomainError("parameter 'n' must be at least 2, got " + std::to_string(n));
}

}  // namespace

void validate(const DimensionalParams& p) {
  require_positive(p.c, "c");
  require_positive(p.dx, "dx");
  require_positive(p.q1, "q1");
  require_positive(p.q2, "q2");
  require_positive(p.r, "r");
  require_positive(p.sigma_m, "sigma_m");
  require_positive(p.sigma_d, "sigma_d");
  if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) {
    throw DomainError("parameter 'alpha' must be nonnegative and finite, got " + std::to_string(p.alpha));
  }
  require_grid(p.n);
}

void validate(const NondimParams& p) {
  if (!(p.pi1 >= 0.0) || !std::isfinite(p.pi1)) {
    throw DomainError("parameter 'pi1' must be nonnegative and finite, got " + std::to_string(p.pi1));
  }
  require_positive(p.pi2, "pi2");
  require_positive(p.pi3, "pi3");
  require_positive(p.pi4, "pi4");
  require_grid(p.n);
}

NondimParams nondimensionalize(const DimensionalParams& p) {
  validate(p);
  const double dx2 = p.dx * p.dx;
  const double c2 = p.c * p.c;
  NondimParams out;
  out.pi1 = p.alpha * p.alpha / dx2;
  out.pi2 = c2 * p.q1 * p.q1 / (p.q2 * p.q2 * dx2);
  out.pi3 = dx2 * p.r / (c2 * p.q1);
  out.pi4 = dx2 * p.sigma_d / (c2 * p.sigma_m);
  out.n = p.n;
  return out;
}

std::pair<double, double> locality_residuals(const NondimParams& p) {
  validate(p);
  return {p.pi1 - 2.0 / p.pi3, p.pi1 - 2.0 / p.pi4};
}

double lqr_state_scale(const DimensionalParams& p) {
  validate(p);
  return p.c * p.c / (p.r * p.dx * p.dx);
}

double kf_state_scale(const DimensionalParams& p) {
  validate(p);
  return p.c * p.c / (p.dx * p.dx * p.sigma_d);
}

void require_matched_scaling(const DimensionalParams& p, double rel_tol) {
  validate(p);
  if (std::abs(p.r - p.sigma_d) > rel_tol * std::max(p.r, p.sigma_d)) {
    throw DomainError("closed-loop LQG needs r == sigma_d so the controller and filter share a state scaling (r=" +
                      std::to_string(p.r) + ", sigma_d=" + std::to_string(p.sigma_d) + ")");
  }
}

double decentralizing_alpha(const DimensionalParams& p) {
  validate(p);
  return std::sqrt(2.0 * p.c * p.c * p.sigma_m / p.sigma_d);
}

}  // namespace wavelqg
