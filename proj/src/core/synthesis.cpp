#include "core/synthesis.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"

namespace wavelqg::synthesis {
namespace {

std::vector<double> laplacian_eigenvalues(std::size_t n) {
  return spectral::laplacian_spectrum(n).real_values();
}

// d + sqrt(d^2 + x) for d <= 0, x > 0, written without cancellation.
double shifted_root(double d, double x) { return x / (std::sqrt(d * d + x) - d); }

void check_symmetric(const std::vector<double>& v, const char* what) {
  const std::size_t n = v.size();
  for (std::size_t k = 1; k < n; ++k) {
    const double a = v[k];
    const double b = v[n - k];
    if (std::abs(a - b) > 1e-10 * std::max({1.0, std::abs(a), std::abs(b)})) {
      throw SymmetryError(std::string(what) + " spectrum is not symmetric under k -> n-k at k=" +
                          std::to_string(k));
    }
  }
}

}  // namespace

const char* to_string(GainKind kind) { return kind == GainKind::Lqr ? "lqr" : "kf"; }

RiccatiSpectrum lqr_riccati_spectrum(const NondimParams& p) {
  validate(p);
  const auto d = laplacian_eigenvalues(p.n);
  const double pi3sq = p.pi3 * p.pi3;
  RiccatiSpectrum out;
  out.kind = RiccatiKind::Control;
  out.p0.resize(p.n);
  out.diag1.resize(p.n);
  out.diag2.resize(p.n);
  for (std::size_t k = 0; k < p.n; ++k) {
    const double weight = 1.0 - p.pi1 * d[k];
    const double k0 = shifted_root(d[k], pi3sq * weight);
    const double p0 = k0 / pi3sq;
    const double p2 = std::sqrt(2.0 * p0 + p.pi2) / p.pi3;
    out.p0[k] = p0;
    out.diag2[k] = p2;
    // (1,2) entry of the block ARE: p1 + p2 D - pi3^2 p0 p2 = 0.
    out.diag1[k] = p2 * (k0 - d[k]);
  }
  return out;
}

RiccatiSpectrum kf_riccati_spectrum(const NondimParams& p) {
  validate(p);
  const auto d = laplacian_eigenvalues(p.n);
  const double pi4sq = p.pi4 * p.pi4;
  RiccatiSpectrum out;
  out.kind = RiccatiKind::Filter;
  out.p0.resize(p.n);
  out.diag1.resize(p.n);
  out.diag2.resize(p.n);
  for (std::size_t k = 0; k < p.n; ++k) {
    const double weight = 1.0 - p.pi1 * d[k];
    const double g = pi4sq * weight;
    // Positive root of g s0^2 - 2 D s0 - 1 = 0; the other root is negative.
    const double s0 = shifted_root(d[k], g) / g;
    const double s1 = std::sqrt(2.0 * s0 / g);
    out.p0[k] = s0;
    out.diag1[k] = s1;
    // (1,2) entry of the block filter ARE: s2 + D s1 - g s1 s0 = 0.
    out.diag2[k] = s1 * (g * s0 - d[k]);
  }
  return out;
}

SpectralGain lqr_spectral_gain(const NondimParams& p) {
  validate(p);
  const auto d = laplacian_eigenvalues(p.n);
  const double pi3sq = p.pi3 * p.pi3;
  SpectralGain g;
  g.kind = GainKind::Lqr;
  g.params = p;
  g.base.resize(p.n);
  g.companion.resize(p.n);
  for (std::size_t k = 0; k < p.n; ++k) {
    const double k0 = shifted_root(d[k], pi3sq * (1.0 - p.pi1 * d[k]));
    g.base[k] = k0;
    g.companion[k] = std::sqrt(2.0 * k0 + p.pi2 * pi3sq);
  }
  return g;
}

SpectralGain kf_spectral_gain(const NondimParams& p) {
  validate(p);
  const auto d = laplacian_eigenvalues(p.n);
  SpectralGain g;
  g.kind = GainKind::Kf;
  g.params = p;
  g.base.resize(p.n);
  g.companion.resize(p.n);
  for (std::size_t k = 0; k < p.n; ++k) {
    const double l0 = shifted_root(d[k] / p.pi4, 1.0 - p.pi1 * d[k]);
    g.base[k] = l0;
    g.companion[k] = std::sqrt(2.0 * l0 / p.pi4);
  }
  return g;
}

GainSet assemble_gains(const SpectralGain& g) {
  if (g.base.size() != g.companion.size() || g.base.size() < 2) {
    throw DomainError("spectral gain vectors must have equal length >= 2");
  }
  check_symmetric(g.base, "base gain");
  check_symmetric(g.companion, "companion gain");
  auto base = spectral::circulant_from_spectrum(spectral::Spectrum::from_real(g.base));
  auto companion = spectral::circulant_from_spectrum(spectral::Spectrum::from_real(g.companion));
  if (g.kind == GainKind::Lqr) {
    return GainSet{std::move(base), std::move(companion), g.kind, g.params, g};
  }
  return GainSet{std::move(companion), std::move(base), g.kind, g.params, g};
}

bool is_decentralized(const GainSet& g, double tol) {
  return spectral::offdiag_mass(g.block1) <= tol && spectral::offdiag_mass(g.block2) <= tol;
}

Eigen::MatrixXd dense_gain(const GainSet& g) {
  const auto n = static_cast<Eigen::Index>(g.block1.size());
  const Eigen::MatrixXd b1 = spectral::to_dense(g.block1);
  const Eigen::MatrixXd b2 = spectral::to_dense(g.block2);
  if (g.kind == GainKind::Lqr) {
    Eigen::MatrixXd k(n, 2 * n);
    k << b1, b2;
    return k;
  }
  Eigen::MatrixXd l(2 * n, n);
  l << b1, b2;
  return l;
}

}  // namespace wavelqg::synthesis
