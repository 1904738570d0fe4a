#include "core/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "core/error.hpp"

namespace wavelqg::spectral {
namespace {

// twiddle[m] = exp(-2 pi i m / n); products k*j are reduced mod n before lookup
// so every exponent is evaluated at an exact grid angle.
std::vector<Complex> twiddles(std::size_t n) {
  std::vector<Complex> w(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    w[m] = Complex(std::cos(angle), std::sin(angle));
  }
  return w;
}

std::vector<Complex> transform(std::span<const Complex> f, bool inverse) {
  const std::size_t n = f.size();
  std::vector<Complex> out(n);
  if (n == 0) return out;
  const auto w = twiddles(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      const Complex& t = w[(k * j) % n];
      acc += f[j] * (inverse ? std::conj(t) : t);
    }
    out[k] = acc * scale;
  }
  return out;
}

}  // namespace

Circulant::Circulant(std::vector<double> first_row) : first_row_(std::move(first_row)) {
  if (first_row_.size() < 2) {
    throw DomainError("circulant size must be at least 2, got " + std::to_string(first_row_.size()));
  }
}

Circulant Circulant::identity(std::size_t n, double scale) {
  std::vector<double> row(n, 0.0);
  if (!row.empty()) row[0] = scale;
  return Circulant(std::move(row));
}

Circulant Circulant::laplacian(std::size_t n) {
  if (n < 2) throw DomainError("laplacian needs n >= 2, got " + std::to_string(n));
  std::vector<double> row(n, 0.0);
  // n == 2: both neighbours are the same site.
  row[0] = -2.0;
  row[1] += 1.0;
  row[n - 1] += 1.0;
  return Circulant(std::move(row));
}

std::vector<double> Circulant::apply(std::span<const double> x) const {
  const std::size_t n = size();
  if (x.size() != n) throw DomainError("circulant apply: size mismatch");
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) acc += first_row_[m] * x[(i + m) % n];
    y[i] = acc;
  }
  return y;
}

Spectrum Spectrum::from_real(std::span<const double> values) {
  std::vector<Complex> v(values.begin(), values.end());
  return Spectrum(std::move(v));
}

double Spectrum::conjugate_asymmetry() const {
  const std::size_t n = values_.size();
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    worst = std::max(worst, std::abs(values_[k] - std::conj(values_[(n - k) % n])));
  }
  return worst;
}

bool Spectrum::is_conjugate_symmetric(double tol) const {
  double scale = 1.0;
  for (const auto& v : values_) scale = std::max(scale, std::abs(v));
  return conjugate_asymmetry() <= tol * scale;
}

std::vector<double> Spectrum::real_values(double tol) const {
  std::vector<double> out(values_.size());
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double scale = std::max(1.0, std::abs(values_[k].real()));
    if (std::abs(values_[k].imag()) > tol * scale) {
      throw NumericError("spectrum entry " + std::to_string(k) + " has imaginary part " +
                         std::to_string(values_[k].imag()));
    }
    out[k] = values_[k].real();
  }
  return out;
}

std::vector<Complex> dft_forward(std::span<const Complex> f) { return transform(f, false); }

std::vector<Complex> dft_inverse(std::span<const Complex> fhat) { return transform(fhat, true); }

std::vector<Complex> dft_forward(std::span<const double> f) {
  std::vector<Complex> c(f.begin(), f.end());
  return transform(c, false);
}

Spectrum laplacian_spectrum(std::size_t n) {
  if (n < 2) throw DomainError("laplacian_spectrum needs n >= 2, got " + std::to_string(n));
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    v[k] = Complex(-4.0 * s * s, 0.0);
  }
  return Spectrum(std::move(v));
}

Circulant circulant_from_spectrum(const Spectrum& s) {
  constexpr double kSymmetryTol = 1e-10;
  if (!s.is_conjugate_symmetric(kSymmetryTol)) {
    throw SymmetryError("spectrum is not conjugate symmetric (asymmetry " +
                        std::to_string(s.conjugate_asymmetry()) + "); circulant would not be real");
  }
  const std::size_t n = s.size();
  // c[j] = (1/n) sum_k values[k] exp(+2 pi i k j / n) = n^{-1/2} dft_inverse(values)[j]
  const auto inv = dft_inverse(s.values());
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> row(n);
  for (std::size_t j = 0; j < n; ++j) row[j] = inv[j].real() * scale;
  return Circulant(std::move(row));
}

Spectrum spectrum_of_circulant(const Circulant& c) {
  auto v = dft_forward(std::span<const double>(c.first_row()));
  const double scale = std::sqrt(static_cast<double>(c.size()));
  for (auto& x : v) x *= scale;
  return Spectrum(std::move(v));
}

double offdiag_mass(const Circulant& c) {
  const auto& row = c.first_row();
  double off = 0.0;
  for (std::size_t j = 1; j < row.size(); ++j) off += row[j] * row[j];
  const double total = std::sqrt(off + row[0] * row[0]);
  return std::sqrt(off) / std::max(total, 1e-300);
}

Eigen::MatrixXd to_dense(const Circulant& c) {
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = c(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return m;
}

Eigen::MatrixXcd dft_matrix(std::size_t n) {
  const auto w = twiddles(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const auto en = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd f(en, en);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      f(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = w[(k * j) % n] * scale;
  return f;
}

}  // namespace wavelqg::spectral
