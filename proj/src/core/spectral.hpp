#pragma once

// Circulant-matrix algebra on a ring of n sites.
//
// Conventions: frequencies are indexed k = 0..n-1. A circulant is stored by
// its first row c, with dense entry (i, j) = c[(j - i) mod n]. Its spectrum is
//
//     values[k] = sum_j c[j] exp(-2 pi i k j / n),
//
// so that with the unitary DFT F below, F^{-1} C F = diag(values). For the
// symmetric circulants produced by gain synthesis values[k] = values[n-k] and
// the ordering of F and F^{-1} does not matter.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace wavelqg::spectral {

using Complex = std::complex<double>;

class Circulant {
 public:
  explicit Circulant(std::vector<double> first_row);

  static Circulant identity(std::size_t n, double scale = 1.0);
  // Periodic second-difference stencil [-2, 1, 0, ..., 0, 1].
  static Circulant laplacian(std::size_t n);

  std::size_t size() const noexcept { return first_row_.size(); }
  const std::vector<double>& first_row() const noexcept { return first_row_; }

  double operator()(std::size_t row, std::size_t col) const noexcept {
    const std::size_t n = first_row_.size();
    return first_row_[(col + n - row % n) % n];
  }

  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::vector<double> first_row_;
};

class Spectrum {
 public:
  explicit Spectrum(std::vector<Complex> values) : values_(std::move(values)) {}
  static Spectrum from_real(std::span<const double> values);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<Complex>& values() const noexcept { return values_; }
  const Complex& operator[](std::size_t k) const { return values_[k]; }

  // Largest |values[k] - conj(values[(n-k) mod n])|.
  double conjugate_asymmetry() const;
  bool is_conjugate_symmetric(double tol) const;

  // Real parts, after checking every imaginary part is below tol.
  std::vector<double> real_values(double tol = 1e-10) const;

 private:
  std::vector<Complex> values_;
};

// Unitary DFT: fhat[k] = n^{-1/2} sum_j f[j] exp(-2 pi i k j / n).
std::vector<Complex> dft_forward(std::span<const Complex> f);
std::vector<Complex> dft_inverse(std::span<const Complex> fhat);
std::vector<Complex> dft_forward(std::span<const double> f);

// values[k] = -4 sin^2(pi k / n).
Spectrum laplacian_spectrum(std::size_t n);

// Throws SymmetryError when s is not conjugate symmetric (the result would
// not be real).
Circulant circulant_from_spectrum(const Spectrum& s);
Spectrum spectrum_of_circulant(const Circulant& c);

// sqrt(sum_{j != 0} c_j^2) / max(||c||_2, 1e-300); zero iff diagonal.
double offdiag_mass(const Circulant& c);

Eigen::MatrixXd to_dense(const Circulant& c);

// Unitary DFT matrix F with F(k, j) = n^{-1/2} exp(-2 pi i k j / n).
Eigen::MatrixXcd dft_matrix(std::size_t n);

}  // namespace wavelqg::spectral
