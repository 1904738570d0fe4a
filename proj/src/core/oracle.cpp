#include "core/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "core/error.hpp"

namespace wavelqg::oracle {
namespace {

using Eigen::MatrixXd;

double max_abs(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

MatrixXd symmetrize(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

Eigen::VectorXcd eigenvalues(const MatrixXd& m) {
  Eigen::EigenSolver<MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
  return es.eigenvalues();
}

// PBH rank test of [A - lambda I, B] at eigenvalues in the closed right half-plane.
bool pbh_full_rank(const MatrixXd& a, const MatrixXd& b, double rel_tol) {
  const Eigen::Index m = a.rows();
  double scale = std::max(1.0, std::max(a.norm(), b.norm()));
  const auto lambdas = eigenvalues(a);
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    const auto lambda = lambdas[i];
    if (lambda.real() < -1e-12 * scale) continue;
    Eigen::MatrixXcd pencil(m, m + b.cols());
    pencil << a.cast<std::complex<double>>() - lambda * Eigen::MatrixXcd::Identity(m, m),
        b.cast<std::complex<double>>();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(pencil.adjoint());
    if (qr.maxPivot() <= 0.0) return false;
    qr.setThreshold(rel_tol * scale / qr.maxPivot());
    if (qr.rank() < m) return false;
  }
  return true;
}

// Orthonormal basis of the controllable subspace of (A, B).
MatrixXd controllable_basis(const MatrixXd& a, const MatrixXd& b) {
  const double tol = 1e-10 * std::max(1.0, std::max(a.norm(), b.norm()));
  auto orth = [tol](const MatrixXd& m) {
    Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeThinU);
    Eigen::Index r = 0;
    while (r < svd.singularValues().size() && svd.singularValues()(r) > tol) ++r;
    return MatrixXd(svd.matrixU().leftCols(r));
  };
  MatrixXd v = orth(b);
  while (v.cols() < a.rows()) {
    MatrixXd grown(a.rows(), 2 * v.cols());
    grown << v, a * v;
    MatrixXd next = orth(grown);
    if (next.cols() == v.cols()) break;
    v = std::move(next);
  }
  return v;
}

// Bass shift: for beta with Re(lambda(A)) > -beta, solve
// -(A + beta I) Z - Z (A + beta I)^T + 2 B B^T = 0; then A - B B^T Z^{-1}
// has every eigenvalue at real part -beta. When (A, B) is stabilizable but
// not controllable the shift is applied on the controllable subspace only.
MatrixXd bass_gain(const MatrixXd& a, const MatrixXd& b) {
  const Eigen::Index m = a.rows();
  if (spectral_abscissa(a) < 0.0) return MatrixXd::Zero(b.cols(), m);
  const auto lambdas = eigenvalues(a);
  double min_re = 0.0;
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) min_re = std::min(min_re, lambdas[i].real());
  const double beta = 1.0 - min_re;
  const MatrixXd shifted = -(a + beta * MatrixXd::Identity(m, m));
  const MatrixXd z = symmetrize(solve_lyapunov(shifted, 2.0 * b * b.transpose()));
  Eigen::LLT<MatrixXd> llt(z);
  if (llt.info() == Eigen::Success) return b.transpose() * llt.solve(MatrixXd::Identity(m, m));
  const MatrixXd v = controllable_basis(a, b);
  if (v.cols() == 0 || v.cols() == m) {
    throw NotStabilizableError("Bass initialisation failed: controllability Gramian is not positive definite");
  }
  return bass_gain(v.transpose() * a * v, v.transpose() * b) * v.transpose();
}

std::string history_string(const std::vector<double>& h) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < h.size(); ++i) os << (i ? ", " : "") << h[i];
  os << "]";
  return os.str();
}

template <typename Step, typename Residual>
AreSolution newton_loop(MatrixXd gain, const NewtonOptions& opts, Step step, Residual residual,
                        const char* label) {
  AreSolution sol;
  MatrixXd x_prev;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    auto [x, next_gain] = step(gain);
    const double res = residual(x);
    sol.residual_history.push_back(res);
    sol.iterations = it;
    double rel_step = std::numeric_limits<double>::infinity();
    if (x_prev.size() > 0) rel_step = max_abs(x - x_prev) / (1.0 + max_abs(x_prev));
    sol.x = x;
    sol.gain = next_gain;
    gain = next_gain;
    x_prev = x;
    const double scale = 1.0 + max_abs(x);
    if (rel_step <= opts.tolerance) break;
    // Quadratic convergence bottoms out at roundoff; stop once it stalls.
    if (sol.residual_history.size() >= 2 && res <= 1e-11 * scale &&
        res >= sol.residual_history[sol.residual_history.size() - 2]) {
      break;
    }
    if (!std::isfinite(res)) break;
  }
  const double final_res = sol.residual_history.empty() ? INFINITY : sol.residual_history.back();
  if (!(final_res <= 1e-8 * (1.0 + max_abs(sol.x)))) {
    throw ConvergenceError(std::string(label) + " Newton iteration did not converge after " +
                               std::to_string(sol.iterations) + " iterations; residuals " +
                               history_string(sol.residual_history),
                           sol.residual_history);
  }
  return sol;
}

// Both roots of g x^2 - 2 beta x - gamma = 0 without cancellation.
// Returns false when the discriminant is negative.
bool quadratic_roots(double g, double beta, double gamma, std::array<double, 2>& roots) {
  const double disc = beta * beta + g * gamma;
  if (disc < 0.0) return false;
  const double s = std::sqrt(disc);
  const double big = beta >= 0.0 ? beta + s : beta - s;
  if (big == 0.0) {
    roots = {0.0, 0.0};
    return true;
  }
  roots = {big / g, -gamma / big};
  return true;
}

}  // namespace

MatrixXd solve_lyapunov(const MatrixXd& a, const MatrixXd& q) {
  const Eigen::Index m = a.rows();
  if (a.cols() != m || q.rows() != m || q.cols() != m) throw DomainError("lyapunov: dimension mismatch");
  Eigen::ComplexSchur<MatrixXd> schur(a);
  if (schur.info() != Eigen::Success) throw NumericError("complex Schur decomposition failed");
  const Eigen::MatrixXcd& u = schur.matrixU();
  const Eigen::MatrixXcd& t = schur.matrixT();
  const Eigen::MatrixXcd c = u.adjoint() * q.cast<std::complex<double>>() * u;

  // T Y + Y T^H = -C, solved column by column from the right.
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index j = m - 1; j >= 0; --j) {
    Eigen::VectorXcd rhs = -c.col(j);
    for (Eigen::Index k = j + 1; k < m; ++k) rhs -= std::conj(t(j, k)) * y.col(k);
    Eigen::MatrixXcd lhs = t;
    lhs.diagonal().array() += std::conj(t(j, j));
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::abs(lhs(i, i)) == 0.0) throw NumericError("lyapunov: operator is singular (A not stable)");
    }
    y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  return (u * y * u.adjoint()).real();
}

double spectral_abscissa(const MatrixXd& m) {
  if (!m.allFinite()) throw NumericError("spectral_abscissa: matrix has non-finite entries");
  const auto lambdas = eigenvalues(m);
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) worst = std::max(worst, lambdas[i].real());
  return worst;
}

bool is_stabilizable(const MatrixXd& a, const MatrixXd& b, double rel_tol) {
  return pbh_full_rank(a, b, rel_tol);
}

bool is_detectable(const MatrixXd& a, const MatrixXd& c, double rel_tol) {
  return pbh_full_rank(a.transpose(), c.transpose(), rel_tol);
}

double care_residual(const DenseAreProblem& p, const MatrixXd& x) {
  return max_abs(p.a.transpose() * x + x * p.a - x * p.b * p.r_inv * p.b.transpose() * x + p.q);
}

double fare_residual(const DenseFilterProblem& p, const MatrixXd& s) {
  return max_abs(p.a * s + s * p.a.transpose() + p.w - s * p.c.transpose() * p.v_inv * p.c * s);
}

AreSolution solve_care_dense(const DenseAreProblem& p, const NewtonOptions& opts) {
  const Eigen::Index m = p.a.rows();
  if (p.a.cols() != m || p.b.rows() != m || p.q.rows() != m || p.r_inv.rows() != p.b.cols()) {
    throw DomainError("solve_care_dense: dimension mismatch");
  }
  if (!is_stabilizable(p.a, p.b)) throw NotStabilizableError("(A, B) is not stabilizable");
  if (!is_detectable(p.a, p.q)) throw NotStabilizableError("(A, Q^{1/2}) is not detectable");
  Eigen::LLT<MatrixXd> r_inv_llt(p.r_inv);
  if (r_inv_llt.info() != Eigen::Success) throw DomainError("r_inv must be symmetric positive definite");
  const MatrixXd r = r_inv_llt.solve(MatrixXd::Identity(p.r_inv.rows(), p.r_inv.cols()));

  auto step = [&](const MatrixXd& k) {
    const MatrixXd closed = p.a - p.b * k;
    const MatrixXd x = symmetrize(solve_lyapunov(closed.transpose(), p.q + k.transpose() * r * k));
    MatrixXd next = p.r_inv * p.b.transpose() * x;
    return std::pair<MatrixXd, MatrixXd>{x, next};
  };
  auto residual = [&](const MatrixXd& x) { return care_residual(p, x); };
  auto sol = newton_loop(bass_gain(p.a, p.b), opts, step, residual, "control ARE");
  if (spectral_abscissa(p.a - p.b * sol.gain) >= 0.0) {
    throw InternalError("control ARE: Newton limit is not stabilizing");
  }
  return sol;
}

AreSolution solve_fare_dense(const DenseFilterProblem& p, const NewtonOptions& opts) {
  const Eigen::Index m = p.a.rows();
  if (p.a.cols() != m || p.w.rows() != m || p.c.cols() != m || p.v_inv.rows() != p.c.rows()) {
    throw DomainError("solve_fare_dense: dimension mismatch");
  }
  if (!is_detectable(p.a, p.c)) throw NotStabilizableError("(A, C) is not detectable");
  if (!is_stabilizable(p.a, p.w)) throw NotStabilizableError("(A, W^{1/2}) is not stabilizable");
  Eigen::LLT<MatrixXd> v_inv_llt(p.v_inv);
  if (v_inv_llt.info() != Eigen::Success) throw DomainError("v_inv must be symmetric positive definite");
  const MatrixXd v = v_inv_llt.solve(MatrixXd::Identity(p.v_inv.rows(), p.v_inv.cols()));

  auto step = [&](const MatrixXd& l) {
    const MatrixXd closed = p.a - l * p.c;
    const MatrixXd s = symmetrize(solve_lyapunov(closed, p.w + l * v * l.transpose()));
    MatrixXd next = s * p.c.transpose() * p.v_inv;
    return std::pair<MatrixXd, MatrixXd>{s, next};
  };
  auto residual = [&](const MatrixXd& s) { return fare_residual(p, s); };
  const MatrixXd start = bass_gain(p.a.transpose(), p.c.transpose()).transpose();
  auto sol = newton_loop(start, opts, step, residual, "filter ARE");
  if (spectral_abscissa(p.a - sol.gain * p.c) >= 0.0) {
    throw InternalError("filter ARE: Newton limit is not stabilizing");
  }
  return sol;
}

DenseAreProblem dual_control_problem(const DenseFilterProblem& p) {
  return DenseAreProblem{p.a.transpose(), p.c.transpose(), p.w, p.v_inv};
}

Eigen::Matrix2d solve_care_bruteforce_2x2(const Eigen::Matrix2d& a_in, const Eigen::Vector2d& b_in,
                                          const Eigen::Matrix2d& q_in, double r_inv) {
  if (!(r_inv > 0.0)) throw DomainError("bruteforce 2x2: r_inv must be positive");
  Eigen::Matrix2d swap;
  swap << 0, 1, 1, 0;
  const double bscale = b_in.cwiseAbs().maxCoeff();
  if (bscale == 0.0) throw InfeasibleError("bruteforce 2x2: b is zero");
  const bool swapped = std::abs(b_in(1)) <= 1e-14 * bscale;
  const Eigen::Matrix2d a = swapped ? Eigen::Matrix2d(swap * a_in * swap) : a_in;
  const Eigen::Vector2d b = swapped ? Eigen::Vector2d(swap * b_in) : b_in;
  const Eigen::Matrix2d q = swapped ? Eigen::Matrix2d(swap * q_in * swap) : q_in;
  const double ascale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (std::abs(b(0)) > 1e-14 * bscale) {
    throw InfeasibleError("bruteforce 2x2: b must have a single nonzero entry");
  }
  if (std::abs(a(0, 0)) > 1e-14 * ascale || a(0, 1) == 0.0) {
    throw InfeasibleError("bruteforce 2x2: block lacks the a11 = 0, a12 != 0 structure needed for elimination");
  }
  const double g = b(1) * b(1) * r_inv;
  const double a12 = a(0, 1), a21 = a(1, 0), a22 = a(1, 1);

  // (1,1): g x0^2 - 2 a21 x0 - q11 = 0
  // (2,2): g x2^2 - 2 a22 x2 - (2 a12 x0 + q22) = 0
  // (1,2): a12 x1 + a22 x0 + a21 x2 - g x0 x2 + q12 = 0
  std::array<double, 2> roots0{};
  if (!quadratic_roots(g, a21, q(0, 0), roots0)) throw InfeasibleError("bruteforce 2x2: no real x0");
  const Eigen::RowVector2d bt_rinv = r_inv * b.transpose();
  for (double x0 : roots0) {
    std::array<double, 2> roots2{};
    if (!quadratic_roots(g, a22, 2.0 * a12 * x0 + q(1, 1), roots2)) continue;
    for (double x2 : roots2) {
      const double x1 = (g * x0 * x2 - a22 * x0 - a21 * x2 - 0.5 * (q(0, 1) + q(1, 0))) / a12;
      Eigen::Matrix2d x;
      x << x1, x0, x0, x2;
      if (!(x1 > 0.0 && x.determinant() > 0.0)) continue;
      const Eigen::Matrix2d closed = a - b * (bt_rinv * x);
      if (spectral_abscissa(closed) >= 0.0) continue;
      const Eigen::Matrix2d res = a.transpose() * x + x * a - x * b * bt_rinv * x + q;
      if (res.cwiseAbs().maxCoeff() > 1e-10 * (1.0 + x.cwiseAbs().maxCoeff())) continue;
      return swapped ? Eigen::Matrix2d(swap * x * swap) : x;
    }
  }
  throw InfeasibleError("bruteforce 2x2: no positive definite stabilizing root");
}

Eigen::Matrix2d solve_fare_bruteforce_2x2(const Eigen::Matrix2d& a, const Eigen::RowVector2d& c,
                                          const Eigen::Matrix2d& w, double v_inv) {
  return solve_care_bruteforce_2x2(a.transpose(), c.transpose(), w, v_inv);
}

double laplacian_eigenvalue(std::size_t n, std::size_t k) {
  const double s = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  return -4.0 * s * s;
}

DenseAreProblem wave_control_block(const NondimParams& p, double d) {
  DenseAreProblem prob;
  prob.a = MatrixXd{{0.0, 1.0}, {d, 0.0}};
  prob.b = MatrixXd{{0.0}, {1.0}};
  prob.q = MatrixXd{{1.0 - p.pi1 * d, 0.0}, {0.0, p.pi2}};
  prob.r_inv = MatrixXd{{p.pi3 * p.pi3}};
  return prob;
}

DenseFilterProblem wave_filter_block(const NondimParams& p, double d) {
  DenseFilterProblem prob;
  prob.a = MatrixXd{{0.0, 1.0}, {d, 0.0}};
  prob.w = MatrixXd{{0.0, 0.0}, {0.0, 1.0}};
  prob.c = MatrixXd{{p.pi4, 0.0}};
  prob.v_inv = MatrixXd{{1.0 - p.pi1 * d}};
  return prob;
}

MatrixXd dense_laplacian(std::size_t n) {
  const auto en = static_cast<Eigen::Index>(n);
  MatrixXd d = MatrixXd::Zero(en, en);
  for (Eigen::Index i = 0; i < en; ++i) {
    d(i, i) -= 2.0;
    d(i, (i + 1) % en) += 1.0;
    d(i, (i + en - 1) % en) += 1.0;
  }
  return d;
}

MatrixXd wave_plant(std::size_t n) {
  const auto en = static_cast<Eigen::Index>(n);
  MatrixXd a = MatrixXd::Zero(2 * en, 2 * en);
  a.topRightCorner(en, en).setIdentity();
  a.bottomLeftCorner(en, en) = dense_laplacian(n);
  return a;
}

DenseAreProblem wave_control_full(const NondimParams& p) {
  validate(p);
  const auto en = static_cast<Eigen::Index>(p.n);
  const MatrixXd eye = MatrixXd::Identity(en, en);
  DenseAreProblem prob;
  prob.a = wave_plant(p.n);
  prob.b = MatrixXd::Zero(2 * en, en);
  prob.b.bottomRows(en).setIdentity();
  prob.q = MatrixXd::Zero(2 * en, 2 * en);
  prob.q.topLeftCorner(en, en) = eye - p.pi1 * dense_laplacian(p.n);
  prob.q.bottomRightCorner(en, en) = p.pi2 * eye;
  prob.r_inv = p.pi3 * p.pi3 * eye;
  return prob;
}

DenseFilterProblem wave_filter_full(const NondimParams& p) {
  validate(p);
  const auto en = static_cast<Eigen::Index>(p.n);
  const MatrixXd eye = MatrixXd::Identity(en, en);
  DenseFilterProblem prob;
  prob.a = wave_plant(p.n);
  prob.w = MatrixXd::Zero(2 * en, 2 * en);
  prob.w.bottomRightCorner(en, en) = eye;
  prob.c = MatrixXd::Zero(en, 2 * en);
  prob.c.leftCols(en) = p.pi4 * eye;
  prob.v_inv = eye - p.pi1 * dense_laplacian(p.n);
  return prob;
}

}  // namespace wavelqg::oracle
