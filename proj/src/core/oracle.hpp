#pragma once

// Dense algebraic-Riccati machinery used to cross-check the closed forms in
// synthesis. Nothing here calls into synthesis; the wave-equation problem
// builders assemble their matrices directly from the finite-difference stencil.

#include <vector>

#include <Eigen/Dense>

#include "core/nondim.hpp"

namespace wavelqg::oracle {

// Control form: A^T X + X A - X B Rinv B^T X + Q = 0.
struct DenseAreProblem {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  Eigen::MatrixXd q;
  Eigen::MatrixXd r_inv;
};

// Filter form: A S + S A^T + W - S C^T Vinv C S = 0, gain L = S C^T Vinv.
struct DenseFilterProblem {
  Eigen::MatrixXd a;
  Eigen::MatrixXd w;
  Eigen::MatrixXd c;
  Eigen::MatrixXd v_inv;
};

struct AreSolution {
  Eigen::MatrixXd x;     // stabilizing solution (P or S)
  Eigen::MatrixXd gain;  // K = Rinv B^T P, or L = S C^T Vinv
  int iterations = 0;
  std::vector<double> residual_history;  // max-norm ARE residual after each Newton step
};

struct NewtonOptions {
  int max_iterations = 200;
  double tolerance = 1e-14;  // on relative step size ||X_{i+1} - X_i|| / (1 + ||X_i||)
};

// Solves A X + X A^T + Q = 0 (A stable) by complex Schur reduction.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q);

double spectral_abscissa(const Eigen::MatrixXd& m);

// PBH tests at every eigenvalue with nonnegative real part.
bool is_stabilizable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double rel_tol = 1e-8);
bool is_detectable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c, double rel_tol = 1e-8);

double care_residual(const DenseAreProblem& p, const Eigen::MatrixXd& x);
double fare_residual(const DenseFilterProblem& p, const Eigen::MatrixXd& s);

// Newton-Kleinman from a Bass-shifted stabilizing start.
// Throws NotStabilizableError or ConvergenceError.
AreSolution solve_care_dense(const DenseAreProblem& p, const NewtonOptions& opts = {});
// Newton iteration written directly in the filter form (not via duality).
AreSolution solve_fare_dense(const DenseFilterProblem& p, const NewtonOptions& opts = {});
// Control problem with data (A^T, C^T, W, Vinv); its solution equals the filter S.
DenseAreProblem dual_control_problem(const DenseFilterProblem& p);

// Symmetric 2x2 control ARE solved by elimination. Requires b to have
// exactly one nonzero entry and the corresponding structural zero in a
// (after a coordinate swap, a(0,0) == 0 and a(0,1) != 0). All sign
// combinations of the two scalar quadratics are enumerated and the positive
// definite stabilizing candidate is returned. Throws InfeasibleError.
Eigen::Matrix2d solve_care_bruteforce_2x2(const Eigen::Matrix2d& a, const Eigen::Vector2d& b,
                                          const Eigen::Matrix2d& q, double r_inv);
// Filter form through transposition: (A^T, c^T, W, v_inv).
Eigen::Matrix2d solve_fare_bruteforce_2x2(const Eigen::Matrix2d& a, const Eigen::RowVector2d& c,
                                          const Eigen::Matrix2d& w, double v_inv);

// Wave-equation problems, frequency block k (built from d = -4 sin^2(pi k/n))
// or the full 2n x 2n spatial problem built from the stencil.
DenseAreProblem wave_control_block(const NondimParams& p, double d);
DenseFilterProblem wave_filter_block(const NondimParams& p, double d);
double laplacian_eigenvalue(std::size_t n, std::size_t k);
Eigen::MatrixXd dense_laplacian(std::size_t n);
Eigen::MatrixXd wave_plant(std::size_t n);  // [[0, I], [D2, 0]]
DenseAreProblem wave_control_full(const NondimParams& p);
DenseFilterProblem wave_filter_full(const NondimParams& p);

}  // namespace wavelqg::oracle
