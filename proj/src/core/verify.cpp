#include "core/verify.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/oracle.hpp"
#include "core/serialize.hpp"

namespace wavelqg::verify {
namespace {

using Eigen::Matrix2d;
using Eigen::MatrixXd;

struct Worst {
  double value = 0.0;
  std::optional<std::size_t> kappa;

  void take(double v, std::size_t k) {
    if (!std::isfinite(v)) v = INFINITY;
    if (!kappa || v > value) {
      value = v;
      kappa = k;
    }
  }
};

void add(Report& r, std::string name, const Worst& w, double tol, std::string note = {}) {
  Check c;
  c.name = std::move(name);
  c.value = w.value;
  c.tolerance = tol;
  c.kappa = w.kappa;
  c.passed = std::isfinite(w.value) && w.value <= tol;
  c.note = std::move(note);
  r.passed = r.passed && c.passed;
  r.checks.push_back(std::move(c));
}

void add_failure(Report& r, std::string name, std::string note) {
  Check c;
  c.name = std::move(name);
  c.value = INFINITY;
  c.passed = false;
  c.note = std::move(note);
  r.passed = false;
  r.checks.push_back(std::move(c));
}

void add_skip(Report& r, std::string name, std::string note) {
  Check c;
  c.name = std::move(name);
  c.passed = true;
  c.skipped = true;
  c.note = std::move(note);
  r.checks.push_back(std::move(c));
}

double rel_diff(const MatrixXd& got, const MatrixXd& ref) {
  const double scale = std::max(ref.cwiseAbs().maxCoeff(), 1e-300);
  return (got - ref).cwiseAbs().maxCoeff() / scale;
}

Matrix2d riccati_block(const synthesis::RiccatiSpectrum& s, std::size_t k) {
  Matrix2d m;
  m << s.diag1[k], s.p0[k], s.p0[k], s.diag2[k];
  return m;
}

bool positive_definite(const Matrix2d& m) { return m(0, 0) > 0.0 && m.determinant() > 0.0; }

void per_frequency_checks(Report& r, const NondimParams& p, const Tolerances& tol) {
  const auto ps = synthesis::lqr_riccati_spectrum(p);
  const auto ss = synthesis::kf_riccati_spectrum(p);
  const auto kg = synthesis::lqr_spectral_gain(p);
  const auto lg = synthesis::kf_spectral_gain(p);

  Worst res_p, res_s, brute_p, brute_s, newton_p, newton_s, gain_k, gain_l, stab_k, stab_l;
  std::optional<std::size_t> not_pd;
  for (std::size_t k = 0; k < p.n; ++k) {
    const double d = oracle::laplacian_eigenvalue(p.n, k);
    const auto cp = oracle::wave_control_block(p, d);
    const auto fp = oracle::wave_filter_block(p, d);
    const Matrix2d pk = riccati_block(ps, k);
    const Matrix2d sk = riccati_block(ss, k);
    if (!positive_definite(pk) || !positive_definite(sk)) not_pd = not_pd.value_or(k);

    res_p.take(oracle::care_residual(cp, pk), k);
    res_s.take(oracle::fare_residual(fp, sk), k);

    const Matrix2d bp = oracle::solve_care_bruteforce_2x2(cp.a, cp.b, cp.q, cp.r_inv(0, 0));
    const Matrix2d bs = oracle::solve_fare_bruteforce_2x2(fp.a, fp.c, fp.w, fp.v_inv(0, 0));
    brute_p.take(rel_diff(pk, bp), k);
    brute_s.take(rel_diff(sk, bs), k);

    const auto np = oracle::solve_care_dense(cp);
    const auto ns = oracle::solve_fare_dense(fp);
    newton_p.take(rel_diff(pk, np.x), k);
    newton_s.take(rel_diff(sk, ns.x), k);

    MatrixXd kk(1, 2);
    kk << kg.base[k], kg.companion[k];
    MatrixXd ll(2, 1);
    ll << lg.companion[k], lg.base[k];
    gain_k.take(rel_diff(kk, np.gain), k);
    gain_l.take(rel_diff(ll, ns.gain), k);

    stab_k.take(oracle::spectral_abscissa(cp.a - cp.b * kk), k);
    stab_l.take(oracle::spectral_abscissa(fp.a - ll * fp.c), k);
  }

  add(r, "lqr_are_residual", res_p, tol.are_residual);
  add(r, "kf_are_residual", res_s, tol.are_residual);
  add(r, "lqr_bruteforce_agreement", brute_p, tol.block_agreement);
  add(r, "kf_bruteforce_agreement", brute_s, tol.block_agreement);
  add(r, "lqr_newton_block_agreement", newton_p, tol.block_agreement);
  add(r, "kf_newton_block_agreement", newton_s, tol.block_agreement);
  add(r, "lqr_block_gain_agreement", gain_k, tol.block_agreement);
  add(r, "kf_block_gain_agreement", gain_l, tol.block_agreement);
  // Strictly negative abscissa: pass iff worst value < 0, encoded as <= -tiny.
  add(r, "lqr_block_closed_loop_abscissa", stab_k, -1e-300);
  add(r, "kf_block_closed_loop_abscissa", stab_l, -1e-300);
  if (not_pd) {
    add_failure(r, "riccati_positive_definite", "not positive definite at kappa " + std::to_string(*not_pd));
  } else {
    Worst ok;
    ok.take(0.0, 0);
    add(r, "riccati_positive_definite", ok, 0.0);
  }
}

void dense_checks(Report& r, const NondimParams& p, const Tolerances& tol) {
  const auto kset = synthesis::lqr_gains(p);
  const auto lset = synthesis::kf_gains(p);
  const MatrixXd k_ref = synthesis::dense_gain(kset);
  const MatrixXd l_ref = synthesis::dense_gain(lset);

  const auto cp = oracle::wave_control_full(p);
  const auto fp = oracle::wave_filter_full(p);
  const auto np = oracle::solve_care_dense(cp);
  const auto ns = oracle::solve_fare_dense(fp);

  Worst wk, wl, ak, al;
  wk.take(rel_diff(np.gain, k_ref), 0);
  wl.take(rel_diff(ns.gain, l_ref), 0);
  add(r, "lqr_dense_gain_agreement", wk, tol.dense_agreement);
  add(r, "kf_dense_gain_agreement", wl, tol.dense_agreement);

  ak.take(oracle::spectral_abscissa(cp.a - cp.b * k_ref), 0);
  al.take(oracle::spectral_abscissa(fp.a - l_ref * fp.c), 0);
  add(r, "lqr_dense_closed_loop_abscissa", ak, -1e-300);
  add(r, "kf_dense_closed_loop_abscissa", al, -1e-300);
}

template <class F>
void guarded(Report& r, const std::string& name, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    add_failure(r, name, e.what());
  }
}

}  // namespace

Report run(const NondimParams& p, const Options& opts) {
  validate(p);
  Report r;
  r.params = p;
  guarded(r, "per_frequency", [&] { per_frequency_checks(r, p, opts.tol); });
  if (p.n <= opts.dense_max_n) {
    guarded(r, "dense", [&] { dense_checks(r, p, opts.tol); });
  } else {
    add_skip(r, "dense", "n exceeds the dense limit of " + std::to_string(opts.dense_max_n));
  }
  return r;
}

void check_gain_set(Report& r, const synthesis::GainSet& supplied, const Options& opts) {
  const std::string prefix = std::string(synthesis::to_string(supplied.kind)) + "_file_";
  guarded(r, prefix + "gains", [&] {
    const auto& p = supplied.params;
    const auto ref = supplied.kind == synthesis::GainKind::Lqr ? synthesis::lqr_gains(p) : synthesis::kf_gains(p);
    const auto spec1 = spectral::spectrum_of_circulant(supplied.block1).values();
    const auto spec2 = spectral::spectrum_of_circulant(supplied.block2).values();
    const auto ref1 = spectral::spectrum_of_circulant(ref.block1).values();
    const auto ref2 = spectral::spectrum_of_circulant(ref.block2).values();

    double scale = 0.0;
    for (std::size_t k = 0; k < p.n; ++k) scale = std::max({scale, std::abs(ref1[k]), std::abs(ref2[k])});
    Worst blocks, base, companion;
    for (std::size_t k = 0; k < p.n; ++k) {
      blocks.take(std::max(std::abs(spec1[k] - ref1[k]), std::abs(spec2[k] - ref2[k])) / scale, k);
      base.take(std::abs(supplied.spectral.base[k] - ref.spectral.base[k]) / scale, k);
      companion.take(std::abs(supplied.spectral.companion[k] - ref.spectral.companion[k]) / scale, k);
    }
    add(r, prefix + "block_spectrum", blocks, opts.tol.gain_file);
    add(r, prefix + "spectral_base", base, opts.tol.gain_file);
    add(r, prefix + "spectral_companion", companion, opts.tol.gain_file);

    // Residual of the Riccati equation read back from the supplied gains.
    Worst residual;
    for (std::size_t k = 0; k < p.n; ++k) {
      const double d = oracle::laplacian_eigenvalue(p.n, k);
      const double g1 = spec1[k].real();
      const double g2 = spec2[k].real();
      if (supplied.kind == synthesis::GainKind::Lqr) {
        const auto cp = oracle::wave_control_block(p, d);
        const double r_inv = cp.r_inv(0, 0);
        // K = Rinv B^T P fixes the second row of P; the first diagonal entry
        // follows from the (1,2) ARE entry.
        Matrix2d x;
        const double p0 = g1 / r_inv, p2 = g2 / r_inv;
        x << p2 * (g1 - d), p0, p0, p2;
        residual.take(oracle::care_residual(cp, x), k);
      } else {
        const auto fp = oracle::wave_filter_block(p, d);
        const double cv = fp.c(0, 0) * fp.v_inv(0, 0);
        Matrix2d x;
        const double s0 = g2 / cv, s1 = g1 / cv;
        x << s1, s0, s0, s1 * (fp.c(0, 0) * g2 - d);
        residual.take(oracle::fare_residual(fp, x), k);
      }
    }
    add(r, prefix + "are_residual", residual, opts.tol.are_residual);
  });
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json checks = nlohmann::json::array();
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json j{{"name", c.name}, {"passed", c.passed}, {"skipped", c.skipped}};
    if (!c.skipped) {
      j["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr);
      j["tolerance"] = c.tolerance;
    }
    if (c.kappa) j["kappa"] = *c.kappa;
    if (!c.note.empty()) j["note"] = c.note;
    if (!c.passed) failures.push_back(j);
    checks.push_back(std::move(j));
  }
  return {{"params", io::to_json(r.params)}, {"passed", r.passed}, {"checks", checks}, {"failures", failures}};
}

}  // namespace wavelqg::verify
