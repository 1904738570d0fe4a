#include "wavelqg/wavelqg.h"

#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/oracle.hpp"
#include "core/serialize.hpp"
#include "core/simulator.hpp"
#include "core/spectral.hpp"
#include "core/synthesis.hpp"
#include "core/verify.hpp"

struct wlqg_gains {
  wavelqg::synthesis::GainSet set;
};

struct wlqg_sweep {
  std::vector<wavelqg::analysis::SweepRow> rows;
};

struct wlqg_sim {
  wavelqg::simulator::SimResult result;
};

namespace {

thread_local std::string g_last_error;

wlqg_status status_of(wavelqg::ErrorCode code) {
  using wavelqg::ErrorCode;
  switch (code) {
    case ErrorCode::Domain: return WLQG_DOMAIN;
    case ErrorCode::Symmetry: return WLQG_SYMMETRY;
    case ErrorCode::Convergence: return WLQG_CONVERGENCE;
    case ErrorCode::NotStabilizable: return WLQG_NOT_STABILIZABLE;
    case ErrorCode::Infeasible: return WLQG_INFEASIBLE;
    case ErrorCode::Numeric: return WLQG_NUMERIC;
    case ErrorCode::Instability: return WLQG_INSTABILITY;
    case ErrorCode::Internal: return WLQG_INTERNAL;
    case ErrorCode::Parse: return WLQG_PARSE;
  }
  return WLQG_INTERNAL;
}

template <class F>
wlqg_status guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return WLQG_OK;
  } catch (const wavelqg::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return WLQG_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WLQG_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return WLQG_INTERNAL;
  }
}

wlqg_status invalid(const std::string& msg) {
  g_last_error = msg;
  return WLQG_INVALID_ARGUMENT;
}

#define WLQG_REQUIRE(ptr)                                            \
  do {                                                               \
    if ((ptr) == nullptr) return invalid(#ptr " must not be NULL");  \
  } while (0)

wavelqg::NondimParams to_core(const wlqg_nondim& p) {
  wavelqg::NondimParams out;
  out.pi1 = p.pi1;
  out.pi2 = p.pi2;
  out.pi3 = p.pi3;
  out.pi4 = p.pi4;
  out.n = p.n;
  return out;
}

wavelqg::DimensionalParams to_core(const wlqg_dimensional& in) {
  wavelqg::DimensionalParams d;
  d.c = in.c;
  d.dx = in.dx;
  d.n = in.n;
  d.q1 = in.q1;
  d.q2 = in.q2;
  d.r = in.r;
  d.sigma_m = in.sigma_m;
  d.sigma_d = in.sigma_d;
  d.alpha = in.alpha;
  return d;
}

wlqg_nondim from_core(const wavelqg::NondimParams& p) { return wlqg_nondim{p.pi1, p.pi2, p.pi3, p.pi4, p.n}; }

wlqg_report from_core(const wavelqg::analysis::CostLocalityReport& r) {
  return wlqg_report{r.j_lqr,      r.j_kf,       r.j_lqg,
                     r.offdiag_k1, r.offdiag_k2, r.offdiag_l1,
                     r.offdiag_l2, r.residual_lqr_decentral, r.residual_kf_decentral};
}

wavelqg::analysis::CostLocalityReport to_core(const wlqg_report& r) {
  wavelqg::analysis::CostLocalityReport out;
  out.j_lqr = r.j_lqr;
  out.j_kf = r.j_kf;
  out.j_lqg = r.j_lqg;
  out.offdiag_k1 = r.offdiag_k1;
  out.offdiag_k2 = r.offdiag_k2;
  out.offdiag_l1 = r.offdiag_l1;
  out.offdiag_l2 = r.offdiag_l2;
  out.residual_lqr_decentral = r.residual_lqr_decentral;
  out.residual_kf_decentral = r.residual_kf_decentral;
  return out;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void append_row(std::ostringstream& os, const std::vector<double>& v) {
  for (double x : v) os << ',' << wavelqg::analysis::format_double(x);
}

}  // namespace

extern "C" {

const char* wlqg_version(void) { return "0.1.0"; }

const char* wlqg_status_string(wlqg_status status) {
  switch (status) {
    case WLQG_OK: return "ok";
    case WLQG_INVALID_ARGUMENT: return "invalid argument";
    case WLQG_DOMAIN: return "domain error";
    case WLQG_SYMMETRY: return "symmetry error";
    case WLQG_CONVERGENCE: return "convergence error";
    case WLQG_NOT_STABILIZABLE: return "not stabilizable";
    case WLQG_INFEASIBLE: return "infeasible";
    case WLQG_NUMERIC: return "numeric error";
    case WLQG_INSTABILITY: return "instability";
    case WLQG_INTERNAL: return "internal error";
    case WLQG_PARSE: return "parse error";
    case WLQG_OUT_OF_MEMORY: return "out of memory";
  }
  return "unknown status";
}

const char* wlqg_last_error(void) { return g_last_error.c_str(); }

void wlqg_string_free(char* s) { delete[] s; }

wlqg_nondim wlqg_nondim_default(void) { return from_core(wavelqg::NondimParams{}); }

wlqg_sim_config wlqg_sim_config_default(void) {
  const wavelqg::simulator::SimConfig d;
  wlqg_sim_config c{};
  c.params = from_core(d.params);
  c.dt = d.dt;
  c.t_final = d.t_final;
  c.seed = d.seed;
  c.burn_in = d.burn_in;
  c.n_realizations = d.n_realizations;
  c.noise_scale = d.noise_scale;
  c.record_stride = d.record_stride;
  c.threads = d.threads;
  return c;
}

wlqg_status wlqg_nondim_validate(const wlqg_nondim* p) {
  WLQG_REQUIRE(p);
  return guard([&] { wavelqg::validate(to_core(*p)); });
}

wlqg_status wlqg_nondimensionalize(const wlqg_dimensional* in, wlqg_nondim* out) {
  WLQG_REQUIRE(in);
  WLQG_REQUIRE(out);
  return guard([&] { *out = from_core(wavelqg::nondimensionalize(to_core(*in))); });
}

wlqg_status wlqg_check_matched_scaling(const wlqg_dimensional* in) {
  WLQG_REQUIRE(in);
  return guard([&] { wavelqg::require_matched_scaling(to_core(*in)); });
}

wlqg_status wlqg_locality_residuals(const wlqg_nondim* p, double* out_lqr, double* out_kf) {
  WLQG_REQUIRE(p);
  WLQG_REQUIRE(out_lqr);
  WLQG_REQUIRE(out_kf);
  return guard([&] {
    const auto [lqr, kf] = wavelqg::locality_residuals(to_core(*p));
    *out_lqr = lqr;
    *out_kf = kf;
  });
}

wlqg_status wlqg_params_from_json(const char* json, wlqg_nondim* out) {
  WLQG_REQUIRE(json);
  WLQG_REQUIRE(out);
  return guard([&] { *out = from_core(wavelqg::io::params_from_json(wavelqg::io::parse(json))); });
}

wlqg_status wlqg_params_to_json(const wlqg_nondim* p, char** out_json) {
  WLQG_REQUIRE(p);
  WLQG_REQUIRE(out_json);
  return guard([&] { *out_json = dup_string(wavelqg::io::to_json(to_core(*p)).dump(2)); });
}

wlqg_status wlqg_gains_synthesize(const wlqg_nondim* p, wlqg_gain_kind kind, wlqg_gains** out) {
  WLQG_REQUIRE(p);
  WLQG_REQUIRE(out);
  if (kind != WLQG_LQR && kind != WLQG_KF) return invalid("kind must be WLQG_LQR or WLQG_KF");
  return guard([&] {
    const auto params = to_core(*p);
    auto set = kind == WLQG_LQR ? wavelqg::synthesis::lqr_gains(params) : wavelqg::synthesis::kf_gains(params);
    *out = new wlqg_gains{std::move(set)};
  });
}

wlqg_status wlqg_gains_from_json(const char* json, wlqg_gains** out) {
  WLQG_REQUIRE(json);
  WLQG_REQUIRE(out);
  return guard([&] { *out = new wlqg_gains{wavelqg::io::gain_set_from_json(wavelqg::io::parse(json))}; });
}

void wlqg_gains_destroy(wlqg_gains* g) { delete g; }

wlqg_status wlqg_gains_kind(const wlqg_gains* g, wlqg_gain_kind* out) {
  WLQG_REQUIRE(g);
  WLQG_REQUIRE(out);
  *out = g->set.kind == wavelqg::synthesis::GainKind::Lqr ? WLQG_LQR : WLQG_KF;
  return WLQG_OK;
}

wlqg_status wlqg_gains_size(const wlqg_gains* g, size_t* out_n) {
  WLQG_REQUIRE(g);
  WLQG_REQUIRE(out_n);
  *out_n = g->set.block1.size();
  return WLQG_OK;
}

wlqg_status wlqg_gains_first_row(const wlqg_gains* g, int block, double* buf, size_t len) {
  WLQG_REQUIRE(g);
  WLQG_REQUIRE(buf);
  if (block != 1 && block != 2) return invalid("block must be 1 or 2");
  const auto& row = (block == 1 ? g->set.block1 : g->set.block2).first_row();
  if (len < row.size()) return invalid("buffer shorter than n");
  std::copy(row.begin(), row.end(), buf);
  return WLQG_OK;
}

wlqg_status wlqg_gains_spectral(const wlqg_gains* g, double* base, double* companion, size_t len) {
  WLQG_REQUIRE(g);
  WLQG_REQUIRE(base);
  WLQG_REQUIRE(companion);
  const auto& s = g->set.spectral;
  if (len < s.base.size()) return invalid("buffer shorter than n");
  std::copy(s.base.begin(), s.base.end(), base);
  std::copy(s.companion.begin(), s.companion.end(), companion);
  return WLQG_OK;
}

wlqg_status wlqg_gains_offdiag(const wlqg_gains* g, double* out_block1, double* out_block2) {
  WLQG_REQUIRE(g);
  WLQG_REQUIRE(out_block1);
  WLQG_REQUIRE(out_block2);
  return guard([&] {
    *out_block1 = wavelqg::spectral::offdiag_mass(g->set.block1);
    *out_block2 = wavelqg::spectral::offdiag_mass(g->set.block2);
  });
}

wlqg_status wlqg_gains_is_decentralized(const wlqg_gains* g, int* out) {
  WLQG_REQUIRE(g);
  WLQG_REQUIRE(out);
  return guard([&] { *out = wavelqg::synthesis::is_decentralized(g->set) ? 1 : 0; });
}

wlqg_status wlqg_gains_to_json(const wlqg_gains* g, char** out_json) {
  WLQG_REQUIRE(g);
  WLQG_REQUIRE(out_json);
  return guard([&] { *out_json = dup_string(wavelqg::io::to_json(g->set).dump(2)); });
}

wlqg_status wlqg_report_compute(const wlqg_nondim* p, wlqg_report* out) {
  WLQG_REQUIRE(p);
  WLQG_REQUIRE(out);
  return guard([&] { *out = from_core(wavelqg::analysis::report(to_core(*p))); });
}

wlqg_status wlqg_report_to_json(const wlqg_report* r, char** out_json) {
  WLQG_REQUIRE(r);
  WLQG_REQUIRE(out_json);
  return guard([&] { *out_json = dup_string(wavelqg::io::to_json(to_core(*r)).dump(2)); });
}

wlqg_status wlqg_report_from_json(const char* json, wlqg_report* out) {
  WLQG_REQUIRE(json);
  WLQG_REQUIRE(out);
  return guard([&] { *out = from_core(wavelqg::io::report_from_json(wavelqg::io::parse(json))); });
}

wlqg_status wlqg_lqg_cost_dual(const wlqg_nondim* p, double* out) {
  WLQG_REQUIRE(p);
  WLQG_REQUIRE(out);
  return guard([&] { *out = wavelqg::analysis::lqg_cost_dual(to_core(*p)); });
}

wlqg_status wlqg_closed_loop_check(const wlqg_nondim* p, double* abscissa_regulator, double* abscissa_estimator,
                                   double* abscissa_augmented, double* separation_mismatch) {
  WLQG_REQUIRE(p);
  WLQG_REQUIRE(abscissa_regulator);
  WLQG_REQUIRE(abscissa_estimator);
  WLQG_REQUIRE(abscissa_augmented);
  WLQG_REQUIRE(separation_mismatch);
  return guard([&] {
    const auto loop = wavelqg::analysis::build_closed_loop(to_core(*p));
    *abscissa_regulator = wavelqg::oracle::spectral_abscissa(loop.regulator());
    *abscissa_estimator = wavelqg::oracle::spectral_abscissa(loop.estimator());
    *abscissa_augmented = wavelqg::oracle::spectral_abscissa(loop.augmented());
    *separation_mismatch = wavelqg::analysis::separation_mismatch(loop);
  });
}

wlqg_status wlqg_sweep_run(const wlqg_sweep_grid* grid, wlqg_sweep** out) {
  WLQG_REQUIRE(grid);
  WLQG_REQUIRE(out);
  if ((grid->pi1_count > 0 && grid->pi1_values == nullptr) || (grid->pi34_count > 0 && grid->pi34_values == nullptr)) {
    return invalid("grid value arrays must not be NULL");
  }
  return guard([&] {
    wavelqg::analysis::SweepGrid g;
    g.pi1_values.assign(grid->pi1_values, grid->pi1_values + grid->pi1_count);
    g.pi34_values.assign(grid->pi34_values, grid->pi34_values + grid->pi34_count);
    g.pi2 = grid->pi2;
    g.n = grid->n;
    g.tie_pi3_pi4 = grid->tie_pi3_pi4 != 0;
    g.pi3_fixed = grid->pi3_fixed;
    g.threads = grid->threads;
    *out = new wlqg_sweep{wavelqg::analysis::sweep(g)};
  });
}

wlqg_status wlqg_curve_run(const double* pi1_values, size_t count, double pi2, size_t n, unsigned threads,
                           wlqg_sweep** out) {
  WLQG_REQUIRE(pi1_values);
  WLQG_REQUIRE(out);
  return guard([&] {
    std::vector<double> values(pi1_values, pi1_values + count);
    *out = new wlqg_sweep{wavelqg::analysis::decentralization_curve(values, pi2, n, threads)};
  });
}

void wlqg_sweep_destroy(wlqg_sweep* s) { delete s; }

wlqg_status wlqg_sweep_rows(const wlqg_sweep* s, size_t* out_count) {
  WLQG_REQUIRE(s);
  WLQG_REQUIRE(out_count);
  *out_count = s->rows.size();
  return WLQG_OK;
}

wlqg_status wlqg_sweep_row_at(const wlqg_sweep* s, size_t index, wlqg_sweep_row* out) {
  WLQG_REQUIRE(s);
  WLQG_REQUIRE(out);
  if (index >= s->rows.size()) return invalid("row index out of range");
  const auto& r = s->rows[index];
  *out = wlqg_sweep_row{from_core(r.params), from_core(r.report), r.pi1_index, r.pi34_index,
                        r.on_curve_lqr ? 1 : 0, r.on_curve_kf ? 1 : 0};
  return WLQG_OK;
}

wlqg_status wlqg_sweep_csv(const wlqg_sweep* s, char** out_csv) {
  WLQG_REQUIRE(s);
  WLQG_REQUIRE(out_csv);
  return guard([&] { *out_csv = dup_string(wavelqg::analysis::sweep_csv(s->rows)); });
}

wlqg_status wlqg_sweep_curve_csv(const wlqg_sweep* s, char** out_csv) {
  WLQG_REQUIRE(s);
  WLQG_REQUIRE(out_csv);
  return guard([&] { *out_csv = dup_string(wavelqg::analysis::curve_csv(s->rows)); });
}

wlqg_status wlqg_log_grid(double lo, double hi, size_t count, double* buf) {
  WLQG_REQUIRE(buf);
  return guard([&] {
    const auto v = wavelqg::analysis::log_grid(lo, hi, count);
    std::copy(v.begin(), v.end(), buf);
  });
}

wlqg_status wlqg_simulate(const wlqg_sim_config* cfg, wlqg_sim** out) {
  WLQG_REQUIRE(cfg);
  WLQG_REQUIRE(out);
  return guard([&] {
    wavelqg::simulator::SimConfig c;
    c.params = to_core(cfg->params);
    c.dt = cfg->dt;
    c.t_final = cfg->t_final;
    c.seed = cfg->seed;
    c.burn_in = cfg->burn_in;
    c.n_realizations = cfg->n_realizations;
    c.noise_scale = cfg->noise_scale;
    const std::size_t m = 2 * cfg->params.n;
    if (cfg->initial_state) c.initial_state.assign(cfg->initial_state, cfg->initial_state + m);
    if (cfg->initial_estimate) c.initial_estimate.assign(cfg->initial_estimate, cfg->initial_estimate + m);
    c.record_stride = cfg->record_stride;
    c.threads = cfg->threads;
    *out = new wlqg_sim{wavelqg::simulator::simulate(c)};
  });
}

void wlqg_sim_destroy(wlqg_sim* s) { delete s; }

wlqg_status wlqg_sim_summary_get(const wlqg_sim* s, wlqg_sim_summary* out) {
  WLQG_REQUIRE(s);
  WLQG_REQUIRE(out);
  const auto& m = s->result.summary;
  *out = wlqg_sim_summary{m.empirical_lqg_cost,
                          m.empirical_lqg_cost_stderr,
                          m.empirical_est_err_cov_trace,
                          m.empirical_est_err_cov_trace_stderr,
                          m.analytic_lqg_cost,
                          m.analytic_kf_cost,
                          m.steps};
  return WLQG_OK;
}

wlqg_status wlqg_sim_summary_json(const wlqg_sim* s, char** out_json) {
  WLQG_REQUIRE(s);
  WLQG_REQUIRE(out_json);
  return guard([&] { *out_json = dup_string(wavelqg::io::to_json(s->result.summary).dump(2)); });
}

wlqg_status wlqg_sim_trajectory_csv(const wlqg_sim* s, char** out_csv) {
  WLQG_REQUIRE(s);
  WLQG_REQUIRE(out_csv);
  return guard([&] {
    const auto& tr = s->result.trajectory;
    std::ostringstream os;
    const std::size_t n = tr.plant_state.empty() ? 0 : tr.plant_state.front().size() / 2;
    os << "t,running_cost";
    for (const char* prefix : {"phi_", "dphi_"})
      for (std::size_t i = 0; i < n; ++i) os << ',' << prefix << i;
    for (const char* prefix : {"est_phi_", "est_dphi_"})
      for (std::size_t i = 0; i < n; ++i) os << ',' << prefix << i;
    for (std::size_t i = 0; i < n; ++i) os << ",u_" << i;
    os << '\n';
    for (std::size_t r = 0; r < tr.times.size(); ++r) {
      os << wavelqg::analysis::format_double(tr.times[r]) << ','
         << wavelqg::analysis::format_double(tr.running_cost[r]);
      append_row(os, tr.plant_state[r]);
      append_row(os, tr.estimate[r]);
      append_row(os, tr.control[r]);
      os << '\n';
    }
    *out_csv = dup_string(os.str());
  });
}

double wlqg_sim_max_dt(const wlqg_nondim* p) {
  if (p == nullptr) return 0.0;
  return wavelqg::simulator::max_stable_dt(to_core(*p));
}

wlqg_status wlqg_sample_correlated_noise(double pi1, size_t n, uint64_t seed, size_t count, double* buf) {
  WLQG_REQUIRE(buf);
  return guard([&] {
    wavelqg::simulator::Rng rng(seed);
    for (std::size_t s = 0; s < count; ++s) {
      const auto v = wavelqg::simulator::sample_correlated_noise(pi1, n, rng);
      std::copy(v.begin(), v.end(), buf + s * n);
    }
  });
}

wlqg_status wlqg_verify(const wlqg_nondim* p, const char* gains_json, int* passed, char** report_json) {
  WLQG_REQUIRE(p);
  WLQG_REQUIRE(passed);
  return guard([&] {
    auto report = wavelqg::verify::run(to_core(*p));
    if (gains_json != nullptr) {
      wavelqg::verify::check_gain_set(report, wavelqg::io::gain_set_from_json(wavelqg::io::parse(gains_json)));
    }
    *passed = report.passed ? 1 : 0;
    if (report_json != nullptr) *report_json = dup_string(wavelqg::verify::to_json(report).dump(2));
  });
}

}  // extern "C"
