// wavelqg: gains, verification, sweeps and simulation for the ring wave equation.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "run_config.hpp"
#include "svg.hpp"
#include "wavelqg/wavelqg.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wavelqg::cli;

namespace {

// Command-line values; only those actually given override the config file.
struct Flags {
  std::string config;
  std::optional<double> pi1, pi2, pi3, pi4;
  std::optional<std::size_t> n;
  std::optional<double> c, dx, q1, q2, r, sigma_m, sigma_d, alpha;
  std::optional<unsigned> threads;

  std::optional<std::string> kind, out_dir;
  std::optional<std::string> check_file, out;
  std::optional<double> pi1_min, pi1_max, pi34_min, pi34_max, pi3_fixed;
  std::optional<std::size_t> pi1_count, pi34_count;
  bool untied = false, curve_only = false;
  std::optional<std::string> metric, svg, curve_svg;
  std::optional<double> dt, t_final, burn_in;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations, record_stride;
  bool zero_noise = false;
  std::optional<std::string> summary, trajectory, format;
};

struct CString {
  char* p = nullptr;
  ~CString() { wlqg_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct GainsHandle {
  wlqg_gains* p = nullptr;
  ~GainsHandle() { wlqg_gains_destroy(p); }
};

struct SweepHandle {
  wlqg_sweep* p = nullptr;
  ~SweepHandle() { wlqg_sweep_destroy(p); }
};

struct SimHandle {
  wlqg_sim* p = nullptr;
  ~SimHandle() { wlqg_sim_destroy(p); }
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes every file to a sibling temporary first and renames only when all
// writes succeeded, so a failure leaves no partial outputs behind.
void write_files(const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto discard = [&] {
    std::error_code ec;
    for (const auto& [tmp, dst] : staged) fs::remove(tmp, ec);
  };
  for (const auto& [path, content] : files) {
    const fs::path dst(path);
    fs::path tmp = dst;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) staged.emplace_back(tmp, dst);
    out << content;
    out.close();
    if (!out) {
      discard();
      throw OutputError("cannot write '" + path + "'");
    }
  }
  for (const auto& [tmp, dst] : staged) {
    std::error_code ec;
    fs::rename(tmp, dst, ec);
    if (ec) {
      discard();
      throw OutputError("cannot write '" + dst.string() + "': " + ec.message());
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_param_options(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration; flags override its values");
  sub->add_option("--pi1", f.pi1, "gradient weight alpha^2/dx^2 (>= 0)");
  sub->add_option("--pi2", f.pi2, "kinetic-energy weight (> 0)");
  sub->add_option("--pi3", f.pi3, "inverse control-effort weight (> 0)");
  sub->add_option("--pi4", f.pi4, "model-to-sensor quality ratio (> 0)");
  sub->add_option("--n", f.n, "number of sites on the ring (>= 2)");
  sub->add_option("--c", f.c, "wave speed");
  sub->add_option("--dx", f.dx, "grid spacing");
  sub->add_option("--q1", f.q1, "displacement state weight");
  sub->add_option("--q2", f.q2, "velocity state weight");
  sub->add_option("--r", f.r, "control weight");
  sub->add_option("--sigma-m", f.sigma_m, "measurement noise intensity");
  sub->add_option("--sigma-d", f.sigma_d, "disturbance intensity");
  sub->add_option("--alpha", f.alpha, "gradient length scale");
  sub->add_option("--threads", f.threads, "worker count (0: all cores); WAVELQG_THREADS caps it");
}

template <class T>
void overlay(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

template <class T>
void overlay(T& dst, const std::optional<T>& src) {
  if (src) dst = *src;
}

RunConfig build_config(const std::string& command, const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  if (!cfg.command.empty() && cfg.command != command) {
    throw UsageError("config file is for '" + cfg.command + "', not '" + command + "'");
  }
  cfg.command = command;
  overlay(cfg.nondim.pi1, f.pi1);
  overlay(cfg.nondim.pi2, f.pi2);
  overlay(cfg.nondim.pi3, f.pi3);
  overlay(cfg.nondim.pi4, f.pi4);
  overlay(cfg.n, f.n);
  overlay(cfg.dimensional.c, f.c);
  overlay(cfg.dimensional.dx, f.dx);
  overlay(cfg.dimensional.q1, f.q1);
  overlay(cfg.dimensional.q2, f.q2);
  overlay(cfg.dimensional.r, f.r);
  overlay(cfg.dimensional.sigma_m, f.sigma_m);
  overlay(cfg.dimensional.sigma_d, f.sigma_d);
  overlay(cfg.dimensional.alpha, f.alpha);
  overlay(cfg.threads, f.threads);

  overlay(cfg.synth.kind, f.kind);
  overlay(cfg.synth.out_dir, f.out_dir);
  overlay(cfg.verify.check_file, f.check_file);

  auto& sw = cfg.sweep;
  overlay(sw.pi1_min, f.pi1_min);
  overlay(sw.pi1_max, f.pi1_max);
  overlay(sw.pi1_count, f.pi1_count);
  overlay(sw.pi34_min, f.pi34_min);
  overlay(sw.pi34_max, f.pi34_max);
  overlay(sw.pi34_count, f.pi34_count);
  overlay(sw.pi3_fixed, f.pi3_fixed);
  if (f.untied) sw.tie_pi3_pi4 = false;
  if (f.curve_only) sw.curve_only = true;
  overlay(sw.metric, f.metric);
  overlay(sw.svg, f.svg);
  overlay(sw.curve_svg, f.curve_svg);

  auto& sim = cfg.simulate;
  overlay(sim.dt, f.dt);
  overlay(sim.t_final, f.t_final);
  overlay(sim.seed, f.seed);
  overlay(sim.burn_in, f.burn_in);
  overlay(sim.realizations, f.realizations);
  overlay(sim.record_stride, f.record_stride);
  if (f.zero_noise) sim.zero_noise = true;
  overlay(sim.summary, f.summary);
  overlay(sim.trajectory, f.trajectory);

  if (f.format) cfg.report.format = output_format_from_string(*f.format);
  if (f.out) {
    if (command == "verify") cfg.verify.out = *f.out;
    if (command == "sweep") sw.out = *f.out;
    if (command == "report") cfg.report.out = *f.out;
  }
  return cfg;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string pi_string(const wlqg_nondim& p) {
  std::ostringstream os;
  os << "pi1=" << fmt(p.pi1) << " pi2=" << fmt(p.pi2) << " pi3=" << fmt(p.pi3) << " pi4=" << fmt(p.pi4)
     << " n=" << p.n;
  return os.str();
}

// ---------------------------------------------------------------- synth --

struct Verdict {
  bool decentralized;
  std::string text;
};

Verdict verdict_for(const wlqg_nondim& p, wlqg_gains* g, wlqg_gain_kind kind) {
  int dec = 0;
  double off1 = 0, off2 = 0, res_lqr = 0, res_kf = 0;
  check(wlqg_gains_is_decentralized(g, &dec));
  check(wlqg_gains_offdiag(g, &off1, &off2));
  check(wlqg_locality_residuals(&p, &res_lqr, &res_kf));
  const bool lqr = kind == WLQG_LQR;
  std::ostringstream os;
  os << (lqr ? "lqr" : "kf") << ": ";
  if (dec) {
    os << "completely decentralized";
  } else if (p.pi1 == 0.0) {
    os << "not decentralizable (Π₁=0)";
  } else {
    os << "not decentralized";
  }
  os << " (" << (lqr ? "pi1 - 2/pi3 = " : "pi1 - 2/pi4 = ") << fmt(lqr ? res_lqr : res_kf) << ", offdiag "
     << (lqr ? "K1 = " : "L1 = ") << fmt(off1) << ", " << (lqr ? "K2 = " : "L2 = ") << fmt(off2) << ")";
  return {dec != 0, os.str()};
}

int cmd_synth(const RunConfig& cfg) {
  const wlqg_nondim p = resolve_params(cfg);
  std::vector<wlqg_gain_kind> kinds;
  if (cfg.synth.kind == "lqr" || cfg.synth.kind == "both") kinds.push_back(WLQG_LQR);
  if (cfg.synth.kind == "kf" || cfg.synth.kind == "both") kinds.push_back(WLQG_KF);
  if (kinds.empty()) throw UsageError("--kind must be lqr, kf or both");

  std::vector<std::pair<std::string, std::string>> files;
  std::vector<Verdict> verdicts;
  for (auto kind : kinds) {
    GainsHandle g;
    check(wlqg_gains_synthesize(&p, kind, &g.p));
    CString text;
    check(wlqg_gains_to_json(g.p, &text.p));
    const fs::path path = fs::path(cfg.synth.out_dir) / (kind == WLQG_LQR ? "gains_lqr.json" : "gains_kf.json");
    files.emplace_back(path.string(), text.str() + "\n");
    verdicts.push_back(verdict_for(p, g.p, kind));
  }
  std::error_code ec;
  fs::create_directories(cfg.synth.out_dir, ec);
  write_files(files);

  std::cout << pi_string(p) << "\n";
  bool all = true;
  for (const auto& v : verdicts) {
    std::cout << v.text << "\n";
    all = all && v.decentralized;
  }
  std::string overall;
  if (all) {
    overall = "completely decentralized";
  } else if (p.pi1 == 0.0) {
    overall = "not decentralizable (Π₁=0)";
  } else {
    overall = "not completely decentralized";
  }
  std::cout << "verdict: " << overall << "\n";
  for (const auto& [path, content] : files) std::cout << "wrote " << path << "\n";
  return 0;
}

// --------------------------------------------------------------- verify --

int cmd_verify(const RunConfig& cfg) {
  std::string gains_text;
  RunConfig effective = cfg;
  if (!cfg.verify.check_file.empty()) {
    gains_text = read_file(cfg.verify.check_file);
    // Without explicit parameters the suite runs at the gain file's own point.
    if (!cfg.nondim.any() && !cfg.dimensional.any()) {
      try {
        const json g = json::parse(gains_text);
        const auto& pi = g.at("pi");
        effective.nondim.pi1 = pi.at("pi1").get<double>();
        effective.nondim.pi2 = pi.at("pi2").get<double>();
        effective.nondim.pi3 = pi.at("pi3").get<double>();
        effective.nondim.pi4 = pi.at("pi4").get<double>();
        if (!cfg.n) effective.n = g.at("n").get<std::size_t>();
      } catch (const json::exception&) {
        // Left to the library, which reports the schema problem precisely.
      }
    }
  }
  const wlqg_nondim p = resolve_params(effective);
  if (p.n > 64) std::cerr << "verify: n > 64, dense full-system checks are skipped\n";
  int passed = 0;
  CString report;
  check(wlqg_verify(&p, gains_text.empty() ? nullptr : gains_text.c_str(), &passed, &report.p));
  const std::string text = report.str() + "\n";
  if (!cfg.verify.out.empty()) write_files({{cfg.verify.out, text}});
  std::cout << text;
  if (!passed) {
    const json r = json::parse(report.str());
    for (const auto& f : r.at("failures")) {
      std::cerr << "verify: FAIL " << f.at("name").get<std::string>();
      if (f.contains("kappa")) std::cerr << " kappa=" << f.at("kappa").get<std::size_t>();
      if (f.contains("value") && !f.at("value").is_null()) std::cerr << " value=" << f.at("value").get<double>();
      if (f.contains("tolerance")) std::cerr << " tolerance=" << f.at("tolerance").get<double>();
      if (f.contains("note")) std::cerr << " (" << f.at("note").get<std::string>() << ")";
      std::cerr << "\n";
    }
    return 1;
  }
  std::cerr << "verify: all checks passed at " << pi_string(p) << "\n";
  return 0;
}

// ---------------------------------------------------------------- sweep --

std::vector<double> log_values(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  check(wlqg_log_grid(lo, hi, count, v.data()));
  return v;
}

std::vector<wlqg_sweep_row> rows_of(const wlqg_sweep* s) {
  std::size_t count = 0;
  check(wlqg_sweep_rows(s, &count));
  std::vector<wlqg_sweep_row> rows(count);
  for (std::size_t i = 0; i < count; ++i) check(wlqg_sweep_row_at(s, i, &rows[i]));
  return rows;
}

double metric_of(const wlqg_report& r, const std::string& metric) {
  if (metric == "j_lqr") return r.j_lqr;
  if (metric == "j_kf") return r.j_kf;
  return r.j_lqg;
}

std::string curve_plot(const std::vector<wlqg_sweep_row>& rows) {
  svg::LinePlot plot;
  plot.title = "Costs along pi1 = 2/pi3 = 2/pi4";
  plot.x_label = "pi1";
  plot.y_label = "cost";
  svg::Series kf{"j_kf", {}}, lqr{"j_lqr", {}}, lqg{"j_lqg", {}};
  for (const auto& r : rows) {
    plot.x.push_back(r.params.pi1);
    kf.y.push_back(r.report.j_kf);
    lqr.y.push_back(r.report.j_lqr);
    lqg.y.push_back(r.report.j_lqg);
  }
  plot.series = {kf, lqr, lqg};
  return svg::render(plot);
}

int cmd_sweep(const RunConfig& cfg) {
  const auto& sw = cfg.sweep;
  if (sw.metric != "j_lqr" && sw.metric != "j_kf" && sw.metric != "j_lqg") {
    throw UsageError("--metric must be j_lqr, j_kf or j_lqg");
  }
  if (cfg.dimensional.any()) throw UsageError("sweep takes nondimensional parameters only");
  const double pi2 = cfg.nondim.pi2.value_or(1.0);
  const std::size_t n = cfg.n.value_or(30);
  const auto pi1_values = log_values(sw.pi1_min, sw.pi1_max, sw.pi1_count);

  std::vector<std::pair<std::string, std::string>> files;
  std::size_t row_count = 0;
  if (sw.curve_only) {
    SweepHandle curve;
    check(wlqg_curve_run(pi1_values.data(), pi1_values.size(), pi2, n, cfg.threads, &curve.p));
    CString csv;
    check(wlqg_sweep_curve_csv(curve.p, &csv.p));
    files.emplace_back(sw.out, csv.str());
    const auto rows = rows_of(curve.p);
    row_count = rows.size();
    if (!sw.curve_svg.empty()) files.emplace_back(sw.curve_svg, curve_plot(rows));
  } else {
    const auto pi34_values = log_values(sw.pi34_min, sw.pi34_max, sw.pi34_count);
    wlqg_sweep_grid grid{pi1_values.data(), pi1_values.size(), pi34_values.data(), pi34_values.size(),
                         pi2,               n,                 sw.tie_pi3_pi4 ? 1 : 0,
                         sw.pi3_fixed,      cfg.threads};
    SweepHandle s;
    check(wlqg_sweep_run(&grid, &s.p));
    CString csv;
    check(wlqg_sweep_csv(s.p, &csv.p));
    files.emplace_back(sw.out, csv.str());
    const auto rows = rows_of(s.p);
    row_count = rows.size();

    if (!sw.svg.empty()) {
      svg::Heatmap h;
      h.x = pi1_values;
      h.y = pi34_values;
      h.z.assign(pi34_values.size(), std::vector<double>(pi1_values.size(), 0.0));
      for (const auto& r : rows) h.z[r.pi34_index][r.pi1_index] = metric_of(r.report, sw.metric);
      const std::string axis = sw.tie_pi3_pi4 ? "pi3 = pi4" : "pi4";
      h.title = sw.metric + " over pi1 and " + axis + ", n = " + std::to_string(n);
      h.x_label = "pi1";
      h.y_label = axis;
      h.z_label = sw.metric;
      const auto fine = log_values(pi34_values.front(), pi34_values.back(), 200);
      for (double y : fine) h.overlay.emplace_back(2.0 / y, y);
      files.emplace_back(sw.svg, svg::render(h));
    }
    if (!sw.curve_svg.empty()) {
      SweepHandle curve;
      check(wlqg_curve_run(pi1_values.data(), pi1_values.size(), pi2, n, cfg.threads, &curve.p));
      files.emplace_back(sw.curve_svg, curve_plot(rows_of(curve.p)));
    }
  }
  write_files(files);
  std::cout << "sweep: " << row_count << " rows\n";
  for (const auto& [path, content] : files) std::cout << "wrote " << path << "\n";
  return 0;
}

// ------------------------------------------------------------- simulate --

int cmd_simulate(const RunConfig& cfg) {
  const wlqg_nondim p = resolve_params(cfg);
  if (uses_dimensional(cfg)) {
    const wlqg_dimensional d = dimensional_params(cfg);
    check(wlqg_check_matched_scaling(&d));
  }
  const auto& s = cfg.simulate;
  wlqg_sim_config c = wlqg_sim_config_default();
  c.params = p;
  c.dt = s.dt;
  c.t_final = s.t_final;
  c.seed = s.seed;
  c.burn_in = s.burn_in;
  c.n_realizations = s.realizations;
  c.noise_scale = s.zero_noise ? 0.0 : 1.0;
  c.record_stride = s.record_stride;
  if (!s.trajectory.empty() && c.record_stride == 0) c.record_stride = 10;
  c.threads = cfg.threads;

  SimHandle sim;
  const wlqg_status st = wlqg_simulate(&c, &sim.p);
  if (st == WLQG_INSTABILITY) {
    throw LibraryError(st, std::string(wlqg_last_error()) + "; reduce dt (at most " + fmt(wlqg_sim_max_dt(&p)) +
                               " is admissible for these parameters, smaller is more accurate)");
  }
  check(st);

  std::vector<std::pair<std::string, std::string>> files;
  CString summary;
  check(wlqg_sim_summary_json(sim.p, &summary.p));
  files.emplace_back(s.summary, summary.str() + "\n");
  if (!s.trajectory.empty()) {
    CString traj;
    check(wlqg_sim_trajectory_csv(sim.p, &traj.p));
    files.emplace_back(s.trajectory, traj.str());
  }

  wlqg_sim_summary m{};
  check(wlqg_sim_summary_get(sim.p, &m));
  const auto rel = [](double e, double a) { return a != 0.0 ? (e - a) / a : 0.0; };
  std::cout << pi_string(p) << " dt=" << fmt(c.dt) << " t_final=" << fmt(c.t_final) << " realizations="
            << c.n_realizations << " seed=" << c.seed << "\n";
  std::cout << std::left << std::setw(26) << "quantity" << std::right << std::setw(14) << "empirical"
            << std::setw(14) << "stderr" << std::setw(14) << "analytic" << std::setw(12) << "rel.err" << "\n";
  std::cout << std::left << std::setw(26) << "lqg cost" << std::right << std::setw(14) << fmt(m.empirical_lqg_cost)
            << std::setw(14) << fmt(m.empirical_lqg_cost_stderr) << std::setw(14) << fmt(m.analytic_lqg_cost)
            << std::setw(12) << fmt(rel(m.empirical_lqg_cost, m.analytic_lqg_cost)) << "\n";
  std::cout << std::left << std::setw(26) << "estimation error trace" << std::right << std::setw(14)
            << fmt(m.empirical_est_err_cov_trace) << std::setw(14) << fmt(m.empirical_est_err_cov_trace_stderr)
            << std::setw(14) << fmt(m.analytic_kf_cost) << std::setw(12)
            << fmt(rel(m.empirical_est_err_cov_trace, m.analytic_kf_cost)) << "\n";
  write_files(files);
  for (const auto& [path, content] : files) std::cout << "wrote " << path << "\n";
  return 0;
}

// --------------------------------------------------------------- report --

int cmd_report(const RunConfig& cfg) {
  const wlqg_nondim p = resolve_params(cfg);
  if (uses_dimensional(cfg)) {
    const wlqg_dimensional d = dimensional_params(cfg);
    check(wlqg_check_matched_scaling(&d));
  }
  wlqg_report r{};
  check(wlqg_report_compute(&p, &r));
  std::string text;
  switch (cfg.report.format) {
    case OutputFormat::Json: {
      CString j;
      check(wlqg_report_to_json(&r, &j.p));
      text = j.str() + "\n";
      break;
    }
    case OutputFormat::Csv: {
      // Same columns as one sweep row.
      wlqg_sweep_grid grid{&p.pi1, 1, &p.pi4, 1, p.pi2, p.n, 0, p.pi3, cfg.threads};
      SweepHandle s;
      check(wlqg_sweep_run(&grid, &s.p));
      CString csv;
      check(wlqg_sweep_csv(s.p, &csv.p));
      text = csv.str();
      break;
    }
    case OutputFormat::Svg:
      throw UsageError("report supports --format json or csv");
  }
  if (cfg.report.out.empty()) {
    std::cout << text;
  } else {
    write_files({{cfg.report.out, text}});
    std::cout << "wrote " << cfg.report.out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form LQR, Kalman filter and LQG synthesis for the wave equation on a ring"};
  app.set_version_flag("--version", wlqg_version());
  app.require_subcommand(1);
  Flags f;

  auto* synth = app.add_subcommand("synth", "write LQR/KF gain sets and print the decentralization verdict");
  add_param_options(synth, f);
  synth->add_option("--kind", f.kind, "lqr, kf or both");
  synth->add_option("--out-dir", f.out_dir, "directory for gains_lqr.json / gains_kf.json");

  auto* verify = app.add_subcommand("verify", "cross-check closed forms against the dense oracles");
  add_param_options(verify, f);
  verify->add_option("--check-file", f.check_file, "gain-set JSON to compare against fresh synthesis");
  verify->add_option("--out", f.out, "also write the JSON report here");

  auto* sweep = app.add_subcommand("sweep", "cost and locality over a (pi1, pi3 = pi4) grid");
  add_param_options(sweep, f);
  sweep->add_option("--pi1-min", f.pi1_min);
  sweep->add_option("--pi1-max", f.pi1_max);
  sweep->add_option("--pi1-count", f.pi1_count);
  sweep->add_option("--pi34-min", f.pi34_min);
  sweep->add_option("--pi34-max", f.pi34_max);
  sweep->add_option("--pi34-count", f.pi34_count);
  sweep->add_flag("--untied", f.untied, "sweep pi4 only and hold pi3 at --pi3-fixed");
  sweep->add_option("--pi3-fixed", f.pi3_fixed);
  sweep->add_flag("--curve-only", f.curve_only, "evaluate only along pi1 = 2/pi3 = 2/pi4");
  sweep->add_option("--metric", f.metric, "heatmap colour: j_lqr, j_kf or j_lqg");
  sweep->add_option("--out", f.out, "CSV output path");
  sweep->add_option("--svg", f.svg, "heatmap SVG output path");
  sweep->add_option("--curve-svg", f.curve_svg, "SVG line plot of costs along the decentralization curve");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo run of the closed-loop LQG system");
  add_param_options(simulate, f);
  simulate->add_option("--dt", f.dt);
  simulate->add_option("--t-final", f.t_final);
  simulate->add_option("--seed", f.seed);
  simulate->add_option("--burn-in", f.burn_in, "fraction of the horizon excluded from averages");
  simulate->add_option("--realizations", f.realizations);
  simulate->add_flag("--zero-noise", f.zero_noise, "switch off disturbance and measurement noise");
  simulate->add_option("--record-stride", f.record_stride, "trajectory sampling stride in steps");
  simulate->add_option("--summary", f.summary, "summary JSON output path");
  simulate->add_option("--trajectory", f.trajectory, "trajectory CSV output path (first realization)");

  auto* report = app.add_subcommand("report", "costs and locality metrics at one parameter point");
  add_param_options(report, f);
  report->add_option("--format", f.format, "json or csv");
  report->add_option("--out", f.out, "output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = build_config(command, f);
    if (command == "synth") return cmd_synth(cfg);
    if (command == "verify") return cmd_verify(cfg);
    if (command == "sweep") return cmd_sweep(cfg);
    if (command == "simulate") return cmd_simulate(cfg);
    return cmd_report(cfg);
  } catch (const UsageError& e) {
    std::cerr << "wavelqg " << command << ": " << e.what() << "\n";
    return 2;
  } catch (const LibraryError& e) {
    std::cerr << "wavelqg " << command << ": " << wlqg_status_string(e.status()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "wavelqg " << command << ": " << e.what() << "\n";
    return 1;
  }
}
