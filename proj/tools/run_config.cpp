#include "run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace wavelqg::cli {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw UsageError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) throw UsageError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError("key '" + std::string(key) + "' in " + where + " has the wrong type");
  }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out, const std::string& where) {
  if (!j.contains(key)) return;
  T v{};
  read(j, key, v, where);
  out = v;
}

template <class T>
void write(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

void check(wlqg_status status) {
  if (status != WLQG_OK) throw LibraryError(status, wlqg_last_error());
}

const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Svg: return "svg";
  }
  return "json";
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  if (s == "svg") return OutputFormat::Svg;
  throw UsageError("unknown output format '" + s + "' (expected csv, json or svg)");
}

json to_json(const RunConfig& cfg) {
  json params = json::object();
  write(params, "pi1", cfg.nondim.pi1);
  write(params, "pi2", cfg.nondim.pi2);
  write(params, "pi3", cfg.nondim.pi3);
  write(params, "pi4", cfg.nondim.pi4);
  write(params, "c", cfg.dimensional.c);
  write(params, "dx", cfg.dimensional.dx);
  write(params, "q1", cfg.dimensional.q1);
  write(params, "q2", cfg.dimensional.q2);
  write(params, "r", cfg.dimensional.r);
  write(params, "sigma_m", cfg.dimensional.sigma_m);
  write(params, "sigma_d", cfg.dimensional.sigma_d);
  write(params, "alpha", cfg.dimensional.alpha);
  write(params, "n", cfg.n);

  const auto& sw = cfg.sweep;
  const auto& sim = cfg.simulate;
  return json{{"command", cfg.command},
              {"params", params},
              {"threads", cfg.threads},
              {"synth", {{"kind", cfg.synth.kind}, {"out_dir", cfg.synth.out_dir}}},
              {"verify", {{"check_file", cfg.verify.check_file}, {"out", cfg.verify.out}}},
              {"sweep",
               {{"pi1_min", sw.pi1_min},
                {"pi1_max", sw.pi1_max},
                {"pi1_count", sw.pi1_count},
                {"pi34_min", sw.pi34_min},
                {"pi34_max", sw.pi34_max},
                {"pi34_count", sw.pi34_count},
                {"tie_pi3_pi4", sw.tie_pi3_pi4},
                {"pi3_fixed", sw.pi3_fixed},
                {"curve_only", sw.curve_only},
                {"metric", sw.metric},
                {"out", sw.out},
                {"svg", sw.svg},
                {"curve_svg", sw.curve_svg}}},
              {"simulate",
               {{"dt", sim.dt},
                {"t_final", sim.t_final},
                {"seed", sim.seed},
                {"burn_in", sim.burn_in},
                {"realizations", sim.realizations},
                {"zero_noise", sim.zero_noise},
                {"record_stride", sim.record_stride},
                {"summary", sim.summary},
                {"trajectory", sim.trajectory}}},
              {"report", {{"format", to_string(cfg.report.format)}, {"out", cfg.report.out}}}};
}

RunConfig run_config_from_json(const json& j) {
  reject_unknown(j, {"command", "params", "threads", "synth", "verify", "sweep", "simulate", "report"}, "config");
  RunConfig cfg;
  read(j, "command", cfg.command, "config");
  read(j, "threads", cfg.threads, "config");
  if (j.contains("params")) {
    const auto& p = j.at("params");
    reject_unknown(p, {"pi1", "pi2", "pi3", "pi4", "n", "c", "dx", "q1", "q2", "r", "sigma_m", "sigma_d", "alpha"},
                   "params");
    read(p, "pi1", cfg.nondim.pi1, "params");
    read(p, "pi2", cfg.nondim.pi2, "params");
    read(p, "pi3", cfg.nondim.pi3, "params");
    read(p, "pi4", cfg.nondim.pi4, "params");
    read(p, "n", cfg.n, "params");
    read(p, "c", cfg.dimensional.c, "params");
    read(p, "dx", cfg.dimensional.dx, "params");
    read(p, "q1", cfg.dimensional.q1, "params");
    read(p, "q2", cfg.dimensional.q2, "params");
    read(p, "r", cfg.dimensional.r, "params");
    read(p, "sigma_m", cfg.dimensional.sigma_m, "params");
    read(p, "sigma_d", cfg.dimensional.sigma_d, "params");
    read(p, "alpha", cfg.dimensional.alpha, "params");
  }
  if (j.contains("synth")) {
    const auto& s = j.at("synth");
    reject_unknown(s, {"kind", "out_dir"}, "synth");
    read(s, "kind", cfg.synth.kind, "synth");
    read(s, "out_dir", cfg.synth.out_dir, "synth");
  }
  if (j.contains("verify")) {
    const auto& s = j.at("verify");
    reject_unknown(s, {"check_file", "out"}, "verify");
    read(s, "check_file", cfg.verify.check_file, "verify");
    read(s, "out", cfg.verify.out, "verify");
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    auto& sw = cfg.sweep;
    reject_unknown(s,
                   {"pi1_min", "pi1_max", "pi1_count", "pi34_min", "pi34_max", "pi34_count", "tie_pi3_pi4",
                    "pi3_fixed", "curve_only", "metric", "out", "svg", "curve_svg"},
                   "sweep");
    read(s, "pi1_min", sw.pi1_min, "sweep");
    read(s, "pi1_max", sw.pi1_max, "sweep");
    read(s, "pi1_count", sw.pi1_count, "sweep");
    read(s, "pi34_min", sw.pi34_min, "sweep");
    read(s, "pi34_max", sw.pi34_max, "sweep");
    read(s, "pi34_count", sw.pi34_count, "sweep");
    read(s, "tie_pi3_pi4", sw.tie_pi3_pi4, "sweep");
    read(s, "pi3_fixed", sw.pi3_fixed, "sweep");
    read(s, "curve_only", sw.curve_only, "sweep");
    read(s, "metric", sw.metric, "sweep");
    read(s, "out", sw.out, "sweep");
    read(s, "svg", sw.svg, "sweep");
    read(s, "curve_svg", sw.curve_svg, "sweep");
  }
  if (j.contains("simulate")) {
    const auto& s = j.at("simulate");
    auto& sim = cfg.simulate;
    reject_unknown(s,
                   {"dt", "t_final", "seed", "burn_in", "realizations", "zero_noise", "record_stride", "summary",
                    "trajectory"},
                   "simulate");
    read(s, "dt", sim.dt, "simulate");
    read(s, "t_final", sim.t_final, "simulate");
    read(s, "seed", sim.seed, "simulate");
    read(s, "burn_in", sim.burn_in, "simulate");
    read(s, "realizations", sim.realizations, "simulate");
    read(s, "zero_noise", sim.zero_noise, "simulate");
    read(s, "record_stride", sim.record_stride, "simulate");
    read(s, "summary", sim.summary, "simulate");
    read(s, "trajectory", sim.trajectory, "simulate");
  }
  if (j.contains("report")) {
    const auto& s = j.at("report");
    reject_unknown(s, {"format", "out"}, "report");
    std::string format = to_string(cfg.report.format);
    read(s, "format", format, "report");
    cfg.report.format = output_format_from_string(format);
    read(s, "out", cfg.report.out, "report");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return run_config_from_json(j);
}

bool uses_dimensional(const RunConfig& cfg) { return cfg.dimensional.any(); }

wlqg_dimensional dimensional_params(const RunConfig& cfg) {
  const auto& d = cfg.dimensional;
  return wlqg_dimensional{d.c.value_or(1.0),       d.dx.value_or(1.0),      cfg.n.value_or(30),
                          d.q1.value_or(1.0),      d.q2.value_or(1.0),      d.r.value_or(1.0),
                          d.sigma_m.value_or(1.0), d.sigma_d.value_or(1.0), d.alpha.value_or(0.0)};
}

wlqg_nondim resolve_params(const RunConfig& cfg) {
  if (cfg.nondim.any() && cfg.dimensional.any()) {
    throw UsageError("give either nondimensional (pi1..pi4) or dimensional (c, dx, q1, ...) parameters, not both");
  }
  if (cfg.dimensional.any()) {
    const wlqg_dimensional in = dimensional_params(cfg);
    wlqg_nondim out{};
    check(wlqg_nondimensionalize(&in, &out));
    return out;
  }
  wlqg_nondim p = wlqg_nondim_default();
  const auto& nd = cfg.nondim;
  p.pi1 = nd.pi1.value_or(p.pi1);
  p.pi2 = nd.pi2.value_or(p.pi2);
  p.pi3 = nd.pi3.value_or(p.pi3);
  p.pi4 = nd.pi4.value_or(p.pi4);
  p.n = cfg.n.value_or(p.n);
  check(wlqg_nondim_validate(&p));
  return p;
}

}  // namespace wavelqg::cli
