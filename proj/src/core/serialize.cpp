#include "core/serialize.hpp"

#include <array>

#include "core/error.hpp"

namespace wavelqg::io {
namespace {

constexpr std::array<const char*, 5> kNondimFields{"pi1", "pi2", "pi3", "pi4", "n"};
constexpr std::array<const char*, 9> kDimensionalFields{"c",       "dx",      "n",    "q1",   "q2",
                                                        "r",       "sigma_m", "sigma_d", "alpha"};

double number(const json& j, const char* field) {
  if (!j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
  const auto& v = j.at(field);
  if (!v.is_number()) throw ParseError(std::string("field '") + field + "' must be a number");
  return v.get<double>();
}

std::size_t count(const json& j, const char* field) {
  if (!j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
  const auto& v = j.at(field);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ParseError(std::string("field '") + field + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> numbers(const json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_array()) {
    throw ParseError(std::string("field '") + field + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : j.at(field)) {
    if (!v.is_number()) throw ParseError(std::string("field '") + field + "' must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

bool has_any(const json& j, std::initializer_list<const char*> fields) {
  for (const char* f : fields)
    if (j.contains(f)) return true;
  return false;
}

}  // namespace

json to_json(const NondimParams& p) {
  return json{{"pi1", p.pi1}, {"pi2", p.pi2}, {"pi3", p.pi3}, {"pi4", p.pi4}, {"n", p.n}};
}

json to_json(const DimensionalParams& p) {
  return json{{"c", p.c},   {"dx", p.dx},           {"n", p.n},
              {"q1", p.q1}, {"q2", p.q2},           {"r", p.r},
              {"sigma_m", p.sigma_m}, {"sigma_d", p.sigma_d}, {"alpha", p.alpha}};
}

json to_json(const synthesis::GainSet& g) {
  return json{{"kind", synthesis::to_string(g.kind)},
              {"n", g.block1.size()},
              {"pi", json{{"pi1", g.params.pi1}, {"pi2", g.params.pi2}, {"pi3", g.params.pi3}, {"pi4", g.params.pi4}}},
              {"block1_first_row", g.block1.first_row()},
              {"block2_first_row", g.block2.first_row()},
              {"spectral", json{{"k0", g.spectral.base}, {"companion", g.spectral.companion}}}};
}

json to_json(const analysis::CostLocalityReport& r) {
  return json{{"j_lqr", r.j_lqr},
              {"j_kf", r.j_kf},
              {"j_lqg", r.j_lqg},
              {"offdiag_k1", r.offdiag_k1},
              {"offdiag_k2", r.offdiag_k2},
              {"offdiag_l1", r.offdiag_l1},
              {"offdiag_l2", r.offdiag_l2},
              {"residual_lqr_decentral", r.residual_lqr_decentral},
              {"residual_kf_decentral", r.residual_kf_decentral}};
}

json to_json(const simulator::SimSummary& s) {
  const auto rel = [](double emp, double ana) { return ana != 0.0 ? (emp - ana) / ana : 0.0; };
  return json{{"empirical_lqg_cost", s.empirical_lqg_cost},
              {"empirical_lqg_cost_stderr", s.empirical_lqg_cost_stderr},
              {"analytic_lqg_cost", s.analytic_lqg_cost},
              {"lqg_cost_rel_error", rel(s.empirical_lqg_cost, s.analytic_lqg_cost)},
              {"empirical_est_err_cov_trace", s.empirical_est_err_cov_trace},
              {"empirical_est_err_cov_trace_stderr", s.empirical_est_err_cov_trace_stderr},
              {"analytic_kf_cost", s.analytic_kf_cost},
              {"kf_cost_rel_error", rel(s.empirical_est_err_cov_trace, s.analytic_kf_cost)},
              {"mean_estimation_error", s.mean_estimation_error},
              {"mean_estimation_error_stderr", s.mean_estimation_error_stderr},
              {"realization_costs", s.realization_costs},
              {"realization_err_traces", s.realization_err_traces},
              {"seed", s.seed},
              {"dt", s.dt},
              {"t_final", s.t_final},
              {"burn_in", s.burn_in},
              {"n_realizations", s.n_realizations},
              {"steps", s.steps},
              {"generator", s.generator}};
}

NondimParams nondim_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("parameters must be a JSON object");
  NondimParams p;
  p.pi1 = number(j, "pi1");
  p.pi2 = number(j, "pi2");
  p.pi3 = number(j, "pi3");
  p.pi4 = number(j, "pi4");
  p.n = count(j, "n");
  return p;
}

DimensionalParams dimensional_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("parameters must be a JSON object");
  DimensionalParams p;
  p.c = number(j, "c");
  p.dx = number(j, "dx");
  p.n = count(j, "n");
  p.q1 = number(j, "q1");
  p.q2 = number(j, "q2");
  p.r = number(j, "r");
  p.sigma_m = number(j, "sigma_m");
  p.sigma_d = number(j, "sigma_d");
  p.alpha = number(j, "alpha");
  return p;
}

NondimParams params_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("parameters must be a JSON object");
  const bool nondim = has_any(j, {"pi1", "pi2", "pi3", "pi4"});
  const bool dimensional = has_any(j, {"c", "dx", "q1", "q2", "r", "sigma_m", "sigma_d", "alpha"});
  if (nondim == dimensional) {
    throw ParseError("exactly one of the nondimensional (pi1..pi4) or dimensional (c, dx, ...) parameter sets is required");
  }
  if (nondim) {
    auto p = nondim_from_json(j);
    validate(p);
    return p;
  }
  return nondimensionalize(dimensional_from_json(j));
}

synthesis::GainSet gain_set_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("gain set must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ParseError("gain set needs a string 'kind'");
  const auto kind_str = j.at("kind").get<std::string>();
  synthesis::GainKind kind;
  if (kind_str == "lqr") {
    kind = synthesis::GainKind::Lqr;
  } else if (kind_str == "kf") {
    kind = synthesis::GainKind::Kf;
  } else {
    throw ParseError("gain set kind must be 'lqr' or 'kf', got '" + kind_str + "'");
  }
  if (!j.contains("pi") || !j.at("pi").is_object()) throw ParseError("gain set needs a 'pi' object");
  NondimParams p;
  const auto& pi = j.at("pi");
  p.pi1 = number(pi, "pi1");
  p.pi2 = number(pi, "pi2");
  p.pi3 = number(pi, "pi3");
  p.pi4 = number(pi, "pi4");
  p.n = count(j, "n");
  validate(p);
  auto row1 = numbers(j, "block1_first_row");
  auto row2 = numbers(j, "block2_first_row");
  if (!j.contains("spectral") || !j.at("spectral").is_object()) throw ParseError("gain set needs 'spectral'");
  synthesis::SpectralGain sg;
  sg.kind = kind;
  sg.params = p;
  sg.base = numbers(j.at("spectral"), "k0");
  sg.companion = numbers(j.at("spectral"), "companion");
  if (row1.size() != p.n || row2.size() != p.n || sg.base.size() != p.n || sg.companion.size() != p.n) {
    throw ParseError("gain set arrays must all have length n");
  }
  return synthesis::GainSet{spectral::Circulant(std::move(row1)), spectral::Circulant(std::move(row2)), kind, p,
                            std::move(sg)};
}

analysis::CostLocalityReport report_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("report must be a JSON object");
  analysis::CostLocalityReport r;
  r.j_lqr = number(j, "j_lqr");
  r.j_kf = number(j, "j_kf");
  r.j_lqg = number(j, "j_lqg");
  r.offdiag_k1 = number(j, "offdiag_k1");
  r.offdiag_k2 = number(j, "offdiag_k2");
  r.offdiag_l1 = number(j, "offdiag_l1");
  r.offdiag_l2 = number(j, "offdiag_l2");
  r.residual_lqr_decentral = number(j, "residual_lqr_decentral");
  r.residual_kf_decentral = number(j, "residual_kf_decentral");
  return r;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace wavelqg::io
