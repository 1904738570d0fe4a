#pragma once

// Command configuration shared by every subcommand. A config is built from an
// optional JSON file and then overlaid with command-line flags.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "wavelqg/wavelqg.h"

namespace wavelqg::cli {

enum class OutputFormat { Csv, Json, Svg };

const char* to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& s);

// Parameter groups as supplied, before defaults are filled in. A field left
// empty takes its library default.
struct NondimInput {
  std::optional<double> pi1, pi2, pi3, pi4;
  bool any() const { return pi1 || pi2 || pi3 || pi4; }
};

struct DimensionalInput {
  std::optional<double> c, dx, q1, q2, r, sigma_m, sigma_d, alpha;
  bool any() const { return c || dx || q1 || q2 || r || sigma_m || sigma_d || alpha; }
};

struct SynthSettings {
  std::string kind = "both";  // lqr, kf or both
  std::string out_dir = ".";
};

struct VerifySettings {
  std::string check_file;  // empty: no gain file comparison
  std::string out;         // empty: report on standard output only
};

struct SweepSettings {
  double pi1_min = 0.1, pi1_max = 10.0;
  std::size_t pi1_count = 50;
  double pi34_min = 0.1, pi34_max = 10.0;
  std::size_t pi34_count = 50;
  bool tie_pi3_pi4 = true;
  double pi3_fixed = 1.0;
  bool curve_only = false;
  std::string metric = "j_kf";  // heatmap colour: j_lqr, j_kf or j_lqg
  std::string out = "sweep.csv";
  std::string svg;        // heatmap, empty: none
  std::string curve_svg;  // line plot along the decentralization curve, empty: none
};

struct SimulateSettings {
  double dt = 0.01;
  double t_final = 2000.0;
  std::uint64_t seed = 1;
  double burn_in = 0.2;
  std::size_t realizations = 20;
  bool zero_noise = false;
  std::size_t record_stride = 0;
  std::string summary = "simulation.json";
  std::string trajectory;  // empty: none
};

struct ReportSettings {
  OutputFormat format = OutputFormat::Json;
  std::string out;  // empty: standard output
};

struct RunConfig {
  std::string command;
  NondimInput nondim;
  DimensionalInput dimensional;
  std::optional<std::size_t> n;  // shared by both parameter groups
  unsigned threads = 0;
  SynthSettings synth;
  VerifySettings verify;
  SweepSettings sweep;
  SimulateSettings simulate;
  ReportSettings report;
};

// Raised for malformed or contradictory configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when the library rejects a value; maps to exit code 1.
class LibraryError : public std::runtime_error {
 public:
  LibraryError(wlqg_status status, const std::string& what) : std::runtime_error(what), status_(status) {}
  wlqg_status status() const noexcept { return status_; }

 private:
  wlqg_status status_;
};

void check(wlqg_status status);

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// Resolves the parameter source. Throws UsageError when both groups are
// present and LibraryError when the library rejects the values.
wlqg_nondim resolve_params(const RunConfig& cfg);
bool uses_dimensional(const RunConfig& cfg);
// Dimensional group with library defaults filled in.
wlqg_dimensional dimensional_params(const RunConfig& cfg);

}  // namespace wavelqg::cli
