#pragma once

// Oracle-agreement suite: every closed-form quantity at one parameter point
// checked against the independent solvers in oracle.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/nondim.hpp"
#include "core/synthesis.hpp"

namespace wavelqg::verify {

struct Tolerances {
  double are_residual = 1e-9;        // per-frequency ARE residual, max-norm
  double block_agreement = 1e-8;     // closed form vs 2x2 oracles, relative
  double dense_agreement = 1e-7;     // full dense gains vs assembled circulants, relative
  double gain_file = 1e-8;           // supplied gain set vs fresh synthesis, relative
};

struct Options {
  Tolerances tol;
  std::size_t dense_max_n = 64;  // larger n is checked per frequency only
};

struct Check {
  std::string name;
  double value = 0.0;  // worst value over all frequencies
  double tolerance = 0.0;
  std::optional<std::size_t> kappa;  // frequency of the worst value
  bool passed = false;
  bool skipped = false;
  std::string note;
};

struct Report {
  NondimParams params;
  std::vector<Check> checks;
  bool passed = true;
};

Report run(const NondimParams& p, const Options& opts = {});
// Appends comparisons of a supplied gain set against fresh synthesis at the
// gain set's own parameters.
void check_gain_set(Report& report, const synthesis::GainSet& supplied, const Options& opts = {});

nlohmann::json to_json(const Report& r);

}  // namespace wavelqg::verify
