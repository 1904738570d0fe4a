#pragma once

// JSON schemas for parameters, gains, reports and simulation summaries.

#include <string>

#include <json.hpp>

#include "core/analysis.hpp"
#include "core/nondim.hpp"
#include "core/simulator.hpp"
#include "core/synthesis.hpp"

namespace wavelqg::io {

using nlohmann::json;

json to_json(const NondimParams& p);
json to_json(const DimensionalParams& p);
json to_json(const synthesis::GainSet& g);
json to_json(const analysis::CostLocalityReport& r);
json to_json(const simulator::SimSummary& s);

NondimParams nondim_from_json(const json& j);
DimensionalParams dimensional_from_json(const json& j);
// Accepts either schema; dimensional input goes through nondimensionalize.
// Exactly one of the two schemas' fields may be present.
NondimParams params_from_json(const json& j);
synthesis::GainSet gain_set_from_json(const json& j);
analysis::CostLocalityReport report_from_json(const json& j);

// Wraps nlohmann parse errors into ParseError.
json parse(const std::string& text);

}  // namespace wavelqg::io
