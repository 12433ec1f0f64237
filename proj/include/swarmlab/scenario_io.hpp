#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "swarmlab/sim.hpp"

namespace swarmlab {

// Scenario documents are JSON objects; unknown keys and ill-typed values throw
// SchemaError naming the offending field.  An "adjacency" given as a string is
// a sidecar matrix file resolved against `base_dir`.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

// Malformed JSON throws SchemaError with "line L, column C" in the field.
Scenario parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

// Every field is written explicitly and sidecar matrices are embedded, so
// parse_scenario(scenario_to_json(s)) == s.
nlohmann::json scenario_to_json(const Scenario& s);

}  // namespace swarmlab
