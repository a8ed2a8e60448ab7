#pragma once

#include <string>

#include "json.hpp"

#include "wwbloch/bloch_spectrum.hpp"
#include "wwbloch/perturbation.hpp"

namespace wwbloch::cli {

// Shared numerical setup deserialized from the config file. Unknown keys
// anywhere in the document are a ConfigError; nothing is written to disk
// until the whole config has validated.
struct RunSetup {
    BathymetryProfile profile;
    std::string preset;  // empty when beta was given explicitly
    int N = 16;
    int order = 4;
    int theta_points = 257;
    int bands = 8;
};

RunSetup parse_setup(const nlohmann::json& cfg);

// Subcommand drivers. 'out_prefix' names the output files
// (<prefix>_bands.csv, <prefix>_gaps.json, ...). All throw on failure.
void run_band_structure(const nlohmann::json& cfg, const std::string& out_prefix,
                        int threads);
void run_gap_scan(const nlohmann::json& cfg, const std::string& out_prefix,
                  int threads);
void run_gap_scaling(const nlohmann::json& cfg, const std::string& out_prefix,
                     int threads);
void run_validate_oracle(const nlohmann::json& cfg, const std::string& out_prefix,
                         int threads);
void run_evolve(const nlohmann::json& cfg, const std::string& out_prefix,
                int threads);

// Dispatch by subcommand name; loads and parses the config file itself.
void run_command(const std::string& command, const std::string& config_path,
                 const std::string& out_prefix, int threads);

} // namespace wwbloch::cli
