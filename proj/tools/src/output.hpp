#pragma once

// CSV serialisation and the JSON run manifest written next to every data file.

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dcesim/analysis.hpp"
#include "dcesim/bogoliubov.hpp"
#include "dcesim/config.hpp"

namespace dcesim::cli {

/// 17 significant digits, "NaN" for not-a-number.
std::string format_double(double v);

void write_spectrum_csv(std::ostream& os, const SpectrumRun& run);
void write_sweep_csv(std::ostream& os, const MassSweepResult& sweep);
void write_couplings_csv(std::ostream& os, const CouplingGraph& graph);
/// Human-readable aligned table of the same rows.
void write_couplings_table(std::ostream& os, const CouplingGraph& graph);

/// `run.csv` -> `run.manifest.json`.
std::filesystem::path manifest_path(const std::filesystem::path& data_file);

struct ResidualSummary {
    double max_leading = 0.0;   ///< max |d_k| over k <= 5 and all samples
    double max_trailing = 0.0;  ///< max |d_k| over the last five modes and all samples
};
ResidualSummary residual_summary(const SpectrumRun& run);

nlohmann::json config_json(const SimulationConfig& cfg);
nlohmann::json cavity_json(const Cavity3DSpec& spec);
nlohmann::json stats_json(const IntegrationStats& stats);

/// Common manifest skeleton: tool, version, command, config echo, integrator.
nlohmann::json base_manifest(const std::string& command, const SimulationConfig& cfg,
                             const std::optional<Cavity3DSpec>& cavity);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
void write_manifest(const std::filesystem::path& data_file, const nlohmann::json& manifest);

}  // namespace dcesim::cli
