#pragma once

// Named validation scenarios for `dcesim validate`. Each preset reproduces one
// resonance configuration and checks the expected physics against the run.

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dcesim/config.hpp"

namespace dcesim::cli {

struct Check {
    std::string name;
    std::string measured;
    std::string expected;
    bool pass = false;
};

struct PresetOptions {
    unsigned jobs = 0;
    std::optional<double> err;
    std::optional<Stepper> stepper;
    std::ostream* progress = nullptr;  ///< one line per run started, if set
};

const std::vector<std::string_view>& preset_names();
/// One-line description for --help.
std::string_view preset_summary(std::string_view name);

/// Throws ConfigError for an unknown preset.
std::vector<Check> run_preset(std::string_view name, const PresetOptions& opts);

}  // namespace dcesim::cli
