#include "dcesim/config.hpp"

#include <cmath>

#include "dcesim/errors.hpp"

namespace dcesim {

std::string_view to_string(Stepper s) {
    switch (s) {
        case Stepper::rkf45: return "rkf45";
        case Stepper::rk8pd: return "rk8pd";
    }
    return "unknown";
}

Stepper stepper_from_string(std::string_view name) {
    if (name == "rkf45") return Stepper::rkf45;
    if (name == "rk8pd") return Stepper::rk8pd;
    throw ConfigError("unknown integrator '" + std::string(name) + "' (expected rkf45 or rk8pd)");
}

std::vector<std::string> SimulationConfig::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(l0) || std::abs(l0 - 1.0) > 1e-12)
        throw ConfigError("l0 must be 1 (all lengths are measured in units of l0)");
    if (!finite(epsilon) || epsilon < 0.0 || epsilon >= 0.1)
        throw ConfigError("epsilon must lie in [0, 0.1)");
    if (!finite(omega) || omega < 0.0) throw ConfigError("omega must be finite and >= 0");
    if (!finite(mass) || mass < 0.0) throw ConfigError("mass must be finite and >= 0");
    if (cutoff < 1) throw ConfigError("cutoff K must be >= 1");
    if (!finite(err) || err <= 0.0) throw ConfigError("err must be > 0");
    if (!finite(t_max) || t_max <= 0.0) throw ConfigError("t_max must be > 0");
    if (!finite(sample_dt) || sample_dt <= 0.0) throw ConfigError("sample_dt must be > 0");

    std::vector<std::string> warnings;
    if (epsilon > 0.01)
        warnings.emplace_back("epsilon > 0.01: the small-amplitude regime is no longer guaranteed");
    return warnings;
}

std::size_t SimulationConfig::sample_count() const {
    // Tolerate t_max landing a rounding error short of a grid point.
    return static_cast<std::size_t>(std::floor(t_max / sample_dt * (1.0 + 1e-12) + 1e-9)) + 1;
}

void Cavity3DSpec::validate() const {
    if (!(ly > 0.0) || !(lz > 0.0) || !std::isfinite(ly) || !std::isfinite(lz))
        throw ConfigError("cavity lengths ly, lz must be > 0");
    if (ny < 1 || nz < 1) throw ConfigError("transverse quantum numbers ny, nz must be >= 1");
}

}  // namespace dcesim
