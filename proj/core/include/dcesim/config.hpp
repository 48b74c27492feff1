#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dcesim {

/// Embedded Runge-Kutta pair used by the evolution module.
enum class Stepper {
    rkf45,  ///< Runge-Kutta-Fehlberg 4(5)
    rk8pd,  ///< Prince-Dormand 8(7)
};

std::string_view to_string(Stepper s);
Stepper stepper_from_string(std::string_view name);

/// Physical and numerical parameters of one run.
///
/// All quantities are dimensionless: lengths in units of the initial cavity
/// length l0 (fixed to 1), times in units of l0, frequencies in units of 1/l0.
struct SimulationConfig {
    double l0 = 1.0;
    double epsilon = 0.001;     ///< relative wall oscillation amplitude
    double omega = 0.0;         ///< wall angular frequency
    double mass = 0.0;          ///< M = l0 * k_par
    int cutoff = 20;            ///< K, highest retained mode index
    double err = 1e-10;         ///< shared relative and absolute tolerance
    double t_max = 100.0;
    double sample_dt = 1.0;
    Stepper stepper = Stepper::rk8pd;

    /// Throws ConfigError on a hard violation. Returns soft warnings
    /// (currently: epsilon above 0.01).
    std::vector<std::string> validate() const;

    /// Number of samples on the grid t_j = j * sample_dt, 0 <= t_j <= t_max.
    std::size_t sample_count() const;
    double sample_time(std::size_t j) const { return static_cast<double>(j) * sample_dt; }
};

/// Transverse geometry of a rectangular 3-D cavity whose x-wall vibrates.
struct Cavity3DSpec {
    double ly = 1.0;
    double lz = 1.0;
    int ny = 1;
    int nz = 1;

    void validate() const;
};

}  // namespace dcesim
