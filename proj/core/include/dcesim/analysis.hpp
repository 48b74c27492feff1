#pragma once

// Resonance analysis on top of the solver: the analytic sinh^2 law for an
// uncoupled resonance, the intermode coupling graph, exact-coupling masses,
// mass sweeps and cutoff convergence studies.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcesim/bogoliubov.hpp"
#include "dcesim/config.hpp"

namespace dcesim {

/// N_n(t) = sinh^2(n gamma_n epsilon t), gamma_n = n pi^2 / (2 Omega_n^0 l0^2).
/// Only meaningful when the resonant mode n is not coupled to other modes.
double sinh_prediction(int n, const SimulationConfig& cfg, double t);

/// Continuous l solving Omega_l^0 = target; NaN when target <= M / l0.
double mode_index_for_frequency(double target, const SimulationConfig& cfg);

enum class LinkClass { strong, weak, none };
std::string_view to_string(LinkClass c);

inline constexpr double default_strong_threshold = 4e-3;

/// One solution of omega = |Omega_l^0 +- Omega_k^0| starting from a reached mode k.
///
/// branch '+' is the sum branch Omega_l = omega - Omega_k, branch '-' the
/// difference branch Omega_l = Omega_k +- omega. l_tilde solves the link
/// condition with the integer source mode k. `detuning` is |l - l*| / l where
/// l* solves the phase-matching condition accumulated along the chain from the
/// resonant mode; for a first link it equals `link_detuning` = |l - l_tilde| / l.
struct CouplingEntry {
    int k = 0;
    char branch = '+';
    double l_tilde = 0.0;
    int l = 0;
    double detuning = 0.0;
    double link_detuning = 0.0;
    LinkClass cls = LinkClass::none;
};

struct CouplingGraph {
    int resonant_n = 1;
    double omega = 0.0;
    double strong_threshold = default_strong_threshold;
    std::vector<CouplingEntry> entries;  ///< ordered by (k, branch, l)

    /// Resonant mode plus every mode reached through strong links, ascending.
    std::vector<int> strong_modes() const;
    /// First entry with the given source and target, or nullptr.
    const CouplingEntry* find(int k, int l) const;
};

/// Builds the coupling graph of the resonant mode n. The wall frequency is
/// cfg.omega, or 2 Omega_n^0 when cfg.omega is 0. Strong links (detuning <=
/// threshold) are expanded transitively up to max_mode; weak links (detuning
/// <= 10 x threshold) and unclassified candidates are reported but not expanded.
CouplingGraph coupling_scan(const SimulationConfig& cfg, int resonant_n, int max_mode,
                            double strong_threshold = default_strong_threshold);

/// M = pi sqrt((k^2 - 9 n^2) / 8), the mass at which 3 Omega_n^0 = Omega_k^0.
/// Throws NoSolution when k <= 3n.
double exact_coupling_mass(int n, int k);

/// Nearest integer partner k of the resonant mode n under 3 Omega_n^0 = Omega_k^0.
struct CouplingPartner {
    int k = 0;
    double l_tilde = 0.0;
    bool exact = false;  ///< |k - l_tilde| / k below the exactness tolerance
};
CouplingPartner coupling_partner(int n, double mass, double tolerance = 1e-9);

/// Cutoff used for a resonance run at the given mass when none is forced:
/// 30 for M <= 0.2, where the chain 1 -> 3 -> 5 -> 7 ... is strongly coupled, else 20.
int default_cutoff(double mass);

/// start, start + step, ... up to stop (inclusive within rounding).
std::vector<double> mass_grid(double start, double stop, double step);

struct MassSweepPoint {
    double mass = 0.0;
    int cutoff = 0;
    double N_resonant = 0.0;  ///< NaN when the point failed
    double prediction = 0.0;
    CouplingPartner partner;
    double max_defect = 0.0;  ///< max |d_k(t_eval)| over k <= 5
    IntegrationStats stats;
    std::string error;  ///< empty on success

    bool ok() const { return error.empty(); }
};

struct MassSweepOptions {
    unsigned jobs = 0;
    bool auto_cutoff = true;   ///< use default_cutoff(M) instead of the template cutoff
    bool keep_going = false;   ///< record failures in-row instead of throwing
};

struct MassSweepResult {
    int resonant_n = 1;
    double t_eval = 0.0;
    std::vector<MassSweepPoint> points;  ///< grid order

    std::size_t succeeded() const;
    /// Index of the largest successful N_resonant; points.size() if none.
    std::size_t argmax() const;
};

/// Runs one resonance simulation per mass with omega = 2 Omega_n^0(M) and
/// t_max = t_eval. Points run in parallel; results keep grid order. Without
/// keep_going an IntegrationFailure is rethrown naming the offending M.
MassSweepResult mass_sweep(const SimulationConfig& tmpl, std::span<const double> masses,
                           int resonant_n, double t_eval, const MassSweepOptions& opts = {});

struct ConvergenceReport {
    std::vector<int> cutoffs;
    std::vector<int> modes;
    std::vector<std::vector<double>> N;  ///< N[i][j]: cutoff i, mode modes[j]
    /// Largest relative change over the monitored modes between cutoffs i and i + 1.
    std::vector<double> max_relative_change;
};

/// Reruns cfg at every cutoff in `cutoffs` (ascending) and compares N_n(t_eval).
ConvergenceReport convergence_check(const SimulationConfig& cfg, std::span<const int> cutoffs,
                                    std::span<const int> modes, double t_eval, unsigned jobs = 0);

/// |a - b| / |b|; 0 when both vanish, infinity when only b does.
double relative_change(double a, double b);

/// Least-squares slope of ln(values) against times over [t_from, t_to].
/// Non-positive values are skipped. Throws ConfigError with fewer than two points.
double log_slope(std::span<const double> times, std::span<const double> values, double t_from,
                 double t_to);

}  // namespace dcesim
