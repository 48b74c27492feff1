#pragma once

// Bogoliubov coefficients, created-particle spectra and the normalisation
// diagnostics d_k(t), all extracted from evolution states at a snapshot time
// t1 with instantaneous frequency matching Omega_n^1 = Omega_n(t1).

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "dcesim/evolution.hpp"
#include "dcesim/model.hpp"

namespace dcesim {

/// Delta_n^+-(t) = (1 +- Omega_n^0 / Omega_n(t)) / 2.
PlusMinus delta_pm(int n, double t, const SimulationConfig& cfg);

/// A(m - 1, n - 1) = A_mn(t1): row = initial mode m, column = final mode n.
struct BogoliubovMatrices {
    double t1 = 0.0;
    Eigen::MatrixXcd A;
    Eigen::MatrixXcd B;
};

/// A_mn = 1/2 sqrt(Omega_n^1/Omega_m^0) [Delta_n^+ xi_n^(m) + Delta_n^- eta_n^(m)],
/// B_mn = 1/2 sqrt(Omega_n^1/Omega_m^0) [Delta_n^- xi_n^(m) + Delta_n^+ eta_n^(m)].
/// `states` holds one state per column m = 1..K, all at the same time.
/// Throws ShapeMismatch.
BogoliubovMatrices bogoliubov_from_state(std::span<const EvolutionState> states,
                                         const SimulationConfig& cfg);

/// N_n(t1) = sum_m |B_mn|^2 evaluated directly on (u, x, v, y).
std::vector<double> particle_numbers(std::span<const EvolutionState> states,
                                     const SimulationConfig& cfg, double t1);

/// The unweighted period-aligned shortcut 1/4 sum_m (x_n^2 + y_n^2). It
/// agrees with particle_numbers at t1 = N T only up to the Omega_n^0/Omega_m^0
/// weight; reported separately as a diagnostic.
std::vector<double> particle_numbers_period_reduced(std::span<const EvolutionState> states);

struct BogoliubovResiduals {
    std::vector<double> d;         ///< d_k = 1 - sum_m (|A_mk|^2 - |B_mk|^2), index k - 1
    double max_offdiagonal = 0.0;  ///< max over n != k of both off-diagonal relations
};

BogoliubovResiduals bogoliubov_residuals(const BogoliubovMatrices& bog);

/// Per-snapshot factors shared by every column at time t1.
struct SnapshotFactors {
    std::vector<double> omega1;  ///< Omega_n(t1)
    std::vector<double> delta_plus;
    std::vector<double> delta_minus;

    SnapshotFactors(const ModeModel& model, double t1);
};

/// Contribution of a single column m to N_n (|B_mn|^2) and to the norm sum
/// (|A_mn|^2 - |B_mn|^2), for every n.
void accumulate_column(const ModeModel& model, const SnapshotFactors& factors,
                       const EvolutionState& state, std::span<double> created,
                       std::span<double> norm);

struct ParticleSpectrum {
    std::vector<double> times;
    std::vector<std::vector<double>> N;  ///< N[j][n - 1]
    std::vector<double> N_total;
};

/// Spectrum, diagnostics and bookkeeping of one full run.
struct SpectrumRun {
    SimulationConfig config;
    ParticleSpectrum spectrum;
    std::vector<std::vector<double>> defect;  ///< d_k(t_j), defect[j][k - 1]
    std::vector<std::uint8_t> period_aligned;  ///< t_j an integer multiple of 2 pi / omega
    /// particle_numbers_period_reduced at every sample, N_period_reduced[j][n - 1].
    std::vector<std::vector<double>> N_period_reduced;
    IntegrationStats stats;

    /// max |d_k(t)| over all samples for k in [first, last] (1-based, clamped to K).
    double max_defect(int first, int last) const;
};

/// Evolve every column and reduce to particle numbers and d_k on the sample
/// grid. Columns run on up to `jobs` threads; the reduction is summed in
/// column order so the result does not depend on scheduling.
SpectrumRun compute_spectrum(const SimulationConfig& cfg, unsigned jobs = 0);

/// True when t is within rounding of an integer multiple of the period.
bool is_period_aligned(double t, double period);

}  // namespace dcesim
