#pragma once

// Truncated first-order system X' = W(t) X for the auxiliary functions
// xi = u + i v and eta = x + i y of one initial-excitation column m, and its
// integration over all K columns.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "dcesim/config.hpp"
#include "dcesim/integrator.hpp"
#include "dcesim/model.hpp"

namespace dcesim {

/// State of column m at time t. Arrays are indexed by mode n - 1 and laid
/// out in the order (u, x, v, y) when flattened.
struct EvolutionState {
    int m = 1;
    double t = 0.0;
    std::vector<double> u, x, v, y;

    /// xi_n = 2 delta_nm, eta_n = 0.
    static EvolutionState initial(int m, int cutoff);
    /// Rebuild from a flattened 4K vector (u, x, v, y).
    static EvolutionState from_flat(int m, double t, std::span<const double> flat);

    int cutoff() const { return static_cast<int>(u.size()); }
    std::vector<double> flat() const;

    std::complex<double> xi(int n) const { return {u[idx(n)], v[idx(n)]}; }
    std::complex<double> eta(int n) const { return {x[idx(n)], y[idx(n)]}; }
    /// Mode function epsilon_n^(m) = (xi_n + eta_n) / 2.
    std::complex<double> mode_function(int n) const { return 0.5 * (xi(n) + eta(n)); }

private:
    static std::size_t idx(int n) { return static_cast<std::size_t>(n - 1); }
};

/// Every column sampled on the grid t_j = j * sample_dt.
struct EvolutionRecord {
    std::vector<double> times;
    std::vector<std::vector<EvolutionState>> states;  ///< states[j][m - 1]
};

/// Dense 4K x 4K matrix W(t) with the block layout
///   W = -[[C-, C+, -A+, A-], [C+, C-, -A-, A+], [A+, -A-, C-, C+], [A-, -A+, C+, C-]].
Eigen::MatrixXd assemble_w(double t, const SimulationConfig& cfg);

/// dX = W(t) X without forming W; O(K^2) per call.
void apply_w(const ModeModel& model, double t, std::span<const double> state,
             std::span<double> derivative);
std::vector<double> apply_w(double t, const EvolutionState& state, const SimulationConfig& cfg);

/// Called once per sample point with the column state at that time.
using ColumnObserver = std::function<void(const EvolutionState& state, std::size_t sample)>;

/// Integrate column m from 0 to t_max, reporting every sample point
/// (including t = 0). Throws IntegrationFailure.
IntegrationStats evolve_column(const ModeModel& model, int m, const ColumnObserver& observe);

/// Run all K columns, in parallel when jobs != 1 (0 selects the default job
/// count). Stores every sample; intended for modest K * samples.
EvolutionRecord evolve(const SimulationConfig& cfg, unsigned jobs = 0);

/// Mode functions epsilon_n^(m)(t) from a direct integration of the
/// second-order mode equation, for cross-checking evolve().
struct OracleRecord {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> modes;  ///< modes[j](m - 1, n - 1)
};

/// Integrates q'' + Omega^2 q + 2 sum M_mn q'_m + sum (M'_mn - N_nm) q_m = 0
/// with cfg.cutoff modes. The N-matrix sum runs over k <= n_matrix_bound;
/// 0 selects cfg.cutoff, the bound under which both formulations coincide.
OracleRecord second_order_oracle(const SimulationConfig& cfg, int n_matrix_bound = 0);

}  // namespace dcesim
