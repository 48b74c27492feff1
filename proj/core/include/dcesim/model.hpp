#pragma once

// Cavity geometry, wall trajectory, mode frequencies and the coupling
// coefficients of the mode equations.
//
// Mode indices are 1-based everywhere in the public API (n = 1..K); arrays
// and Eigen matrices are 0-based, so mode n lives at index n - 1.

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "dcesim/config.hpp"

namespace dcesim {

/// A (+, -) branch pair, e.g. (a+, a-), (c+, c-) or (Delta+, Delta-).
struct PlusMinus {
    double plus = 0.0;
    double minus = 0.0;
};

/// Prescribed motion of the dynamical wall. Velocity and acceleration are
/// exact derivatives of position.
class Trajectory {
public:
    virtual ~Trajectory() = default;
    virtual double position(double t) const = 0;
    virtual double velocity(double t) const = 0;
    virtual double acceleration(double t) const = 0;
};

/// l(t) = l0 [1 + epsilon sin(omega t)].
class SineTrajectory final : public Trajectory {
public:
    SineTrajectory(double l0, double epsilon, double omega)
        : l0_(l0), epsilon_(epsilon), omega_(omega) {}
    explicit SineTrajectory(const SimulationConfig& cfg)
        : SineTrajectory(cfg.l0, cfg.epsilon, cfg.omega) {}

    double position(double t) const override;
    double velocity(double t) const override;
    double acceleration(double t) const override;

    /// Oscillation period 2 pi / omega (infinite for omega = 0).
    double period() const;

private:
    double l0_;
    double epsilon_;
    double omega_;
};

double wall_position(double t, const SimulationConfig& cfg);
double wall_velocity(double t, const SimulationConfig& cfg);
double wall_acceleration(double t, const SimulationConfig& cfg);

/// Omega_n^0 = sqrt((n pi)^2 + M^2) / l0.
double omega_static(int n, const SimulationConfig& cfg);
/// Omega_n(t) = sqrt((n pi / l(t))^2 + (M / l0)^2).
double omega_instant(int n, double t, const SimulationConfig& cfg);

/// Transverse wavenumber k_par = pi sqrt((ny/ly)^2 + (nz/lz)^2).
double kpar_from_cavity(const Cavity3DSpec& spec);
/// M = sqrt(2) n_par pi / ell for a cavity with l_y = l_z = ell * l0.
double mass_from_aspect(double ell, int n_par);
/// Inverse of mass_from_aspect.
double aspect_from_mass(double mass, int n_par);

/// M_{nk}(t) = (l'/l) (-1)^{n+k} 2nk / (k^2 - n^2), zero on the diagonal.
double coupling_m_matrix(int n, int k, double t, const SimulationConfig& cfg);
/// Analytic time derivative of coupling_m_matrix.
double coupling_m_matrix_dot(int n, int k, double t, const SimulationConfig& cfg);

/// (c+_{kn}, c-_{kn}) in closed form; exactly (0, 0) for n == k.
PlusMinus coupling_c(int n, int k, double t, const SimulationConfig& cfg);
/// (a+_{nn}, a-_{nn}).
PlusMinus coupling_a(int n, double t, const SimulationConfig& cfg);

/// Full set of coefficients at one instant. c_plus(i, j) holds c+_{(i+1)(j+1)},
/// i.e. the row is the mode whose equation the entry appears in.
struct CouplingCoefficients {
    Eigen::VectorXd a_plus;
    Eigen::VectorXd a_minus;
    Eigen::MatrixXd c_plus;
    Eigen::MatrixXd c_minus;
};

/// Per-configuration precomputation shared by the evolution hot path:
/// static frequencies and the time-independent parts of the C+- blocks.
///
/// With r(t) = l'(t)/l(t), c+-_{nk}(t) = r(t) G_{nk} (1 -+ Omega_k^0/Omega_n^0)
/// where G_{nk} = M_{kn}/(2r). The hot path uses G and H_{nk} = G_{nk}
/// Omega_k^0/Omega_n^0 so that C- u + C+ x = r [G (u+x) + H (u-x)].
class ModeModel {
public:
    explicit ModeModel(const SimulationConfig& cfg);

    const SimulationConfig& config() const { return cfg_; }
    int cutoff() const { return cfg_.cutoff; }
    const SineTrajectory& trajectory() const { return trajectory_; }

    double omega0(int n) const { return omega0_[static_cast<std::size_t>(n - 1)]; }
    std::span<const double> omega0() const { return omega0_; }

    /// l'(t) / l(t).
    double rate(double t) const;
    double omega_instant(int n, double t) const;
    PlusMinus coupling_a(int n, double t) const;
    CouplingCoefficients coefficients(double t) const;

    const Eigen::MatrixXd& g() const { return g_; }
    const Eigen::MatrixXd& h() const { return h_; }

private:
    SimulationConfig cfg_;
    SineTrajectory trajectory_;
    std::vector<double> omega0_;
    Eigen::MatrixXd g_;
    Eigen::MatrixXd h_;
};

}  // namespace dcesim
