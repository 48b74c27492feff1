#include "dcesim/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dcesim/errors.hpp"

namespace dcesim {

namespace {

constexpr double pi = std::numbers::pi;

// (-1)^{n+k} 2nk / (k^2 - n^2): the index factor of M_{nk}, callers handle n == k.
double index_factor(int n, int k) {
    const double sign = ((n + k) % 2 == 0) ? 1.0 : -1.0;
    const double nn = n, kk = k;
    return sign * 2.0 * nn * kk / (kk * kk - nn * nn);
}

double rate_of(const Trajectory& traj, double t) {
    return traj.velocity(t) / traj.position(t);
}

}  // namespace

double SineTrajectory::position(double t) const {
    return l0_ * (1.0 + epsilon_ * std::sin(omega_ * t));
}

double SineTrajectory::velocity(double t) const {
    return l0_ * epsilon_ * omega_ * std::cos(omega_ * t);
}

double SineTrajectory::acceleration(double t) const {
    return -l0_ * epsilon_ * omega_ * omega_ * std::sin(omega_ * t);
}

double SineTrajectory::period() const {
    return omega_ > 0.0 ? 2.0 * pi / omega_ : std::numeric_limits<double>::infinity();
}

double wall_position(double t, const SimulationConfig& cfg) {
    return SineTrajectory(cfg).position(t);
}

double wall_velocity(double t, const SimulationConfig& cfg) {
    return SineTrajectory(cfg).velocity(t);
}

double wall_acceleration(double t, const SimulationConfig& cfg) {
    return SineTrajectory(cfg).acceleration(t);
}

double omega_static(int n, const SimulationConfig& cfg) {
    const double np = n * pi;
    return std::sqrt(np * np + cfg.mass * cfg.mass) / cfg.l0;
}

double omega_instant(int n, double t, const SimulationConfig& cfg) {
    const double l = wall_position(t, cfg);
    if (l == cfg.l0) return omega_static(n, cfg);
    const double kx = n * pi / l;
    const double kpar = cfg.mass / cfg.l0;
    return std::sqrt(kx * kx + kpar * kpar);
}

double kpar_from_cavity(const Cavity3DSpec& spec) {
    spec.validate();
    const double a = spec.ny / spec.ly;
    const double b = spec.nz / spec.lz;
    return pi * std::sqrt(a * a + b * b);
}

double mass_from_aspect(double ell, int n_par) {
    if (!(ell > 0.0)) throw ConfigError("aspect ratio ell must be > 0");
    if (n_par < 1) throw ConfigError("n_par must be >= 1");
    return std::numbers::sqrt2 * n_par * pi / ell;
}

double aspect_from_mass(double mass, int n_par) {
    if (!(mass > 0.0)) throw ConfigError("mass must be > 0 to define an aspect ratio");
    if (n_par < 1) throw ConfigError("n_par must be >= 1");
    return std::numbers::sqrt2 * n_par * pi / mass;
}

double coupling_m_matrix(int n, int k, double t, const SimulationConfig& cfg) {
    if (n == k) return 0.0;
    return rate_of(SineTrajectory(cfg), t) * index_factor(n, k);
}

double coupling_m_matrix_dot(int n, int k, double t, const SimulationConfig& cfg) {
    if (n == k) return 0.0;
    const SineTrajectory traj(cfg);
    const double l = traj.position(t);
    const double r = traj.velocity(t) / l;
    const double rdot = traj.acceleration(t) / l - r * r;
    return rdot * index_factor(n, k);
}

PlusMinus coupling_c(int n, int k, double t, const SimulationConfig& cfg) {
    if (n == k) return {};
    const double r = rate_of(SineTrajectory(cfg), t);
    const double sign = ((n + k) % 2 == 0) ? 1.0 : -1.0;
    const double nn = n, kk = k;
    const double common = -r * sign * kk * nn / (nn * nn - kk * kk);
    const double ratio = omega_static(n, cfg) / omega_static(k, cfg);
    return {common * (1.0 - ratio), common * (1.0 + ratio)};
}

PlusMinus coupling_a(int n, double t, const SimulationConfig& cfg) {
    const double w0 = omega_static(n, cfg);
    const double q = omega_instant(n, t, cfg) / w0;
    const double half = 0.5 * w0;
    return {half + half * q * q, half - half * q * q};
}

ModeModel::ModeModel(const SimulationConfig& cfg)
    : cfg_(cfg), trajectory_(cfg), omega0_(static_cast<std::size_t>(cfg.cutoff)) {
    const int K = cfg.cutoff;
    for (int n = 1; n <= K; ++n) omega0_[static_cast<std::size_t>(n - 1)] = omega_static(n, cfg);

    g_ = Eigen::MatrixXd::Zero(K, K);
    h_ = Eigen::MatrixXd::Zero(K, K);
    for (int n = 1; n <= K; ++n) {
        for (int k = 1; k <= K; ++k) {
            if (n == k) continue;
            // G_{nk} = M_{kn} / (2r)
            const double gnk = 0.5 * index_factor(k, n);
            g_(n - 1, k - 1) = gnk;
            h_(n - 1, k - 1) = gnk * omega0(k) / omega0(n);
        }
    }
}

double ModeModel::rate(double t) const { return rate_of(trajectory_, t); }

double ModeModel::omega_instant(int n, double t) const {
    const double l = trajectory_.position(t);
    if (l == cfg_.l0) return omega0(n);
    const double kx = n * pi / l;
    const double kpar = cfg_.mass / cfg_.l0;
    return std::sqrt(kx * kx + kpar * kpar);
}

PlusMinus ModeModel::coupling_a(int n, double t) const {
    const double w0 = omega0(n);
    const double q = omega_instant(n, t) / w0;
    const double half = 0.5 * w0;
    return {half + half * q * q, half - half * q * q};
}

CouplingCoefficients ModeModel::coefficients(double t) const {
    const int K = cutoff();
    CouplingCoefficients c;
    c.a_plus.resize(K);
    c.a_minus.resize(K);
    for (int n = 1; n <= K; ++n) {
        const auto a = coupling_a(n, t);
        c.a_plus(n - 1) = a.plus;
        c.a_minus(n - 1) = a.minus;
    }
    const double r = rate(t);
    c.c_plus = r * (g_ - h_);
    c.c_minus = r * (g_ + h_);
    return c;
}

}  // namespace dcesim
