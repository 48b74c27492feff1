#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dcesim/config.hpp"
#include "dcesim/errors.hpp"
#include "dcesim/model.hpp"

using namespace dcesim;
using std::numbers::pi;

namespace {

SimulationConfig make_cfg(double mass, double omega = 5.0, double epsilon = 0.001) {
    SimulationConfig cfg;
    cfg.mass = mass;
    cfg.omega = omega;
    cfg.epsilon = epsilon;
    return cfg;
}

}  // namespace

TEST(Config, DefaultsValidate) {
    SimulationConfig cfg;
    EXPECT_TRUE(cfg.validate().empty());
}

TEST(Config, RejectsOutOfRange) {
    auto bad = [](auto mutate) {
        SimulationConfig cfg;
        mutate(cfg);
        return cfg;
    };
    EXPECT_THROW(bad([](auto& c) { c.epsilon = 0.1; }).validate(), ConfigError);
    EXPECT_THROW(bad([](auto& c) { c.epsilon = -1e-3; }).validate(), ConfigError);
    EXPECT_THROW(bad([](auto& c) { c.mass = -0.1; }).validate(), ConfigError);
    EXPECT_THROW(bad([](auto& c) { c.cutoff = 0; }).validate(), ConfigError);
    EXPECT_THROW(bad([](auto& c) { c.err = 0.0; }).validate(), ConfigError);
    EXPECT_THROW(bad([](auto& c) { c.t_max = 0.0; }).validate(), ConfigError);
    EXPECT_THROW(bad([](auto& c) { c.sample_dt = -1.0; }).validate(), ConfigError);
    EXPECT_THROW(bad([](auto& c) { c.l0 = 2.0; }).validate(), ConfigError);
    EXPECT_THROW(bad([](auto& c) { c.omega = std::nan(""); }).validate(), ConfigError);
}

TEST(Config, WarnsAboveOnePercentAmplitude) {
    SimulationConfig cfg;
    cfg.epsilon = 0.02;
    EXPECT_EQ(cfg.validate().size(), 1u);
    cfg.mass = 0.0;
    cfg.epsilon = 0.0;
    EXPECT_TRUE(cfg.validate().empty());
}

TEST(Config, SampleGrid) {
    SimulationConfig cfg;
    cfg.t_max = 2000.0;
    cfg.sample_dt = 1.0;
    EXPECT_EQ(cfg.sample_count(), 2001u);
    cfg.t_max = 0.3;
    cfg.sample_dt = 0.1;
    EXPECT_EQ(cfg.sample_count(), 4u);
    EXPECT_DOUBLE_EQ(cfg.sample_time(3), 0.30000000000000004);
}

TEST(Config, StepperNames) {
    EXPECT_EQ(stepper_from_string("rkf45"), Stepper::rkf45);
    EXPECT_EQ(to_string(Stepper::rk8pd), "rk8pd");
    EXPECT_THROW(stepper_from_string("euler"), ConfigError);
}

TEST(Trajectory, PositionAndVelocity) {
    const auto cfg = make_cfg(0.0, 3.0);
    EXPECT_EQ(wall_position(0.0, cfg), 1.0);
    EXPECT_NEAR(wall_position(pi / (2.0 * cfg.omega), cfg), 1.001, 1e-15);
    EXPECT_DOUBLE_EQ(wall_velocity(0.0, cfg), cfg.epsilon * cfg.omega);
}

TEST(Trajectory, DerivativesMatchFiniteDifferences) {
    const SineTrajectory traj(1.0, 0.001, 7.3);
    const double h = 1e-5;
    for (double t : {0.1, 1.7, 42.0}) {
        const double dv = (traj.position(t + h) - traj.position(t - h)) / (2 * h);
        const double da = (traj.velocity(t + h) - traj.velocity(t - h)) / (2 * h);
        EXPECT_NEAR(traj.velocity(t), dv, 1e-10);
        EXPECT_NEAR(traj.acceleration(t), da, 1e-8);
    }
    EXPECT_DOUBLE_EQ(traj.period(), 2 * pi / 7.3);
    EXPECT_TRUE(std::isinf(SineTrajectory(1.0, 0.001, 0.0).period()));
}

TEST(Frequencies, StaticValues) {
    EXPECT_DOUBLE_EQ(omega_static(1, make_cfg(0.0)), pi);
    const auto cfg = make_cfg(std::sqrt(2.0) * pi);
    EXPECT_NEAR(omega_static(1, cfg), std::sqrt(3.0) * pi, 1e-13);
    EXPECT_NEAR(omega_static(1, cfg), 5.4414, 1e-4);
    EXPECT_NEAR(omega_static(5, cfg), 3.0 * omega_static(1, cfg), 1e-12);
}

TEST(Frequencies, StaticIsIncreasing) {
    for (double m : {0.0, 0.4, 3.0}) {
        for (int n = 1; n < 30; ++n)
            EXPECT_LT(omega_static(n, make_cfg(m)), omega_static(n + 1, make_cfg(m)));
        EXPECT_LT(omega_static(3, make_cfg(m)), omega_static(3, make_cfg(m + 0.1)));
    }
}

TEST(Frequencies, InstantaneousFrequency) {
    const auto cfg = make_cfg(0.7, 3.0);
    for (int n = 1; n <= 5; ++n) EXPECT_EQ(omega_instant(n, 0.0, cfg), omega_static(n, cfg));
    // l(t) = 1.001 at the first maximum of the wall
    const auto massless = make_cfg(0.0, 3.0);
    const double t_peak = pi / (2.0 * massless.omega);
    EXPECT_NEAR(omega_instant(1, t_peak, massless), pi / 1.001, 1e-13);
    // longer cavity, lower frequency
    EXPECT_LT(omega_instant(2, t_peak, cfg), omega_static(2, cfg));
    EXPECT_GT(omega_instant(2, 3.0 * t_peak, cfg), omega_static(2, cfg));
}

TEST(Geometry, TransverseWavenumber) {
    EXPECT_NEAR(kpar_from_cavity({1.0, 1.0, 1, 1}), std::sqrt(2.0) * pi, 1e-14);
    EXPECT_NEAR(kpar_from_cavity({11.0, 11.0, 1, 1}), 0.4039, 1e-4);
    EXPECT_NEAR(kpar_from_cavity({1e12, 1e12, 1, 1}), 0.0, 1e-11);
    EXPECT_THROW(kpar_from_cavity({0.0, 1.0, 1, 1}), ConfigError);
    EXPECT_THROW(kpar_from_cavity({1.0, 1.0, 0, 1}), ConfigError);
}

TEST(Geometry, AspectRatioRoundTrip) {
    EXPECT_NEAR(mass_from_aspect(1.0, 1), std::sqrt(2.0) * pi, 1e-14);
    EXPECT_NEAR(mass_from_aspect(11.0, 1), 0.404, 1e-3);
    EXPECT_NEAR(aspect_from_mass(std::sqrt(2.0) * pi, 1), 1.0, 1e-15);
    for (double ell : {0.3, 1.0, 7.5, 40.0})
        for (int np : {1, 2, 5})
            EXPECT_NEAR(mass_from_aspect(aspect_from_mass(mass_from_aspect(ell, np), np), np),
                        mass_from_aspect(ell, np), 1e-14 * mass_from_aspect(ell, np));
    EXPECT_THROW(mass_from_aspect(0.0, 1), ConfigError);
    EXPECT_THROW(aspect_from_mass(0.0, 1), ConfigError);
}

TEST(Coupling, MMatrixValues) {
    const auto cfg = make_cfg(0.3, 4.0);
    const double t = 0.37;
    const double v = wall_velocity(t, cfg) / wall_position(t, cfg);
    EXPECT_EQ(coupling_m_matrix(3, 3, t, cfg), 0.0);
    EXPECT_NEAR(coupling_m_matrix(1, 2, t, cfg), -4.0 * v / 3.0, 1e-18);
}

TEST(Coupling, MMatrixAntisymmetric) {
    const auto cfg = make_cfg(0.3, 4.0);
    for (int n = 1; n <= 12; ++n)
        for (int k = 1; k <= 12; ++k)
            EXPECT_EQ(coupling_m_matrix(n, k, 0.9, cfg), -coupling_m_matrix(k, n, 0.9, cfg));
}

TEST(Coupling, MMatrixDotMatchesFiniteDifference) {
    const auto cfg = make_cfg(0.7, 2.0 * 3.2, 0.001);
    const double h = 1e-5;
    for (double t : {0.05, 1.3, 17.0})
        for (auto [n, k] : {std::pair{1, 2}, {2, 5}, {4, 3}}) {
            const double fd =
                (coupling_m_matrix(n, k, t + h, cfg) - coupling_m_matrix(n, k, t - h, cfg)) / (2 * h);
            EXPECT_NEAR(coupling_m_matrix_dot(n, k, t, cfg), fd, 1e-6);
        }
    EXPECT_EQ(coupling_m_matrix_dot(2, 2, 0.4, cfg), 0.0);
}

TEST(Coupling, CClosedFormMasslessExample) {
    const auto cfg = make_cfg(0.0, 4.0);
    const double t = 0.21;
    const double v = wall_velocity(t, cfg) / wall_position(t, cfg);
    const auto c = coupling_c(1, 2, t, cfg);
    EXPECT_NEAR(c.plus, -v / 3.0, 1e-17);
    EXPECT_NEAR(c.minus, -v, 1e-17);
}

TEST(Coupling, CDiagonalAndRestAreZero) {
    const auto cfg = make_cfg(1.1, 4.0);
    const auto d = coupling_c(4, 4, 0.3, cfg);
    EXPECT_EQ(d.plus, 0.0);
    EXPECT_EQ(d.minus, 0.0);
    // t = pi / (2 omega): wall velocity vanishes
    const double t_rest = pi / (2.0 * cfg.omega);
    for (int n = 1; n <= 6; ++n)
        for (int k = 1; k <= 6; ++k) {
            const auto c = coupling_c(n, k, t_rest, cfg);
            EXPECT_NEAR(c.plus, 0.0, 1e-15);
            EXPECT_NEAR(c.minus, 0.0, 1e-15);
        }
}

TEST(Coupling, CClosedFormMatchesMMatrixComposition) {
    // c+-_{kn} = (1/2) [M_nk +- (Omega_n / Omega_k) M_kn]
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> time(0.0, 100.0);
    for (double mass : {0.0, 0.7, 5.0}) {
        const auto cfg = make_cfg(mass, 3.7);
        for (int trial = 0; trial < 4; ++trial) {
            const double t = time(rng);
            for (int n = 1; n <= 30; ++n)
                for (int k = 1; k <= 30; ++k) {
                    const double ratio = omega_static(n, cfg) / omega_static(k, cfg);
                    const double mnk = coupling_m_matrix(n, k, t, cfg);
                    const double mkn = coupling_m_matrix(k, n, t, cfg);
                    const double plus = 0.5 * (mnk + ratio * mkn);
                    const double minus = 0.5 * (mnk - ratio * mkn);
                    const auto c = coupling_c(n, k, t, cfg);
                    const double scale = std::abs(mnk) + 1e-300;
                    EXPECT_LE(std::abs(c.plus - plus), 1e-12 * scale) << n << "," << k;
                    EXPECT_LE(std::abs(c.minus - minus), 1e-12 * scale) << n << "," << k;
                }
        }
    }
}

TEST(Coupling, AIdentities) {
    const auto cfg = make_cfg(0.9, 2.3);
    for (int n : {1, 4, 9}) {
        const auto a0 = coupling_a(n, 0.0, cfg);
        EXPECT_EQ(a0.plus, omega_static(n, cfg));
        EXPECT_EQ(a0.minus, 0.0);
        for (double t : {0.3, 1.1, 50.0}) {
            const auto a = coupling_a(n, t, cfg);
            const double w0 = omega_static(n, cfg);
            const double w = omega_instant(n, t, cfg);
            EXPECT_NEAR(a.plus + a.minus, w0, 1e-14 * w0);
            EXPECT_NEAR(a.plus - a.minus, w * w / w0, 1e-14 * w0);
        }
    }
}

TEST(ModeModel, CoefficientsAgreeWithClosedForms) {
    auto cfg = make_cfg(0.7, 6.1);
    cfg.cutoff = 9;
    const ModeModel model(cfg);
    for (double t : {0.0, 0.25, 3.9}) {
        const auto c = model.coefficients(t);
        for (int n = 1; n <= 9; ++n) {
            const auto a = coupling_a(n, t, cfg);
            EXPECT_NEAR(c.a_plus(n - 1), a.plus, 1e-14);
            EXPECT_NEAR(c.a_minus(n - 1), a.minus, 1e-14);
            EXPECT_EQ(c.c_plus(n - 1, n - 1), 0.0);
            EXPECT_EQ(c.c_minus(n - 1, n - 1), 0.0);
            for (int k = 1; k <= 9; ++k) {
                // row n holds c_{nk}, the coefficient in the equation of mode n
                const auto ref = coupling_c(k, n, t, cfg);
                EXPECT_NEAR(c.c_plus(n - 1, k - 1), ref.plus, 1e-14);
                EXPECT_NEAR(c.c_minus(n - 1, k - 1), ref.minus, 1e-14);
            }
        }
    }
}
