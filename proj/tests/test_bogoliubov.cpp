#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dcesim/bogoliubov.hpp"
#include "dcesim/errors.hpp"

using namespace dcesim;
using std::numbers::pi;

namespace {

SimulationConfig resonant(double mass, int K, double t_max, double dt) {
    SimulationConfig cfg;
    cfg.mass = mass;
    cfg.omega = 2.0 * omega_static(1, cfg);
    cfg.cutoff = K;
    cfg.t_max = t_max;
    cfg.sample_dt = dt;
    return cfg;
}

}  // namespace

TEST(Delta, Values) {
    auto cfg = resonant(0.0, 4, 1.0, 1.0);
    const auto d0 = delta_pm(1, 0.0, cfg);
    EXPECT_EQ(d0.plus, 1.0);
    EXPECT_EQ(d0.minus, 0.0);
    // l(t) = 1.001: Omega^0 / Omega = 1.001 for M = 0
    const double t_peak = pi / (2.0 * cfg.omega);
    const auto d = delta_pm(1, t_peak, cfg);
    EXPECT_NEAR(d.minus, -5e-4, 1e-14);
    for (double t : {0.1, 2.2, 7.7}) {
        const auto e = delta_pm(3, t, cfg);
        EXPECT_DOUBLE_EQ(e.plus + e.minus, 1.0);
    }
}

TEST(Bogoliubov, IdentityAtStart) {
    const auto cfg = resonant(0.7, 5, 1.0, 1.0);
    const auto rec = evolve(cfg, 1);
    const auto bog = bogoliubov_from_state(rec.states[0], cfg);
    EXPECT_EQ(bog.t1, 0.0);
    EXPECT_TRUE(bog.A.isApprox(Eigen::MatrixXcd::Identity(5, 5), 1e-15));
    EXPECT_EQ(bog.B.cwiseAbs().maxCoeff(), 0.0);
    const auto res = bogoliubov_residuals(bog);
    for (double d : res.d) EXPECT_NEAR(d, 0.0, 1e-15);
    EXPECT_EQ(res.max_offdiagonal, 0.0);
    for (double n : particle_numbers(rec.states[0], cfg, 0.0)) EXPECT_EQ(n, 0.0);
}

TEST(Bogoliubov, TwoPathEquality) {
    const auto cfg = resonant(0.7, 6, 30.0, 1.7);
    const auto rec = evolve(cfg, 1);
    for (std::size_t j = 0; j < rec.times.size(); ++j) {
        const auto N = particle_numbers(rec.states[j], cfg, rec.times[j]);
        const auto bog = bogoliubov_from_state(rec.states[j], cfg);
        for (int n = 0; n < 6; ++n) {
            const double direct = bog.B.col(n).squaredNorm();
            EXPECT_GE(N[n], 0.0);
            EXPECT_NEAR(N[n], direct, 1e-12 * direct + 1e-300);
        }
    }
}

TEST(Bogoliubov, StaticCavity) {
    auto cfg = resonant(2.0, 6, 60.0, 3.0);
    cfg.epsilon = 0.0;
    const auto rec = evolve(cfg, 1);
    for (std::size_t j = 0; j < rec.times.size(); ++j) {
        const auto bog = bogoliubov_from_state(rec.states[j], cfg);
        EXPECT_EQ(bog.B.cwiseAbs().maxCoeff(), 0.0);
        for (int m = 0; m < 6; ++m)
            for (int n = 0; n < 6; ++n)
                if (m != n) EXPECT_EQ(std::abs(bog.A(m, n)), 0.0);
                else EXPECT_NEAR(std::abs(bog.A(m, n)), 1.0, 1e-8);
        for (double N : particle_numbers(rec.states[j], cfg, rec.times[j])) EXPECT_LE(N, 1e-20);
    }
}

TEST(Bogoliubov, ShapeChecks) {
    const auto cfg = resonant(0.7, 3, 2.0, 1.0);
    const auto rec = evolve(cfg, 1);
    std::vector<EvolutionState> few(rec.states[1].begin(), rec.states[1].begin() + 2);
    EXPECT_THROW(bogoliubov_from_state(few, cfg), ShapeMismatch);
    auto mixed = rec.states[1];
    mixed[2] = rec.states[2][2];
    EXPECT_THROW(bogoliubov_from_state(mixed, cfg), ShapeMismatch);
    auto swapped = rec.states[1];
    std::swap(swapped[0], swapped[1]);
    EXPECT_THROW(bogoliubov_from_state(swapped, cfg), ShapeMismatch);
    EXPECT_THROW(particle_numbers(rec.states[1], cfg, 2.0), ShapeMismatch);
}

TEST(Bogoliubov, ResidualsSmallAndDegradeWithMode) {
    const auto cfg = resonant(2.0, 10, 40.0, 40.0);
    const auto rec = evolve(cfg, 1);
    const auto res = bogoliubov_residuals(bogoliubov_from_state(rec.states.back(), cfg));
    double lead = 0.0, trail = 0.0;
    for (int k = 0; k < 3; ++k) lead = std::max(lead, std::abs(res.d[k]));
    for (int k = 7; k < 10; ++k) trail = std::max(trail, std::abs(res.d[k]));
    EXPECT_LE(lead, 1e3 * cfg.err);
    EXPECT_LT(lead, trail);
    EXPECT_LE(res.max_offdiagonal, 1e-6);
}

TEST(Bogoliubov, PeriodReducedFormIsLiteral) {
    const auto cfg = resonant(0.7, 4, 5.0, 5.0);
    const auto rec = evolve(cfg, 1);
    const auto reduced = particle_numbers_period_reduced(rec.states.back());
    for (int n = 0; n < 4; ++n) {
        double expect = 0.0;
        for (const auto& s : rec.states.back()) expect += 0.25 * (s.x[n] * s.x[n] + s.y[n] * s.y[n]);
        EXPECT_DOUBLE_EQ(reduced[n], expect);
    }
}

TEST(Bogoliubov, PeriodReducedDiffersByFrequencyWeight) {
    // At t = N T the weighted and reduced forms coincide only for the diagonal column.
    auto cfg = resonant(0.7, 4, 0.0, 1.0);
    const double period = 2.0 * pi / cfg.omega;
    cfg.t_max = 20.0 * period;
    cfg.sample_dt = 20.0 * period;
    const auto run = compute_spectrum(cfg, 1);
    ASSERT_TRUE(run.period_aligned.back());
    const auto& N = run.spectrum.N.back();
    const auto& R = run.N_period_reduced.back();
    EXPECT_NEAR(R[0], N[0], 0.05 * N[0]);
    double differs = 0.0;
    for (int n = 0; n < 4; ++n) differs = std::max(differs, std::abs(R[n] - N[n]) / N[n]);
    EXPECT_GT(differs, 1e-6);
}

TEST(Spectrum, MatchesStoredEvolution) {
    const auto cfg = resonant(0.7, 5, 12.0, 3.0);
    const auto rec = evolve(cfg, 1);
    const auto run = compute_spectrum(cfg, 1);
    ASSERT_EQ(run.spectrum.times, rec.times);
    for (std::size_t j = 0; j < rec.times.size(); ++j) {
        const auto N = particle_numbers(rec.states[j], cfg, rec.times[j]);
        const auto res = bogoliubov_residuals(bogoliubov_from_state(rec.states[j], cfg));
        double total = 0.0;
        for (int n = 0; n < 5; ++n) {
            EXPECT_NEAR(run.spectrum.N[j][n], N[n], 1e-13 * N[n] + 1e-300);
            EXPECT_NEAR(run.defect[j][n], res.d[n], 1e-13);
            total += run.spectrum.N[j][n];
        }
        EXPECT_DOUBLE_EQ(run.spectrum.N_total[j], total);
    }
    EXPECT_EQ(run.spectrum.N[0], std::vector<double>(5, 0.0));
    EXPECT_GT(run.stats.accepted, 0);
}

TEST(Spectrum, DeterministicAcrossJobCounts) {
    const auto cfg = resonant(0.4, 8, 10.0, 1.0);
    const auto a = compute_spectrum(cfg, 1);
    const auto b = compute_spectrum(cfg, 3);
    EXPECT_EQ(a.spectrum.N, b.spectrum.N);
    EXPECT_EQ(a.defect, b.defect);
    EXPECT_EQ(a.spectrum.N_total, b.spectrum.N_total);
}

TEST(Spectrum, ResonantModeGrows) {
    const auto cfg = resonant(2.0, 8, 100.0, 25.0);
    const auto run = compute_spectrum(cfg, 1);
    for (std::size_t j = 1; j < run.spectrum.times.size(); ++j)
        EXPECT_GT(run.spectrum.N[j][0], run.spectrum.N[j - 1][0]);
}

TEST(Spectrum, MaxDefectClampsRange) {
    SpectrumRun run;
    run.defect = {{1e-9, -3e-9, 2e-9}, {0.0, 5e-10, -7e-9}};
    EXPECT_EQ(run.max_defect(1, 2), 3e-9);
    EXPECT_EQ(run.max_defect(0, 10), 7e-9);
    EXPECT_EQ(run.max_defect(3, 3), 7e-9);
}

TEST(PeriodAlignment, Flags) {
    const double T = 2.0 * pi / 6.3;
    EXPECT_TRUE(is_period_aligned(0.0, T));
    EXPECT_TRUE(is_period_aligned(37.0 * T, T));
    EXPECT_FALSE(is_period_aligned(37.5 * T, T));
    EXPECT_FALSE(is_period_aligned(1.0, std::numeric_limits<double>::infinity()));
}
