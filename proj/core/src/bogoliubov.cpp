#include "dcesim/bogoliubov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "dcesim/errors.hpp"
#include "dcesim/parallel.hpp"

namespace dcesim {

namespace {

void check_shapes(std::span<const EvolutionState> states, int K) {
    if (states.size() != static_cast<std::size_t>(K))
        throw ShapeMismatch("expected one state per column m = 1..K");
    const double t1 = states.front().t;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& s = states[i];
        if (s.cutoff() != K || s.x.size() != s.u.size() || s.v.size() != s.u.size() ||
            s.y.size() != s.u.size())
            throw ShapeMismatch("column states disagree on K");
        if (s.t != t1) throw ShapeMismatch("column states sampled at different times");
        if (s.m != static_cast<int>(i) + 1) throw ShapeMismatch("columns out of order");
    }
}

}  // namespace

PlusMinus delta_pm(int n, double t, const SimulationConfig& cfg) {
    const double ratio = omega_static(n, cfg) / omega_instant(n, t, cfg);
    return {0.5 * (1.0 + ratio), 0.5 * (1.0 - ratio)};
}

SnapshotFactors::SnapshotFactors(const ModeModel& model, double t1) {
    const int K = model.cutoff();
    omega1.resize(static_cast<std::size_t>(K));
    delta_plus.resize(omega1.size());
    delta_minus.resize(omega1.size());
    for (int n = 1; n <= K; ++n) {
        const auto i = static_cast<std::size_t>(n - 1);
        omega1[i] = model.omega_instant(n, t1);
        const double ratio = model.omega0(n) / omega1[i];
        delta_plus[i] = 0.5 * (1.0 + ratio);
        delta_minus[i] = 0.5 * (1.0 - ratio);
    }
}

void accumulate_column(const ModeModel& model, const SnapshotFactors& f,
                       const EvolutionState& s, std::span<double> created,
                       std::span<double> norm) {
    const double inv_w0m = 1.0 / model.omega0(s.m);
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        const double dp = f.delta_plus[i], dm = f.delta_minus[i];
        const double weight = 0.25 * f.omega1[i] * inv_w0m;
        const double br = dm * s.u[i] + dp * s.x[i];
        const double bi = dm * s.v[i] + dp * s.y[i];
        const double ar = dp * s.u[i] + dm * s.x[i];
        const double ai = dp * s.v[i] + dm * s.y[i];
        const double b2 = weight * (br * br + bi * bi);
        created[i] += b2;
        norm[i] += weight * (ar * ar + ai * ai) - b2;
    }
}

BogoliubovMatrices bogoliubov_from_state(std::span<const EvolutionState> states,
                                         const SimulationConfig& cfg) {
    const int K = cfg.cutoff;
    check_shapes(states, K);
    const ModeModel model(cfg);
    const double t1 = states.front().t;
    const SnapshotFactors f(model, t1);

    BogoliubovMatrices bog{t1, Eigen::MatrixXcd(K, K), Eigen::MatrixXcd(K, K)};
    for (int m = 1; m <= K; ++m) {
        const auto& s = states[static_cast<std::size_t>(m - 1)];
        for (int n = 1; n <= K; ++n) {
            const auto i = static_cast<std::size_t>(n - 1);
            const double pref = 0.5 * std::sqrt(f.omega1[i] / model.omega0(m));
            bog.A(m - 1, n - 1) = pref * (f.delta_plus[i] * s.xi(n) + f.delta_minus[i] * s.eta(n));
            bog.B(m - 1, n - 1) = pref * (f.delta_minus[i] * s.xi(n) + f.delta_plus[i] * s.eta(n));
        }
    }
    return bog;
}

std::vector<double> particle_numbers(std::span<const EvolutionState> states,
                                     const SimulationConfig& cfg, double t1) {
    const int K = cfg.cutoff;
    check_shapes(states, K);
    if (states.front().t != t1) throw ShapeMismatch("states are not sampled at t1");
    const ModeModel model(cfg);
    const SnapshotFactors f(model, t1);
    std::vector<double> created(static_cast<std::size_t>(K), 0.0);
    std::vector<double> norm(created.size(), 0.0);
    for (const auto& s : states) accumulate_column(model, f, s, created, norm);
    return created;
}

std::vector<double> particle_numbers_period_reduced(std::span<const EvolutionState> states) {
    if (states.empty()) return {};
    const auto K = states.front().x.size();
    std::vector<double> out(K, 0.0);
    for (const auto& s : states) {
        if (s.x.size() != K || s.y.size() != K) throw ShapeMismatch("column states disagree on K");
        for (std::size_t i = 0; i < K; ++i) out[i] += 0.25 * (s.x[i] * s.x[i] + s.y[i] * s.y[i]);
    }
    return out;
}

BogoliubovResiduals bogoliubov_residuals(const BogoliubovMatrices& bog) {
    const Eigen::MatrixXcd& A = bog.A;
    const Eigen::MatrixXcd& B = bog.B;
    // R1_{nk} = sum_m A_mn A*_mk - B*_mn B_mk,  R2_{nk} = sum_m A_mn B*_mk - B*_mn A_mk
    const Eigen::MatrixXcd r1 = A.transpose() * A.conjugate() - B.adjoint() * B;
    const Eigen::MatrixXcd r2 = A.transpose() * B.conjugate() - B.adjoint() * A;

    BogoliubovResiduals res;
    const auto K = A.cols();
    res.d.resize(static_cast<std::size_t>(K));
    for (Eigen::Index k = 0; k < K; ++k) {
        double norm = 0.0;
        for (Eigen::Index m = 0; m < A.rows(); ++m) norm += std::norm(A(m, k)) - std::norm(B(m, k));
        res.d[static_cast<std::size_t>(k)] = 1.0 - norm;
    }
    for (Eigen::Index n = 0; n < K; ++n)
        for (Eigen::Index k = 0; k < K; ++k)
            if (n != k)
                res.max_offdiagonal =
                    std::max({res.max_offdiagonal, std::abs(r1(n, k)), std::abs(r2(n, k))});
    return res;
}

bool is_period_aligned(double t, double period) {
    if (t == 0.0) return true;
    if (!std::isfinite(period) || period <= 0.0) return false;
    const double cycles = std::round(t / period);
    return std::abs(t - cycles * period) <= 1e-9 * std::max(1.0, t);
}

double SpectrumRun::max_defect(int first, int last) const {
    double worst = 0.0;
    for (const auto& row : defect) {
        const int K = static_cast<int>(row.size());
        for (int k = std::max(1, first); k <= std::min(K, last); ++k)
            worst = std::max(worst, std::abs(row[static_cast<std::size_t>(k - 1)]));
    }
    return worst;
}

SpectrumRun compute_spectrum(const SimulationConfig& cfg, unsigned jobs) {
    cfg.validate();
    const ModeModel model(cfg);
    const std::size_t samples = cfg.sample_count();
    const auto K = static_cast<std::size_t>(cfg.cutoff);

    SpectrumRun run;
    run.config = cfg;
    auto& spec = run.spectrum;
    spec.times.resize(samples);
    run.period_aligned.resize(samples);
    const double period = model.trajectory().period();
    std::vector<SnapshotFactors> factors;
    factors.reserve(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        spec.times[j] = cfg.sample_time(j);
        run.period_aligned[j] = is_period_aligned(spec.times[j], period) ? 1 : 0;
        factors.emplace_back(model, spec.times[j]);
    }
    spec.N.assign(samples, std::vector<double>(K, 0.0));
    std::vector<std::vector<double>> norm_sum(samples, std::vector<double>(K, 0.0));
    run.N_period_reduced.assign(samples, std::vector<double>(K, 0.0));

    // Column results are merged strictly in order of m.
    struct ColumnResult {
        std::vector<double> created, norm, reduced;  // samples * K, row-major by sample
        IntegrationStats stats;
    };
    std::map<std::size_t, ColumnResult> pending;
    std::size_t next_to_merge = 0;
    std::mutex merge_mutex;

    auto merge_ready = [&] {
        for (auto it = pending.find(next_to_merge); it != pending.end();
             it = pending.find(next_to_merge)) {
            const auto& res = it->second;
            for (std::size_t j = 0; j < samples; ++j)
                for (std::size_t n = 0; n < K; ++n) {
                    spec.N[j][n] += res.created[j * K + n];
                    norm_sum[j][n] += res.norm[j * K + n];
                    run.N_period_reduced[j][n] += res.reduced[j * K + n];
                }
            run.stats += res.stats;
            pending.erase(it);
            ++next_to_merge;
        }
    };

    parallel_for(K, jobs, [&](std::size_t col) {
        ColumnResult res;
        res.created.assign(samples * K, 0.0);
        res.norm.assign(samples * K, 0.0);
        res.reduced.assign(samples * K, 0.0);
        res.stats = evolve_column(model, static_cast<int>(col) + 1,
                                  [&](const EvolutionState& s, std::size_t j) {
                                      accumulate_column(
                                          model, factors[j], s,
                                          std::span<double>(res.created).subspan(j * K, K),
                                          std::span<double>(res.norm).subspan(j * K, K));
                                      double* reduced = res.reduced.data() + j * K;
                                      for (std::size_t n = 0; n < K; ++n)
                                          reduced[n] += 0.25 * (s.x[n] * s.x[n] + s.y[n] * s.y[n]);
                                  });
        std::lock_guard lock(merge_mutex);
        pending.emplace(col, std::move(res));
        merge_ready();
    });

    spec.N_total.resize(samples);
    run.defect.assign(samples, std::vector<double>(K, 0.0));
    for (std::size_t j = 0; j < samples; ++j) {
        double total = 0.0;
        for (std::size_t n = 0; n < K; ++n) {
            total += spec.N[j][n];
            run.defect[j][n] = 1.0 - norm_sum[j][n];
        }
        spec.N_total[j] = total;
    }
    return run;
}

}  // namespace dcesim
