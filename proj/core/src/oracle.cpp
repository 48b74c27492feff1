// Direct integration of the second-order mode equation. Shares no code with
// the first-order W(t) path beyond the trajectory and static frequencies.

#include <cmath>
#include <numbers>

#include "dcesim/errors.hpp"
#include "dcesim/evolution.hpp"

namespace dcesim {

namespace {

// F(n, k) such that M_{nk} = (l'/l) F(n, k).
Eigen::MatrixXd index_factors(int bound) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(bound, bound);
    for (int n = 1; n <= bound; ++n)
        for (int k = 1; k <= bound; ++k)
            if (n != k) {
                const double sign = ((n + k) % 2 == 0) ? 1.0 : -1.0;
                f(n - 1, k - 1) = sign * 2.0 * n * k / (double(k) * k - double(n) * n);
            }
    return f;
}

}  // namespace

OracleRecord second_order_oracle(const SimulationConfig& cfg, int n_matrix_bound) {
    cfg.validate();
    const int K = cfg.cutoff;
    const int bound = n_matrix_bound == 0 ? K : n_matrix_bound;
    if (bound < K) throw ConfigError("N-matrix bound must be >= the number of modes");

    const SineTrajectory traj(cfg);
    const Eigen::MatrixXd f_all = index_factors(bound);
    // F restricted to the retained modes, and sum_k F_{nk} F_{mk} over k <= bound.
    const Eigen::MatrixXd f = f_all.topLeftCorner(K, K);
    const Eigen::MatrixXd nf = (f_all * f_all.transpose()).topLeftCorner(K, K);
    const Eigen::MatrixXd ft = f.transpose();

    std::vector<double> w0(static_cast<std::size_t>(K));
    for (int n = 1; n <= K; ++n) w0[static_cast<std::size_t>(n - 1)] = omega_static(n, cfg);

    // State layout: Re eps, Im eps, Re eps', Im eps' (K each).
    auto rhs = [&](double t, std::span<const double> s, std::span<double> ds) {
        const Eigen::Index k = K;
        Eigen::Map<const Eigen::VectorXd> qr(s.data(), k), qi(s.data() + k, k),
            pr(s.data() + 2 * k, k), pi(s.data() + 3 * k, k);
        Eigen::Map<Eigen::VectorXd> dqr(ds.data(), k), dqi(ds.data() + k, k),
            dpr(ds.data() + 2 * k, k), dpi(ds.data() + 3 * k, k);

        const double l = traj.position(t);
        const double r = traj.velocity(t) / l;
        const double rdot = traj.acceleration(t) / l - r * r;

        Eigen::VectorXd omega_sq(k);
        for (int n = 1; n <= K; ++n) {
            const double kx = n * std::numbers::pi / l;
            const double kp = cfg.mass / cfg.l0;
            omega_sq(n - 1) = kx * kx + kp * kp;
        }
        // (sum_m M_mn q_m)_n = r (F^T q)_n
        const Eigen::MatrixXd coupling = rdot * ft - r * r * nf;
        dqr = pr;
        dqi = pi;
        dpr = -(omega_sq.array() * qr.array()).matrix() - 2.0 * r * (ft * pr) - coupling * qr;
        dpi = -(omega_sq.array() * qi.array()).matrix() - 2.0 * r * (ft * pi) - coupling * qi;
    };

    const std::size_t samples = cfg.sample_count();
    OracleRecord out;
    out.times.resize(samples);
    for (std::size_t j = 0; j < samples; ++j) out.times[j] = cfg.sample_time(j);
    out.modes.assign(samples, Eigen::MatrixXcd::Zero(K, K));

    const double r0 = traj.velocity(0.0) / traj.position(0.0);
    for (int m = 1; m <= K; ++m) {
        std::vector<double> s(static_cast<std::size_t>(4 * K), 0.0);
        // eps_n(0) = delta_nm, eps_n'(0) = -i Omega_n^0 delta_nm - M_mn(0)
        s[static_cast<std::size_t>(m - 1)] = 1.0;
        for (int n = 1; n <= K; ++n) s[static_cast<std::size_t>(2 * K + n - 1)] = -r0 * f(m - 1, n - 1);
        s[static_cast<std::size_t>(3 * K + m - 1)] = -w0[static_cast<std::size_t>(m - 1)];

        AdaptiveIntegrator integrator(s.size(), cfg.stepper, cfg.err, rhs, m);
        double t = 0.0;
        for (std::size_t j = 0; j < samples; ++j) {
            integrator.advance(t, out.times[j], s);
            t = out.times[j];
            for (int n = 1; n <= K; ++n)
                out.modes[j](m - 1, n - 1) = {s[static_cast<std::size_t>(n - 1)],
                                              s[static_cast<std::size_t>(K + n - 1)]};
        }
    }
    return out;
}

}  // namespace dcesim
