#include "dcesim/evolution.hpp"

#include <numbers>

#include "dcesim/errors.hpp"
#include "dcesim/parallel.hpp"

namespace dcesim {

namespace {

using Eigen::Index;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

// Scratch buffers for the matrix-free product, one set per thread.
struct WScratch {
    Eigen::VectorXd s1, s2, d1, d2, gs1, gs2, hd1, hd2;
    Eigen::VectorXd a_plus, a_minus;

    void resize(Index K) {
        if (a_plus.size() == K) return;
        for (auto* vec : {&s1, &s2, &d1, &d2, &gs1, &gs2, &hd1, &hd2, &a_plus, &a_minus})
            vec->resize(K);
    }
};

void diagonal_coefficients(const ModeModel& model, double t, Eigen::VectorXd& a_plus,
                           Eigen::VectorXd& a_minus) {
    const auto& cfg = model.config();
    const double l = model.trajectory().position(t);
    const double kpar = cfg.mass / cfg.l0;
    const int K = model.cutoff();
    for (int n = 1; n <= K; ++n) {
        const double w0 = model.omega0(n);
        const double half = 0.5 * w0;
        double q = 1.0;
        if (l != cfg.l0) {
            const double kx = n * std::numbers::pi / l;
            q = (kx * kx + kpar * kpar) / (w0 * w0);
        }
        a_plus(n - 1) = half + half * q;
        a_minus(n - 1) = half - half * q;
    }
}

}  // namespace

EvolutionState EvolutionState::initial(int m, int cutoff) {
    if (m < 1 || m > cutoff) throw ConfigError("column index m outside 1..K");
    EvolutionState s;
    s.m = m;
    s.t = 0.0;
    const auto K = static_cast<std::size_t>(cutoff);
    s.u.assign(K, 0.0);
    s.x.assign(K, 0.0);
    s.v.assign(K, 0.0);
    s.y.assign(K, 0.0);
    s.u[static_cast<std::size_t>(m - 1)] = 2.0;
    return s;
}

EvolutionState EvolutionState::from_flat(int m, double t, std::span<const double> flat) {
    if (flat.size() % 4 != 0) throw ShapeMismatch("flattened state length is not a multiple of 4");
    const std::size_t K = flat.size() / 4;
    EvolutionState s;
    s.m = m;
    s.t = t;
    s.u.assign(flat.begin(), flat.begin() + K);
    s.x.assign(flat.begin() + K, flat.begin() + 2 * K);
    s.v.assign(flat.begin() + 2 * K, flat.begin() + 3 * K);
    s.y.assign(flat.begin() + 3 * K, flat.end());
    return s;
}

std::vector<double> EvolutionState::flat() const {
    std::vector<double> out;
    out.reserve(4 * u.size());
    out.insert(out.end(), u.begin(), u.end());
    out.insert(out.end(), x.begin(), x.end());
    out.insert(out.end(), v.begin(), v.end());
    out.insert(out.end(), y.begin(), y.end());
    return out;
}

Eigen::MatrixXd assemble_w(double t, const SimulationConfig& cfg) {
    const ModeModel model(cfg);
    const Index K = cfg.cutoff;
    const auto c = model.coefficients(t);
    const Eigen::MatrixXd ap = c.a_plus.asDiagonal();
    const Eigen::MatrixXd am = c.a_minus.asDiagonal();

    Eigen::MatrixXd w(4 * K, 4 * K);
    w << c.c_minus, c.c_plus, -ap, am,
         c.c_plus, c.c_minus, -am, ap,
         ap, -am, c.c_minus, c.c_plus,
         am, -ap, c.c_plus, c.c_minus;
    return -w;
}

void apply_w(const ModeModel& model, double t, std::span<const double> state,
             std::span<double> derivative) {
    const Index K = model.cutoff();
    if (state.size() != static_cast<std::size_t>(4 * K) || derivative.size() != state.size())
        throw ShapeMismatch("apply_w: state length must be 4K");

    thread_local WScratch w;
    w.resize(K);
    diagonal_coefficients(model, t, w.a_plus, w.a_minus);

    const ConstVecMap u(state.data(), K), x(state.data() + K, K), v(state.data() + 2 * K, K),
        y(state.data() + 3 * K, K);
    VecMap du(derivative.data(), K), dx(derivative.data() + K, K),
        dv(derivative.data() + 2 * K, K), dy(derivative.data() + 3 * K, K);
    const auto& ap = w.a_plus.array();
    const auto& am = w.a_minus.array();

    du.array() = ap * v.array() - am * y.array();
    dx.array() = am * v.array() - ap * y.array();
    dv.array() = am * x.array() - ap * u.array();
    dy.array() = ap * x.array() - am * u.array();

    const double r = model.rate(t);
    if (r == 0.0) return;

    // C- u + C+ x = r [G (u+x) + H (u-x)],  C+ u + C- x = r [G (u+x) - H (u-x)]
    w.s1 = u + x;
    w.s2 = v + y;
    w.d1 = u - x;
    w.d2 = v - y;
    const auto& G = model.g();
    const auto& H = model.h();
    w.gs1.noalias() = G * w.s1;
    w.gs2.noalias() = G * w.s2;
    w.hd1.noalias() = H * w.d1;
    w.hd2.noalias() = H * w.d2;
    du -= r * (w.gs1 + w.hd1);
    dx -= r * (w.gs1 - w.hd1);
    dv -= r * (w.gs2 + w.hd2);
    dy -= r * (w.gs2 - w.hd2);
}

std::vector<double> apply_w(double t, const EvolutionState& state, const SimulationConfig& cfg) {
    if (state.cutoff() != cfg.cutoff) throw ShapeMismatch("state cutoff differs from config");
    const ModeModel model(cfg);
    const auto flat = state.flat();
    std::vector<double> out(flat.size());
    apply_w(model, t, flat, out);
    return out;
}

IntegrationStats evolve_column(const ModeModel& model, int m, const ColumnObserver& observe) {
    const auto& cfg = model.config();
    auto state = EvolutionState::initial(m, cfg.cutoff).flat();

    AdaptiveIntegrator integrator(
        state.size(), cfg.stepper, cfg.err,
        [&model](double t, std::span<const double> y, std::span<double> dydt) {
            apply_w(model, t, y, dydt);
        },
        m);

    const std::size_t samples = cfg.sample_count();
    double t = 0.0;
    observe(EvolutionState::from_flat(m, t, state), 0);
    for (std::size_t j = 1; j < samples; ++j) {
        const double target = cfg.sample_time(j);
        integrator.advance(t, target, state);
        t = target;
        observe(EvolutionState::from_flat(m, t, state), j);
    }
    return integrator.stats();
}

EvolutionRecord evolve(const SimulationConfig& cfg, unsigned jobs) {
    cfg.validate();
    const ModeModel model(cfg);
    const std::size_t samples = cfg.sample_count();
    const auto K = static_cast<std::size_t>(cfg.cutoff);

    EvolutionRecord record;
    record.times.resize(samples);
    for (std::size_t j = 0; j < samples; ++j) record.times[j] = cfg.sample_time(j);
    record.states.assign(samples, std::vector<EvolutionState>(K));

    parallel_for(K, jobs, [&](std::size_t col) {
        const int m = static_cast<int>(col) + 1;
        evolve_column(model, m, [&](const EvolutionState& s, std::size_t j) {
            record.states[j][col] = s;
        });
    });
    return record;
}

}  // namespace dcesim
