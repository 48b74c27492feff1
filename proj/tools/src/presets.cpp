#include "presets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "dcesim/analysis.hpp"
#include "dcesim/bogoliubov.hpp"
#include "dcesim/errors.hpp"
#include "dcesim/evolution.hpp"
#include "dcesim/model.hpp"

namespace dcesim::cli {

namespace {

using std::numbers::pi;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

SimulationConfig resonance(double mass, int resonant_n, int cutoff, double t_max, double dt,
                           const PresetOptions& opts) {
    SimulationConfig cfg;
    cfg.mass = mass;
    cfg.omega = 2.0 * omega_static(resonant_n, cfg);
    cfg.cutoff = cutoff;
    cfg.t_max = t_max;
    cfg.sample_dt = dt;
    if (opts.err) cfg.err = *opts.err;
    if (opts.stepper) cfg.stepper = *opts.stepper;
    return cfg;
}

SpectrumRun run(const SimulationConfig& cfg, const PresetOptions& opts) {
    if (opts.progress)
        *opts.progress << "  run M=" << num(cfg.mass) << " K=" << cfg.cutoff
                       << " t_max=" << num(cfg.t_max) << " err=" << num(cfg.err) << std::endl;
    return compute_spectrum(cfg, opts.jobs);
}

std::size_t sample_at(const SpectrumRun& r, double t) {
    const auto& ts = r.spectrum.times;
    const auto it = std::lower_bound(ts.begin(), ts.end(), t - 1e-9);
    if (it == ts.end() || std::abs(*it - t) > 1e-9 * std::max(1.0, t))
        throw ConfigError("no sample at t=" + num(t));
    return static_cast<std::size_t>(it - ts.begin());
}

double mode_at(const SpectrumRun& r, int n, double t) {
    return r.spectrum.N[sample_at(r, t)][static_cast<std::size_t>(n - 1)];
}

std::vector<double> mode_series(const SpectrumRun& r, int n) {
    std::vector<double> out;
    out.reserve(r.spectrum.N.size());
    for (const auto& row : r.spectrum.N) out.push_back(row[static_cast<std::size_t>(n - 1)]);
    return out;
}

Check within_relative(std::string name, double value, double target, double tol) {
    const double rel = relative_change(value, target);
    return {std::move(name), num(value) + " (rel. dev. " + num(rel) + ")",
            num(target) + " within " + num(100.0 * tol) + "%", rel <= tol};
}

std::vector<Check> preset_fig1(const PresetOptions& opts) {
    std::vector<Check> checks;
    for (double mass : {0.7, 2.0, 3.5}) {
        const auto cfg = resonance(mass, 1, 20, 2000.0, 2000.0, opts);
        const auto r = run(cfg, opts);
        checks.push_back(within_relative("N_1(2000) vs sinh law, M=" + num(mass),
                                         mode_at(r, 1, 2000.0),
                                         sinh_prediction(1, cfg, 2000.0), 0.05));
    }
    const auto cfg = resonance(0.2, 1, 30, 2000.0, 2000.0, opts);
    const auto r = run(cfg, opts);
    const double n1 = mode_at(r, 1, 2000.0);
    const double pred = sinh_prediction(1, cfg, 2000.0);
    checks.push_back({"N_1(2000) below sinh law, M=0.2 (strong coupling)",
                      num(n1) + " (ratio " + num(n1 / pred) + ")", "ratio < 0.8",
                      n1 < 0.8 * pred});
    return checks;
}

std::vector<Check> preset_fig2(const PresetOptions& opts) {
    const auto cfg = resonance(0.2, 1, 30, 6700.0, 100.0, opts);
    const auto r = run(cfg, opts);
    std::vector<Check> checks;
    const double n1 = mode_at(r, 1, 2000.0);
    const double pred = sinh_prediction(1, cfg, 2000.0);
    checks.push_back({"N_1(2000) more than 20% below sinh law, M=0.2",
                      num(n1) + " (ratio " + num(n1 / pred) + ")", "ratio < 0.8",
                      n1 < 0.8 * pred});
    const double even = std::max(mode_at(r, 2, 6700.0), mode_at(r, 4, 6700.0));
    double odd = std::numeric_limits<double>::infinity();
    for (int n : {3, 5, 7}) odd = std::min(odd, mode_at(r, n, 6700.0));
    checks.push_back({"min(N_3,N_5,N_7) vs max(N_2,N_4) at t=6700",
                      num(odd) + " vs " + num(even) + " (ratio " + num(odd / even) + ")",
                      "ratio >= 10", odd >= 10.0 * even});
    return checks;
}

std::vector<Check> sweep_checks(int resonant_n, double start, double stop, double lo, double hi,
                                bool check_sinh, const PresetOptions& opts) {
    SimulationConfig tmpl;
    if (opts.err) tmpl.err = *opts.err;
    if (opts.stepper) tmpl.stepper = *opts.stepper;
    const auto grid = mass_grid(start, stop, 0.05);
    if (opts.progress)
        *opts.progress << "  sweep n=" << resonant_n << " over " << grid.size() << " masses"
                       << std::endl;
    MassSweepOptions so;
    so.jobs = opts.jobs;
    const auto sweep = mass_sweep(tmpl, grid, resonant_n, 2000.0, so);

    std::vector<Check> checks;
    const auto best = sweep.argmax();
    const double m_best = best < sweep.points.size() ? sweep.points[best].mass : -1.0;
    checks.push_back({"argmax of N_" + std::to_string(resonant_n) + "(2000) over M",
                      "M=" + num(m_best), "M in [" + num(lo) + ", " + num(hi) + "]",
                      m_best >= lo - 1e-9 && m_best <= hi + 1e-9});
    if (check_sinh) {
        double worst = 0.0;
        for (const auto& p : sweep.points)
            if (p.mass >= 0.7 - 1e-9) worst = std::max(worst, relative_change(p.N_resonant, p.prediction));
        checks.push_back({"max rel. deviation from sinh law for M >= 0.7", num(worst), "<= 0.05",
                          worst <= 0.05});
    }
    return checks;
}

SimulationConfig two_mode_config(const PresetOptions& opts) {
    return resonance(exact_coupling_mass(1, 5), 1, 20, 8000.0, 1.0, opts);
}

std::vector<Check> preset_fig9(const PresetOptions& opts) {
    const auto r = run(two_mode_config(opts), opts);
    std::vector<Check> checks;
    const auto j = sample_at(r, 2000.0);
    const double conc = (r.spectrum.N[j][0] + r.spectrum.N[j][4]) / r.spectrum.N_total[j];
    checks.push_back({"(N_1+N_5)/N_total at t=2000", num(conc), ">= 0.99", conc >= 0.99});

    const double s1 = log_slope(r.spectrum.times, mode_series(r, 1), 4000.0, 8000.0);
    const double s5 = log_slope(r.spectrum.times, mode_series(r, 5), 4000.0, 8000.0);
    const double rel = relative_change(s1, s5);
    checks.push_back({"log-slope of N_1 vs N_5 on [4000, 8000]",
                      num(s1) + " vs " + num(s5) + " (rel. " + num(rel) + ")", "within 10%",
                      rel <= 0.10});
    const double n1 = mode_at(r, 1, 8000.0);
    checks.push_back({"N_1(8000)", num(n1), "in [100, 1000]", n1 >= 100.0 && n1 <= 1000.0});
    return checks;
}

std::vector<Check> preset_fig18(const PresetOptions& opts) {
    auto fine_opts = opts;
    fine_opts.err = 1e-12;
    auto coarse_opts = opts;
    coarse_opts.err = 1e-8;
    const double fine = run(two_mode_config(fine_opts), opts).max_defect(1, 5);
    const double coarse = run(two_mode_config(coarse_opts), opts).max_defect(1, 5);
    return {
        {"max |d_k|, k<=5, t<=8000, err=1e-12", num(fine), "<= 1e-6", fine <= 1e-6},
        {"max |d_k|, k<=5, t<=8000, err=1e-8", num(coarse), "<= 1e-3", coarse <= 1e-3},
        {"residual grows with err", num(coarse) + " vs " + num(fine), "err=1e-8 > err=1e-12",
         coarse > fine},
    };
}

std::vector<Check> preset_fig13(const PresetOptions& opts) {
    const auto cfg = resonance(std::sqrt(5.0) * pi, 1, 50, 2000.0, 2000.0, opts);
    const auto r = run(cfg, opts);
    const auto& last = r.spectrum.N.back();
    std::vector<int> order(last.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i) + 1;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return last[static_cast<std::size_t>(a - 1)] > last[static_cast<std::size_t>(b - 1)];
    });
    std::vector<int> top(order.begin(), order.begin() + 5);
    std::sort(top.begin(), top.end());
    const std::vector<int> chain{1, 7, 12, 17, 22};
    auto list = [](const std::vector<int>& v) {
        std::string s;
        for (int n : v) s += (s.empty() ? "" : ",") + std::to_string(n);
        return "{" + s + "}";
    };

    std::vector<Check> checks;
    checks.push_back({"five largest N_n(2000)", list(top), list(chain), top == chain});
    const auto graph = coupling_scan(cfg, 1, cfg.cutoff);
    const auto strong = graph.strong_modes();
    checks.push_back({"coupling_scan strong modes", list(strong), list(chain), strong == chain});
    const struct { int k, l; double quoted; } links[] = {{7, 12, 12.04}, {12, 17, 16.96}, {17, 22, 21.93}};
    for (const auto& link : links) {
        const auto* e = graph.find(link.k, link.l);
        const double lt = e ? e->l_tilde : std::nan("");
        checks.push_back({"l_tilde for link " + std::to_string(link.k) + "->" + std::to_string(link.l),
                          num(lt), num(link.quoted) + " to two decimals",
                          e && std::abs(std::round(lt * 100.0) - std::round(link.quoted * 100.0)) < 0.5});
    }
    return checks;
}

std::vector<Check> preset_cutoff(const PresetOptions& opts) {
    std::vector<Check> checks;
    const int cutoffs[] = {10, 20};
    const int modes[] = {1, 2, 3, 4, 5};
    for (double mass : {0.7, 0.4}) {
        auto cfg = resonance(mass, 1, 20, 6700.0, 6700.0, opts);
        if (opts.progress)
            *opts.progress << "  convergence M=" << num(mass) << " K=10,20 t=6700" << std::endl;
        const auto rep = convergence_check(cfg, cutoffs, modes, 6700.0, opts.jobs);
        const double change = rep.max_relative_change.front();
        checks.push_back({"max_n<=5 |N^(10)-N^(20)|/N^(20) at t=6700, M=" + num(mass), num(change),
                          "<= 0.01", change <= 0.01});
    }
    return checks;
}

std::vector<Check> preset_oracle(const PresetOptions& opts) {
    std::vector<Check> checks;
    {
        auto cfg = resonance(0.7, 1, 4, 50.0, 0.5, opts);
        const auto rec = evolve(cfg, opts.jobs);
        const auto orc = second_order_oracle(cfg);
        double worst = 0.0;
        for (std::size_t j = 0; j < rec.times.size(); ++j)
            for (int m = 1; m <= cfg.cutoff; ++m)
                for (int n = 1; n <= cfg.cutoff; ++n) {
                    const auto& s = rec.states[j][static_cast<std::size_t>(m - 1)];
                    worst = std::max(worst, std::abs(orc.modes[j](m - 1, n - 1) - s.mode_function(n)));
                }
        checks.push_back({"first- vs second-order mode functions, K=4, M=0.7, t<=50", num(worst),
                          "<= 1e-6", worst <= 1e-6});
    }
    {
        auto cfg = resonance(2.0, 1, 8, 100.0, 1.0, opts);
        cfg.epsilon = 0.0;
        const auto rec = evolve(cfg, opts.jobs);
        double n_max = 0.0, b_max = 0.0, a_off = 0.0, a_mod = 0.0;
        for (std::size_t j = 0; j < rec.times.size(); ++j) {
            const auto N = particle_numbers(rec.states[j], cfg, rec.times[j]);
            n_max = std::max(n_max, *std::max_element(N.begin(), N.end()));
            const auto bog = bogoliubov_from_state(rec.states[j], cfg);
            b_max = std::max(b_max, bog.B.cwiseAbs().maxCoeff());
            for (int m = 0; m < cfg.cutoff; ++m)
                for (int n = 0; n < cfg.cutoff; ++n) {
                    const double a = std::abs(bog.A(m, n));
                    if (m == n)
                        a_mod = std::max(a_mod, std::abs(a - 1.0));
                    else
                        a_off = std::max(a_off, a);
                }
        }
        checks.push_back({"static cavity: max N_n(t)", num(n_max), "<= 1e-20", n_max <= 1e-20});
        checks.push_back({"static cavity: max |B_mn|", num(b_max), "0", b_max == 0.0});
        checks.push_back({"static cavity: max |A_mn|, m != n", num(a_off), "0", a_off == 0.0});
        checks.push_back({"static cavity: max ||A_mm| - 1|", num(a_mod), "<= 1e3 * err",
                          a_mod <= 1e3 * cfg.err});
    }
    return checks;
}

struct Preset {
    std::string_view name;
    std::string_view summary;
    std::vector<Check> (*run)(const PresetOptions&);
};

const Preset presets[] = {
    {"fig1", "sinh law for M = 0.7, 2, 3.5 and its breakdown at M = 0.2",
     preset_fig1},
    {"fig2", "M = 0.2 strong-coupling chain at K = 30 up to t = 6700", preset_fig2},
    {"fig5", "n = 1 mass sweep over [0.15, 1.0]",
     [](const PresetOptions& o) { return sweep_checks(1, 0.15, 1.0, 0.3, 0.5, true, o); }},
    {"fig9", "exact 1-5 coupling at M = sqrt(2) pi up to t = 8000", preset_fig9},
    {"fig13", "M = sqrt(5) pi coupling chain at K = 50", preset_fig13},
    {"fig15", "n = 2 mass sweep over [0.4, 1.2]",
     [](const PresetOptions& o) { return sweep_checks(2, 0.4, 1.2, 0.6, 1.0, false, o); }},
    {"fig18", "Bogoliubov residuals of the fig9 run at err = 1e-12 and 1e-8", preset_fig18},
    {"cutoff", "K = 10 vs K = 20 stability for M = 0.7 and 0.4 at t = 6700", preset_cutoff},
    {"oracle", "second-order oracle and static-cavity checks", preset_oracle},
};

const Preset& find_preset(std::string_view name) {
    for (const auto& p : presets)
        if (p.name == name) return p;
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace

const std::vector<std::string_view>& preset_names() {
    static const std::vector<std::string_view> names = [] {
        std::vector<std::string_view> v;
        for (const auto& p : presets) v.push_back(p.name);
        return v;
    }();
    return names;
}

std::string_view preset_summary(std::string_view name) { return find_preset(name).summary; }

std::vector<Check> run_preset(std::string_view name, const PresetOptions& opts) {
    return find_preset(name).run(opts);
}

}  // namespace dcesim::cli
