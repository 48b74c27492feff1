#include "dcesim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "dcesim/errors.hpp"
#include "dcesim/model.hpp"
#include "dcesim/parallel.hpp"

namespace dcesim {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

LinkClass classify(double detuning, double threshold) {
    if (detuning <= threshold) return LinkClass::strong;
    if (detuning <= 10.0 * threshold) return LinkClass::weak;
    return LinkClass::none;
}

// A target frequency reached from mode k, with the chain phase it carries.
struct Candidate {
    char branch;
    double link_target;
    double chain_target;
};

}  // namespace

double sinh_prediction(int n, const SimulationConfig& cfg, double t) {
    const double gamma = n * pi * pi / (2.0 * omega_static(n, cfg) * cfg.l0 * cfg.l0);
    const double s = std::sinh(n * gamma * cfg.epsilon * t);
    return s * s;
}

double mode_index_for_frequency(double target, const SimulationConfig& cfg) {
    const double kpar = cfg.mass / cfg.l0;
    const double kx2 = target * target - kpar * kpar;
    if (!(target > 0.0) || !(kx2 > 0.0)) return nan;
    return std::sqrt(kx2) * cfg.l0 / pi;
}

std::string_view to_string(LinkClass c) {
    switch (c) {
        case LinkClass::strong: return "strong";
        case LinkClass::weak: return "weak";
        case LinkClass::none: return "none";
    }
    return "none";
}

std::vector<int> CouplingGraph::strong_modes() const {
    std::vector<int> modes{resonant_n};
    for (const auto& e : entries)
        if (e.cls == LinkClass::strong) modes.push_back(e.l);
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    return modes;
}

const CouplingEntry* CouplingGraph::find(int k, int l) const {
    for (const auto& e : entries)
        if (e.k == k && e.l == l) return &e;
    return nullptr;
}

CouplingGraph coupling_scan(const SimulationConfig& cfg, int resonant_n, int max_mode,
                            double strong_threshold) {
    if (resonant_n < 1) throw ConfigError("resonant mode must be >= 1");
    if (max_mode < 1) throw ConfigError("max_mode must be >= 1");
    if (!(strong_threshold > 0.0)) throw ConfigError("strong threshold must be > 0");

    CouplingGraph graph;
    graph.resonant_n = resonant_n;
    graph.strong_threshold = strong_threshold;
    graph.omega = cfg.omega > 0.0 ? cfg.omega : 2.0 * omega_static(resonant_n, cfg);
    const double omega = graph.omega;

    // Chain phase of every reached mode: the frequency it is driven at.
    std::map<int, double> phase{{resonant_n, omega_static(resonant_n, cfg)}};
    std::deque<int> queue{resonant_n};

    while (!queue.empty()) {
        const int k = queue.front();
        queue.pop_front();
        const double wk = omega_static(k, cfg);
        const double phk = phase.at(k);
        const Candidate candidates[] = {
            {'+', omega - wk, omega - phk},
            {'-', wk + omega, phk + omega},
            {'-', wk - omega, phk - omega},
        };
        for (const auto& c : candidates) {
            const double l_tilde = mode_index_for_frequency(c.link_target, cfg);
            if (!std::isfinite(l_tilde)) continue;
            const int l = std::max(1, static_cast<int>(std::lround(l_tilde)));
            if (l == k || l > max_mode || phase.contains(l)) continue;

            CouplingEntry e;
            e.k = k;
            e.branch = c.branch;
            e.l_tilde = l_tilde;
            e.l = l;
            e.link_detuning = std::abs(l - l_tilde) / l;
            const double l_chain = mode_index_for_frequency(std::abs(c.chain_target), cfg);
            e.detuning = std::isfinite(l_chain) ? std::abs(l - l_chain) / l : e.link_detuning;
            e.cls = classify(e.detuning, strong_threshold);
            if (e.cls == LinkClass::strong) {
                phase.emplace(l, std::abs(c.chain_target));
                queue.push_back(l);
            }
            graph.entries.push_back(e);
        }
    }

    std::stable_sort(graph.entries.begin(), graph.entries.end(),
                     [](const CouplingEntry& a, const CouplingEntry& b) {
                         if (a.k != b.k) return a.k < b.k;
                         if (a.branch != b.branch) return a.branch < b.branch;
                         return a.l < b.l;
                     });
    return graph;
}

double exact_coupling_mass(int n, int k) {
    if (n < 1 || k < 1) throw ConfigError("mode indices must be >= 1");
    if (k <= 3 * n) {
        std::ostringstream msg;
        msg << "no mass couples modes " << n << " and " << k << " exactly (needs k > 3n)";
        throw NoSolution(msg.str());
    }
    const double kk = k, nn = n;
    return pi * std::sqrt((kk * kk - 9.0 * nn * nn) / 8.0);
}

CouplingPartner coupling_partner(int n, double mass, double tolerance) {
    SimulationConfig cfg;
    cfg.mass = mass;
    CouplingPartner p;
    p.l_tilde = mode_index_for_frequency(3.0 * omega_static(n, cfg), cfg);
    p.k = static_cast<int>(std::lround(p.l_tilde));
    p.exact = std::abs(p.k - p.l_tilde) <= tolerance * p.k;
    return p;
}

int default_cutoff(double mass) { return mass <= 0.2 ? 30 : 20; }

std::vector<double> mass_grid(double start, double stop, double step) {
    if (!(step > 0.0)) throw ConfigError("mass grid step must be > 0");
    if (!(start >= 0.0) || !(stop >= start)) throw ConfigError("mass grid needs 0 <= start <= stop");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
    return grid;
}

std::size_t MassSweepResult::succeeded() const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const auto& p) { return p.ok(); }));
}

std::size_t MassSweepResult::argmax() const {
    std::size_t best = points.size();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].ok()) continue;
        if (best == points.size() || points[i].N_resonant > points[best].N_resonant) best = i;
    }
    return best;
}

MassSweepResult mass_sweep(const SimulationConfig& tmpl, std::span<const double> masses,
                           int resonant_n, double t_eval, const MassSweepOptions& opts) {
    if (resonant_n < 1) throw ConfigError("resonant mode must be >= 1");
    if (!(t_eval > 0.0)) throw ConfigError("t_eval must be > 0");

    MassSweepResult result;
    result.resonant_n = resonant_n;
    result.t_eval = t_eval;
    result.points.resize(masses.size());

    std::vector<SimulationConfig> configs(masses.size(), tmpl);
    for (std::size_t i = 0; i < masses.size(); ++i) {
        auto& cfg = configs[i];
        cfg.mass = masses[i];
        cfg.omega = 2.0 * omega_static(resonant_n, cfg);
        cfg.t_max = t_eval;
        cfg.sample_dt = t_eval;
        if (opts.auto_cutoff) cfg.cutoff = default_cutoff(cfg.mass);
        if (resonant_n > cfg.cutoff) throw ConfigError("resonant mode exceeds the cutoff");
        cfg.validate();
    }

    parallel_for(masses.size(), opts.jobs, [&](std::size_t i) {
        const auto& cfg = configs[i];
        auto& pt = result.points[i];
        pt.mass = cfg.mass;
        pt.cutoff = cfg.cutoff;
        pt.prediction = sinh_prediction(resonant_n, cfg, t_eval);
        pt.partner = coupling_partner(resonant_n, cfg.mass);
        try {
            const auto run = compute_spectrum(cfg, 1);
            pt.N_resonant = run.spectrum.N.back()[static_cast<std::size_t>(resonant_n - 1)];
            pt.max_defect = run.max_defect(1, 5);
            pt.stats = run.stats;
        } catch (const IntegrationFailure& e) {
            if (!opts.keep_going) {
                std::ostringstream msg;
                msg << "mass M=" << cfg.mass << ": " << e.what();
                throw IntegrationFailure(msg.str(), e.column(), e.time());
            }
            pt.N_resonant = nan;
            pt.error = e.what();
        }
    });
    return result;
}

double relative_change(double a, double b) {
    if (a == b) return 0.0;
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(a - b) / std::abs(b);
}

ConvergenceReport convergence_check(const SimulationConfig& cfg, std::span<const int> cutoffs,
                                    std::span<const int> modes, double t_eval, unsigned jobs) {
    if (cutoffs.empty()) throw ConfigError("convergence check needs at least one cutoff");
    if (!std::is_sorted(cutoffs.begin(), cutoffs.end()))
        throw ConfigError("cutoffs must be ascending");
    for (int n : modes)
        if (n < 1 || n > cutoffs.front()) throw ConfigError("monitored mode outside 1..K_min");

    ConvergenceReport report;
    report.cutoffs.assign(cutoffs.begin(), cutoffs.end());
    report.modes.assign(modes.begin(), modes.end());
    for (int K : cutoffs) {
        auto c = cfg;
        c.cutoff = K;
        c.t_max = t_eval;
        c.sample_dt = t_eval;
        const auto run = compute_spectrum(c, jobs);
        std::vector<double> row;
        for (int n : modes) row.push_back(run.spectrum.N.back()[static_cast<std::size_t>(n - 1)]);
        report.N.push_back(std::move(row));
    }
    for (std::size_t i = 0; i + 1 < report.N.size(); ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < modes.size(); ++j)
            worst = std::max(worst, relative_change(report.N[i][j], report.N[i + 1][j]));
        report.max_relative_change.push_back(worst);
    }
    return report;
}

double log_slope(std::span<const double> times, std::span<const double> values, double t_from,
                 double t_to) {
    if (times.size() != values.size()) throw ShapeMismatch("log_slope: times and values differ in length");
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_from || times[i] > t_to || !(values[i] > 0.0)) continue;
        ts.push_back(times[i]);
        ys.push_back(std::log(values[i]));
    }
    if (ts.size() < 2) throw ConfigError("log_slope needs at least two positive samples in range");
    const double n = static_cast<double>(ts.size());
    double t_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        t_mean += ts[i] / n;
        y_mean += ys[i] / n;
    }
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - t_mean) * (ts[i] - t_mean);
        sty += (ts[i] - t_mean) * (ys[i] - y_mean);
    }
    if (stt == 0.0) throw ConfigError("log_slope: degenerate time range");
    return sty / stt;
}

}  // namespace dcesim
