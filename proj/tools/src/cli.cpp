#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dcesim/analysis.hpp"
#include "dcesim/bogoliubov.hpp"
#include "dcesim/errors.hpp"
#include "dcesim/model.hpp"
#include "dcesim/parallel.hpp"
#include "dcesim/version.hpp"
#include "output.hpp"
#include "presets.hpp"

namespace dcesim::cli {

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("invalid number for ") + what + ": '" + s + "'");
}

int parse_int(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("invalid integer for ") + what + ": '" + s + "'");
}

Cavity3DSpec parse_cavity(const std::string& s) {
    const auto p = split(s, ',');
    if (p.size() != 4) throw ConfigError("--cavity expects ly,lz,ny,nz");
    Cavity3DSpec spec{parse_double(p[0], "ly"), parse_double(p[1], "lz"), parse_int(p[2], "ny"),
                      parse_int(p[3], "nz")};
    spec.validate();
    return spec;
}

std::vector<double> parse_grid(const std::string& s) {
    if (s.find(':') != std::string::npos) {
        const auto p = split(s, ':');
        if (p.size() != 3) throw ConfigError("--mass-grid expects start:stop:step or a list");
        return mass_grid(parse_double(p[0], "grid start"), parse_double(p[1], "grid stop"),
                         parse_double(p[2], "grid step"));
    }
    std::vector<double> grid;
    for (const auto& item : split(s, ',')) grid.push_back(parse_double(item, "grid mass"));
    if (grid.empty()) throw ConfigError("--mass-grid is empty");
    return grid;
}

// Flags shared by the commands that set up a physical configuration.
struct PhysicsFlags {
    std::optional<double> mass;
    std::string cavity;
    std::string exact;
    std::optional<int> resonant_n;
    std::optional<double> omega;
    double epsilon = 0.001;
    std::optional<int> kmax;
    double t_max = 100.0;
    double sample_dt = 1.0;
    double err = 1e-10;
    std::string stepper = "rk8pd";
    std::string out;
    unsigned jobs = 0;
};

struct ResolvedMass {
    double mass = 0.0;
    std::optional<Cavity3DSpec> cavity;
};

void add_mass_flags(CLI::App* cmd, PhysicsFlags& f) {
    auto* mass = cmd->add_option("--mass", f.mass, "Mass parameter M = l0 k_par");
    auto* cav = cmd->add_option("--cavity", f.cavity, "Transverse geometry ly,lz,ny,nz");
    auto* exact = cmd->add_option("--mass-exact-coupling", f.exact,
                                  "Mass coupling modes n,k exactly (3 Omega_n = Omega_k)");
    mass->excludes(cav)->excludes(exact);
    cav->excludes(exact);
}

void add_drive_flags(CLI::App* cmd, PhysicsFlags& f) {
    auto* rn = cmd->add_option("--resonant-n", f.resonant_n, "Drive at omega = 2 Omega_n (default n=1)");
    auto* om = cmd->add_option("--omega", f.omega, "Wall angular frequency");
    rn->excludes(om);
}

void add_numeric_flags(CLI::App* cmd, PhysicsFlags& f) {
    cmd->add_option("--epsilon", f.epsilon, "Relative oscillation amplitude")->capture_default_str();
    cmd->add_option("--kmax", f.kmax, "Mode cutoff K (default 30 for M <= 0.2, else 20)");
    cmd->add_option("--err", f.err, "Absolute and relative integrator tolerance")->capture_default_str();
    cmd->add_option("--stepper", f.stepper, "rkf45 or rk8pd")->capture_default_str();
    cmd->add_option("--jobs", f.jobs, "Worker threads (0: all cores)")->envname("DCESIM_JOBS");
}

ResolvedMass resolve_mass(const PhysicsFlags& f, bool required) {
    ResolvedMass r;
    if (f.mass) {
        r.mass = *f.mass;
    } else if (!f.cavity.empty()) {
        r.cavity = parse_cavity(f.cavity);
        r.mass = kpar_from_cavity(*r.cavity);  // M = l0 k_par with l0 = 1
    } else if (!f.exact.empty()) {
        const auto p = split(f.exact, ',');
        if (p.size() != 2) throw ConfigError("--mass-exact-coupling expects n,k");
        r.mass = exact_coupling_mass(parse_int(p[0], "n"), parse_int(p[1], "k"));
    } else if (required) {
        throw ConfigError("one of --mass, --cavity, --mass-exact-coupling is required");
    }
    return r;
}

SimulationConfig build_config(const PhysicsFlags& f, double mass) {
    SimulationConfig cfg;
    cfg.mass = mass;
    cfg.epsilon = f.epsilon;
    cfg.cutoff = f.kmax ? *f.kmax : default_cutoff(mass);
    cfg.t_max = f.t_max;
    cfg.sample_dt = f.sample_dt;
    cfg.err = f.err;
    cfg.stepper = stepper_from_string(f.stepper);
    const int n = f.resonant_n.value_or(1);
    if (n < 1) throw ConfigError("--resonant-n must be >= 1");
    cfg.omega = f.omega ? *f.omega : 2.0 * omega_static(n, cfg);
    return cfg;
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) err << "warning: " << w << '\n';
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

json failure_json(const IntegrationFailure& e) {
    return {{"message", e.what()}, {"column", e.column()}, {"time", e.time()}};
}

int cmd_simulate(const PhysicsFlags& f, std::ostream& out, std::ostream& err) {
    const auto m = resolve_mass(f, true);
    const auto cfg = build_config(f, m.mass);
    const auto warnings = cfg.validate();
    print_warnings(warnings, err);
    if (f.out.empty()) throw ConfigError("--out is required");

    auto manifest = base_manifest("simulate", cfg, m.cavity);
    manifest["warnings"] = warnings;
    const auto start = Clock::now();
    try {
        const auto run = compute_spectrum(cfg, f.jobs);
        std::ostringstream csv;
        write_spectrum_csv(csv, run);
        write_text_file(f.out, csv.str());

        const auto res = residual_summary(run);
        manifest["status"] = "ok";
        manifest["wall_time_s"] = seconds_since(start);
        manifest["integrator"]["stats"] = stats_json(run.stats);
        manifest["residuals"] = {{"max_abs_d_k_leading_5", res.max_leading},
                                 {"max_abs_d_k_trailing_5", res.max_trailing}};
        // Literal period-reduced particle numbers at the last period-aligned sample.
        for (std::size_t j = run.spectrum.times.size(); j-- > 1;) {
            if (!run.period_aligned[j]) continue;
            manifest["period_reduced"] = {{"t", run.spectrum.times[j]},
                                          {"N", run.N_period_reduced[j]},
                                          {"N_weighted", run.spectrum.N[j]}};
            break;
        }
        write_manifest(f.out, manifest);
        out << "wrote " << f.out << " (" << run.spectrum.times.size() << " samples, K=" << cfg.cutoff
            << ", N_total(t_max)=" << format_double(run.spectrum.N_total.back()) << ")\n";
        return exit_ok;
    } catch (const IntegrationFailure& e) {
        manifest["status"] = "failed";
        manifest["wall_time_s"] = seconds_since(start);
        manifest["failure"] = failure_json(e);
        write_manifest(f.out, manifest);
        err << "integration failed: " << e.what() << '\n';
        return exit_integration;
    }
}

struct SweepFlags {
    std::string grid;
    double t_eval = 2000.0;
};

int cmd_sweep(const PhysicsFlags& f, const SweepFlags& s, std::ostream& out, std::ostream& err) {
    if (s.grid.empty()) throw ConfigError("--mass-grid is required");
    if (f.out.empty()) throw ConfigError("--out is required");
    const auto grid = parse_grid(s.grid);
    const int n = f.resonant_n.value_or(1);

    SimulationConfig tmpl;
    tmpl.epsilon = f.epsilon;
    tmpl.err = f.err;
    tmpl.stepper = stepper_from_string(f.stepper);
    if (f.kmax) tmpl.cutoff = *f.kmax;
    print_warnings(tmpl.validate(), err);

    MassSweepOptions opts;
    opts.jobs = f.jobs;
    opts.auto_cutoff = !f.kmax;
    opts.keep_going = true;
    const auto start = Clock::now();
    const auto sweep = mass_sweep(tmpl, grid, n, s.t_eval, opts);

    std::ostringstream csv;
    write_sweep_csv(csv, sweep);
    write_text_file(f.out, csv.str());

    auto manifest = base_manifest("sweep", tmpl, std::nullopt);
    manifest["config"]["mass"] = nullptr;
    manifest["config"]["omega"] = nullptr;
    manifest["config"]["t_max"] = s.t_eval;
    manifest["config"]["cutoff"] = f.kmax ? json(*f.kmax) : json("auto");
    manifest["sweep"] = {{"resonant_n", n}, {"t_eval", s.t_eval}, {"points", grid.size()}};
    IntegrationStats stats;
    double worst = 0.0;
    json notes = json::array();
    json cutoffs = json::array();
    for (const auto& p : sweep.points) {
        stats += p.stats;
        cutoffs.push_back(p.cutoff);
        if (p.ok())
            worst = std::max(worst, p.max_defect);
        else
            notes.push_back("M=" + format_double(p.mass) + ": " + p.error);
    }
    manifest["sweep"]["cutoffs"] = cutoffs;
    manifest["integrator"]["stats"] = stats_json(stats);
    manifest["residuals"] = {{"max_abs_d_k_leading_5", worst}};
    manifest["notes"] = notes;
    manifest["wall_time_s"] = seconds_since(start);
    const bool enough = 10 * sweep.succeeded() >= 9 * sweep.points.size();
    manifest["status"] = enough ? "ok" : "failed";
    write_manifest(f.out, manifest);

    out << "wrote " << f.out << " (" << sweep.succeeded() << "/" << sweep.points.size()
        << " points)";
    if (const auto best = sweep.argmax(); best < sweep.points.size())
        out << ", argmax M=" << format_double(sweep.points[best].mass);
    out << '\n';
    return enough ? exit_ok : exit_integration;
}

struct CouplingFlags {
    int max_mode = 50;
    double threshold = default_strong_threshold;
    bool csv = false;
};

int cmd_couplings(const PhysicsFlags& f, const CouplingFlags& c, std::ostream& out) {
    const auto m = resolve_mass(f, true);
    SimulationConfig cfg;
    cfg.mass = m.mass;
    if (m.mass < 0.0) throw ConfigError("mass must be >= 0");
    const int n = f.resonant_n.value_or(1);
    if (n < 1) throw ConfigError("--resonant-n must be >= 1");
    cfg.omega = f.omega ? *f.omega : 0.0;
    if (f.omega && !(*f.omega > 0.0)) throw ConfigError("--omega must be > 0");
    const auto graph = coupling_scan(cfg, n, c.max_mode, c.threshold);

    if (c.csv)
        write_couplings_csv(out, graph);
    else
        write_couplings_table(out, graph);
    if (!f.out.empty()) {
        std::ostringstream csv;
        write_couplings_csv(csv, graph);
        write_text_file(f.out, csv.str());
        auto manifest = base_manifest("couplings", cfg, m.cavity);
        manifest["config"]["omega"] = graph.omega;
        manifest["couplings"] = {{"resonant_n", n},
                                 {"max_mode", c.max_mode},
                                 {"strong_threshold", c.threshold},
                                 {"strong_modes", graph.strong_modes()}};
        manifest["status"] = "ok";
        write_manifest(f.out, manifest);
    }
    return exit_ok;
}

int cmd_validate(const std::string& preset, const PhysicsFlags& f, bool err_given,
                 bool stepper_given, std::ostream& out, std::ostream& err) {
    PresetOptions opts;
    opts.jobs = f.jobs;
    if (err_given) opts.err = f.err;
    if (stepper_given) opts.stepper = stepper_from_string(f.stepper);
    opts.progress = &err;
    out << "preset " << preset << ": " << preset_summary(preset) << '\n';
    const auto start = Clock::now();
    const auto checks = run_preset(preset, opts);
    int failed = 0;
    for (const auto& c : checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": measured " << c.measured
            << ", expected " << c.expected << '\n';
        if (!c.pass) ++failed;
    }
    out << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size()
        << " checks passed in " << std::fixed << std::setprecision(1) << seconds_since(start)
        << " s\n" << std::defaultfloat;
    return failed == 0 ? exit_ok : exit_check_failed;
}

// Replaces "--config FILE" by the file's flat key=value settings, each
// appended as "--key=value" unless the flag is already on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("--config needs a file");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_config(in);
    } catch (const CLI::ParseError& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    auto given = [&args](const std::string& flag) {
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    for (const auto& item : items) {
        if (!item.parents.empty() || item.name == "++" || item.name == "--") continue;
        const std::string flag = "--" + item.name;
        if (given(flag)) continue;
        std::string value;
        for (const auto& v : item.inputs) value += (value.empty() ? "" : ",") + v;
        args.push_back(flag + "=" + value);
    }
    return args;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Particle creation in a vibrating cavity with a massive scalar field", "dcesim"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    PhysicsFlags phys;

    auto* sim = app.add_subcommand("simulate", "Evolve all modes and write the particle spectrum");
    add_mass_flags(sim, phys);
    add_drive_flags(sim, phys);
    add_numeric_flags(sim, phys);
    sim->add_option("--tmax", phys.t_max, "Final time")->capture_default_str();
    sim->add_option("--sample-dt", phys.sample_dt, "Output sampling interval")->capture_default_str();
    sim->add_option("--out", phys.out, "Output CSV path");
    sim->add_option("--config", "Read flat key=value settings; flags take precedence");

    SweepFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "Resonant particle number as a function of mass");
    sweep->add_option("--mass-grid", sweep_flags.grid, "start:stop:step or m1,m2,...");
    sweep->add_option("--resonant-n", phys.resonant_n, "Resonant mode n (omega = 2 Omega_n per point)");
    sweep->add_option("--t-eval", sweep_flags.t_eval, "Evaluation time")->capture_default_str();
    add_numeric_flags(sweep, phys);
    sweep->add_option("--out", phys.out, "Output CSV path");
    sweep->add_option("--config", "Read flat key=value settings; flags take precedence");

    CouplingFlags coupling_flags;
    auto* couplings = app.add_subcommand("couplings", "List resonant intermode couplings");
    add_mass_flags(couplings, phys);
    add_drive_flags(couplings, phys);
    couplings->add_option("--max-mode", coupling_flags.max_mode, "Highest mode considered")
        ->capture_default_str();
    couplings->add_option("--threshold", coupling_flags.threshold, "Strong-coupling detuning threshold")
        ->capture_default_str();
    couplings->add_flag("--csv", coupling_flags.csv, "Print CSV rows instead of a table");
    couplings->add_option("--out", phys.out, "Also write CSV rows and a manifest here");
    couplings->add_option("--config", "Read flat key=value settings; flags take precedence");

    std::string preset;
    bool list_presets = false;
    auto* validate = app.add_subcommand("validate", "Run a validation preset");
    std::string preset_help = "One of:";
    for (auto name : preset_names()) preset_help += " " + std::string(name);
    validate->add_option("--preset", preset, preset_help);
    validate->add_flag("--list", list_presets, "List presets and exit");
    auto* v_err = validate->add_option("--err", phys.err, "Override the integrator tolerance");
    auto* v_step = validate->add_option("--stepper", phys.stepper, "Override the stepper");
    validate->add_option("--jobs", phys.jobs, "Worker threads (0: all cores)")->envname("DCESIM_JOBS");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*sim) return cmd_simulate(phys, out, err);
        if (*sweep) return cmd_sweep(phys, sweep_flags, out, err);
        if (*couplings) return cmd_couplings(phys, coupling_flags, out);
        if (*validate) {
            if (list_presets) {
                for (auto name : preset_names())
                    out << name << "  " << preset_summary(name) << '\n';
                return exit_ok;
            }
            if (preset.empty()) throw ConfigError("--preset is required");
            return cmd_validate(preset, phys, v_err->count() > 0, v_step->count() > 0, out, err);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const NoSolution& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const IntegrationFailure& e) {
        err << "integration failed: " << e.what() << '\n';
        return exit_integration;
    }
    return exit_usage;
}

}  // namespace dcesim::cli
