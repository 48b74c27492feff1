#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

#include "dcesim/errors.hpp"
#include "dcesim/version.hpp"

namespace dcesim::cli {

std::string format_double(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_spectrum_csv(std::ostream& os, const SpectrumRun& run) {
    const int K = run.config.cutoff;
    os << 't';
    for (int n = 1; n <= K; ++n) os << ",N_" << n;
    os << ",N_total";
    for (int k = 1; k <= K; ++k) os << ",d_" << k;
    os << ",period_aligned\n";

    const auto& spec = run.spectrum;
    for (std::size_t j = 0; j < spec.times.size(); ++j) {
        os << format_double(spec.times[j]);
        for (double v : spec.N[j]) os << ',' << format_double(v);
        os << ',' << format_double(spec.N_total[j]);
        for (double v : run.defect[j]) os << ',' << format_double(v);
        os << ',' << static_cast<int>(run.period_aligned[j]) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const MassSweepResult& sweep) {
    os << "M,N_resonant,sinh_prediction,exact_coupling_flag,coupled_partner\n";
    for (const auto& p : sweep.points) {
        os << format_double(p.mass) << ',' << format_double(p.N_resonant) << ','
           << format_double(p.prediction) << ',' << (p.partner.exact ? 1 : 0) << ','
           << p.partner.k << '\n';
    }
}

void write_couplings_csv(std::ostream& os, const CouplingGraph& graph) {
    os << "k,branch,l_tilde,l,detuning,class\n";
    for (const auto& e : graph.entries) {
        os << e.k << ',' << e.branch << ',' << format_double(e.l_tilde) << ',' << e.l << ','
           << format_double(e.detuning) << ',' << to_string(e.cls) << '\n';
    }
}

void write_couplings_table(std::ostream& os, const CouplingGraph& graph) {
    os << "resonant mode " << graph.resonant_n << ", omega " << std::setprecision(10)
       << graph.omega << ", strong threshold " << graph.strong_threshold << '\n';
    os << std::setw(5) << "k" << std::setw(8) << "branch" << std::setw(14) << "l_tilde"
       << std::setw(5) << "l" << std::setw(14) << "detuning" << std::setw(14) << "link_det"
       << "  class\n";
    for (const auto& e : graph.entries) {
        os << std::setw(5) << e.k << std::setw(8) << e.branch << std::setw(14) << std::fixed
           << std::setprecision(6) << e.l_tilde << std::setw(5) << e.l << std::setw(14)
           << std::scientific << std::setprecision(3) << e.detuning << std::setw(14)
           << e.link_detuning << "  " << to_string(e.cls) << '\n';
        os << std::defaultfloat;
    }
    os << "strongly coupled modes:";
    for (int n : graph.strong_modes()) os << ' ' << n;
    os << '\n';
}

std::filesystem::path manifest_path(const std::filesystem::path& data_file) {
    auto p = data_file;
    p.replace_extension(".manifest.json");
    return p;
}

ResidualSummary residual_summary(const SpectrumRun& run) {
    const int K = run.config.cutoff;
    return {run.max_defect(1, 5), run.max_defect(std::max(1, K - 4), K)};
}

nlohmann::json config_json(const SimulationConfig& cfg) {
    return {{"l0", cfg.l0},
            {"epsilon", cfg.epsilon},
            {"omega", cfg.omega},
            {"mass", cfg.mass},
            {"cutoff", cfg.cutoff},
            {"err", cfg.err},
            {"t_max", cfg.t_max},
            {"sample_dt", cfg.sample_dt},
            {"stepper", std::string(to_string(cfg.stepper))}};
}

nlohmann::json cavity_json(const Cavity3DSpec& spec) {
    return {{"ly", spec.ly}, {"lz", spec.lz}, {"ny", spec.ny}, {"nz", spec.nz}};
}

nlohmann::json stats_json(const IntegrationStats& stats) {
    return {{"accepted_steps", stats.accepted},
            {"rejected_steps", stats.rejected},
            {"rhs_evaluations", stats.evaluations}};
}

nlohmann::json base_manifest(const std::string& command, const SimulationConfig& cfg,
                             const std::optional<Cavity3DSpec>& cavity) {
    nlohmann::json m;
    m["tool"] = "dcesim";
    m["version"] = version;
    m["command"] = command;
    m["config"] = config_json(cfg);
    m["cavity"] = cavity ? cavity_json(*cavity) : nlohmann::json(nullptr);
    m["integrator"] = {{"stepper", std::string(to_string(cfg.stepper))},
                       {"library", "GSL odeiv2"},
                       {"abs_tolerance", cfg.err},
                       {"rel_tolerance", cfg.err}};
    return m;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out << contents;
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

void write_manifest(const std::filesystem::path& data_file, const nlohmann::json& manifest) {
    write_text_file(manifest_path(data_file), manifest.dump(2) + "\n");
}

}  // namespace dcesim::cli
