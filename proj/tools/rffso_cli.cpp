// rffso: throughput/outage analysis of hybrid RF/FSO links under HARQ.
//
// Subcommands: analyze (closed forms at one operating point), simulate
// (Monte Carlo at one point), sweep (dataset over a grid), validate
// (cross-method tolerance report), harq-gain (SNR gain of HARQ at a target
// outage). Exit codes: 0 ok, 1 validation failure, 2 usage/config error,
// 3 numeric convergence failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rffso/quadrature.hpp"
#include "rffso/sweep.hpp"

using nlohmann::json;

namespace {

struct CommonOptions {
    std::string preset;
    std::string config_path;
    std::string out_path;
    std::optional<uint64_t> seed;
    std::optional<uint64_t> trials;
    std::vector<std::string> methods;
    bool no_header_timestamp = false;
    int workers = 0;

    // field-by-field overrides
    std::optional<double> snr_db, xi, rate, psi, split;
    std::optional<int> m_max, n_fso;
    std::optional<std::string> detection;
    std::optional<bool> ideal_pa;
    std::optional<double> epsilon, vartheta, p_max_db;
    std::optional<double> alpha, beta, mean_gain;
    std::optional<std::string> axis;
    std::vector<double> grid;
};

void add_common_options(CLI::App* cmd, CommonOptions& opt, bool with_sweep_controls) {
    cmd->add_option("--preset", opt.preset, "Named parameter bundle (fig3|fig4|fig5|fig6|smoke)");
    cmd->add_option("--config", opt.config_path, "JSON config file (overrides the preset)");
    cmd->add_option("--out", opt.out_path, "Output dataset path (.csv or .json)");
    cmd->add_option("--seed", opt.seed, "Monte Carlo seed");
    cmd->add_option("--trials", opt.trials, "Monte Carlo trials");
    cmd->add_option("--methods", opt.methods, "Methods: exact,linearized,asymptotic,monte-carlo")
        ->delimiter(',');
    cmd->add_flag("--no-header-timestamp", opt.no_header_timestamp,
                  "Suppress the timestamp header line in CSV output");
    cmd->add_option("--workers", opt.workers, "Worker threads (0 = auto)");

    cmd->add_option("--snr-db", opt.snr_db, "Total SNR in dB");
    cmd->add_option("--split", opt.split, "Fraction of total power on the FSO link");
    cmd->add_option("--xi", opt.xi, "Pointing-error parameter");
    cmd->add_option("--alpha", opt.alpha, "Large-scale scintillation shape");
    cmd->add_option("--beta", opt.beta, "Small-scale scintillation shape");
    cmd->add_option("--mean-gain", opt.mean_gain, "E[G_FSO] normalization");
    cmd->add_option("--rate", opt.rate, "Initial code rate R (npcu)");
    cmd->add_option("--psi", opt.psi, "RF-to-FSO relative symbol rate");
    cmd->add_option("--m-max", opt.m_max, "Maximum HARQ transmissions M");
    cmd->add_option("--n-fso", opt.n_fso, "FSO realizations per round N");
    cmd->add_option("--detection", opt.detection, "FSO detection: heterodyne|imdd");
    cmd->add_option("--ideal-pa", opt.ideal_pa, "Ideal power amplifier (true/false)");
    cmd->add_option("--epsilon", opt.epsilon, "Max PA efficiency");
    cmd->add_option("--vartheta", opt.vartheta, "PA class parameter");
    cmd->add_option("--p-max-db", opt.p_max_db, "Max PA output power (dB)");
    if (with_sweep_controls) {
        cmd->add_option("--axis", opt.axis, "Sweep axis: snr_db|xi|n_fso|rate|m_max");
        cmd->add_option("--grid", opt.grid, "Sweep grid values")->delimiter(',');
    }
}

rffso::Detection detection_from_string(const std::string& s) {
    if (s == "heterodyne" || s == "het") return rffso::Detection::heterodyne;
    if (s == "imdd" || s == "im/dd") return rffso::Detection::imdd;
    throw std::invalid_argument("unknown detection mode: " + s);
}

void apply_config_file(rffso::SweepSpec& spec, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json doc = json::parse(in);

    if (doc.contains("fso")) {
        const auto& section = doc["fso"];
        auto& fso = spec.base.fso;
        if (section.contains("alpha")) fso.alpha = section["alpha"];
        if (section.contains("beta")) fso.beta = section["beta"];
        if (section.contains("xi")) fso.xi = section["xi"];
        if (section.contains("mean_gain")) fso.mean_gain = section["mean_gain"];
        if (section.contains("detection"))
            fso.detection = detection_from_string(section["detection"]);
    }
    if (doc.contains("rf")) {
        const auto& section = doc["rf"];
        auto& rf = spec.base.rf;
        if (section.contains("nu")) rf.nu = section["nu"];
        if (section.contains("omega")) rf.omega = section["omega"];
        if (section.contains("ideal_pa") && section["ideal_pa"].get<bool>()) {
            rf.epsilon = 1.0;
            rf.vartheta = 0.0;
            rf.p_max = std::numeric_limits<double>::infinity();
        }
        if (section.contains("epsilon")) rf.epsilon = section["epsilon"];
        if (section.contains("vartheta")) rf.vartheta = section["vartheta"];
        if (section.contains("p_max_db"))
            rf.p_max = std::pow(10.0, section["p_max_db"].get<double>() / 10.0);
    }
    if (doc.contains("harq")) {
        const auto& section = doc["harq"];
        auto& harq = spec.base.harq;
        if (section.contains("m_max")) harq.m_max = section["m_max"];
        if (section.contains("rate")) harq.rate = section["rate"];
        if (section.contains("n_fso")) harq.n_fso = section["n_fso"];
        if (section.contains("psi")) harq.psi = section["psi"];
    }
    if (doc.contains("power")) {
        const auto& section = doc["power"];
        if (section.contains("snr_db")) spec.base.power.snr_db = section["snr_db"];
        if (section.contains("split")) spec.base.power.split = section["split"];
    }
    if (doc.contains("mc")) {
        const auto& section = doc["mc"];
        if (section.contains("trials")) spec.base.mc.trials = section["trials"];
        if (section.contains("seed")) spec.base.mc.seed = section["seed"];
        if (section.contains("antithetic")) spec.base.mc.antithetic = section["antithetic"];
    }
    if (doc.contains("sweep")) {
        const auto& section = doc["sweep"];
        if (section.contains("axis")) spec.axis = rffso::axis_from_string(section["axis"]);
        if (section.contains("grid")) spec.grid = section["grid"].get<std::vector<double>>();
        if (section.contains("methods")) {
            spec.methods.clear();
            for (const auto& m : section["methods"])
                spec.methods.push_back(rffso::method_from_string(m));
        }
    }
}

rffso::SweepSpec build_spec(const CommonOptions& opt) {
    rffso::SweepSpec spec;
    if (!opt.preset.empty()) {
        spec = rffso::preset_sweep(opt.preset);
    } else {
        spec = rffso::preset_sweep("fig3");  // paper-common defaults
        spec.grid = {spec.base.power.snr_db};
    }
    if (!opt.config_path.empty()) apply_config_file(spec, opt.config_path);

    auto& base = spec.base;
    if (opt.snr_db) base.power.snr_db = *opt.snr_db;
    if (opt.split) base.power.split = *opt.split;
    if (opt.xi) base.fso.xi = *opt.xi;
    if (opt.alpha) base.fso.alpha = *opt.alpha;
    if (opt.beta) base.fso.beta = *opt.beta;
    if (opt.mean_gain) base.fso.mean_gain = *opt.mean_gain;
    if (opt.detection) base.fso.detection = detection_from_string(*opt.detection);
    if (opt.rate) base.harq.rate = *opt.rate;
    if (opt.psi) base.harq.psi = *opt.psi;
    if (opt.m_max) base.harq.m_max = *opt.m_max;
    if (opt.n_fso) base.harq.n_fso = *opt.n_fso;
    if (opt.ideal_pa && *opt.ideal_pa) {
        base.rf.epsilon = 1.0;
        base.rf.vartheta = 0.0;
        base.rf.p_max = std::numeric_limits<double>::infinity();
    }
    if (opt.ideal_pa && !*opt.ideal_pa) {
        base.rf.epsilon = 0.65;
        base.rf.vartheta = 0.5;
        base.rf.p_max = std::pow(10.0, 1.8);
    }
    if (opt.epsilon) base.rf.epsilon = *opt.epsilon;
    if (opt.vartheta) base.rf.vartheta = *opt.vartheta;
    if (opt.p_max_db) base.rf.p_max = std::pow(10.0, *opt.p_max_db / 10.0);
    if (opt.seed) base.mc.seed = *opt.seed;
    if (opt.trials) base.mc.trials = *opt.trials;
    base.mc.workers = opt.workers;
    if (opt.axis) spec.axis = rffso::axis_from_string(*opt.axis);
    if (!opt.grid.empty()) spec.grid = opt.grid;
    if (!opt.methods.empty()) {
        spec.methods.clear();
        for (const auto& m : opt.methods) spec.methods.push_back(rffso::method_from_string(m));
    }
    return spec;
}

void emit_rows(const CommonOptions& opt, const std::vector<rffso::SweepRow>& rows) {
    if (opt.out_path.empty()) {
        rffso::write_csv(std::cout, rows, !opt.no_header_timestamp);
        return;
    }
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + opt.out_path);
    if (opt.out_path.size() >= 4 && opt.out_path.substr(opt.out_path.size() - 4) == ".csv") {
        rffso::write_csv(out, rows, !opt.no_header_timestamp);
    } else if (opt.out_path.size() >= 5 &&
               opt.out_path.substr(opt.out_path.size() - 5) == ".json") {
        rffso::write_json(out, rows);
    } else {
        throw std::invalid_argument("output path must end in .csv or .json");
    }
    std::cerr << "wrote " << rows.size() << " rows to " << opt.out_path << "\n";
}

int run_point(const CommonOptions& opt, bool monte_carlo_only) {
    rffso::SweepSpec spec = build_spec(opt);
    spec.grid = {spec.base.power.snr_db};
    spec.axis = rffso::SweepAxis::snr_db;
    if (monte_carlo_only) {
        spec.methods = {rffso::Method::monte_carlo};
    } else {
        if (opt.methods.empty()) {
            spec.methods = {rffso::Method::exact, rffso::Method::linearized,
                            rffso::Method::asymptotic};
        }
        for (rffso::Method m : spec.methods) {
            if (m == rffso::Method::monte_carlo) {
                throw std::invalid_argument("analyze handles closed forms only; use simulate");
            }
        }
    }
    std::vector<rffso::SweepRow> rows = rffso::run_sweep(spec, 1);
    for (const auto& r : rows) {
        if (r.status.rfind("fail", 0) == 0) {
            throw rffso::ConvergenceError("point evaluation failed (" + r.status + ")", r.phi, 0.0);
        }
        std::printf("method=%-11s m=%d phi=%.8g throughput=%.8g outage=%.8g",
                    rffso::to_string(r.method).c_str(), r.m, r.phi, r.throughput, r.outage);
        if (r.std_err) std::printf(" std-err=%.3g", *r.std_err);
        std::printf(" status=%s\n", r.status.c_str());
    }
    if (!opt.out_path.empty()) emit_rows(opt, rows);
    return 0;
}

int run_sweep_cmd(const CommonOptions& opt) {
    rffso::SweepSpec spec = build_spec(opt);
    std::vector<rffso::SweepRow> rows = rffso::run_sweep(spec, opt.workers);
    emit_rows(opt, rows);
    for (const auto& r : rows) {
        if (r.status.rfind("fail:convergence", 0) == 0) {
            std::cerr << "convergence failure at axis-value " << r.axis_value << "\n";
            return 3;
        }
    }
    return 0;
}

int run_validate(const CommonOptions& opt, const rffso::ToleranceProfile& tol) {
    rffso::SweepSpec spec = build_spec(opt);
    std::vector<rffso::Method> methods;
    if (opt.methods.empty()) {
        methods = {rffso::Method::linearized, rffso::Method::asymptotic};
    } else {
        for (const auto& m : opt.methods) methods.push_back(rffso::method_from_string(m));
    }
    rffso::ValidationReport report = rffso::validate_sweep(spec, methods, tol);
    for (const auto& row : report.rows) {
        std::printf("%-12s axis=%-8g m=%d value=%.8g exact=%.8g |delta|=%.3g tol=%.3g %s\n",
                    rffso::to_string(row.method).c_str(), row.axis_value, row.m, row.value,
                    row.reference, std::abs(row.value - row.reference), row.tolerance,
                    row.pass ? "PASS" : "FAIL");
    }
    std::printf("max gaps: linearized=%.4g asymptotic=%.4g monte-carlo=%.4g\n",
                report.max_linearized_gap, report.max_asymptotic_gap, report.max_mc_gap);
    std::printf("validate: %s\n", report.pass ? "PASS" : "FAIL");
    return report.pass ? 0 : 1;
}

int run_harq_gain(const CommonOptions& opt, const std::string& preset, double target) {
    CommonOptions merged = opt;
    merged.preset = preset;
    rffso::SweepSpec spec = build_spec(merged);
    if (spec.axis != rffso::SweepAxis::snr_db) {
        spec = rffso::preset_sweep("fig3");  // gain is defined on an SNR sweep
    }
    double gain = rffso::harq_gain(spec.base, spec.grid, target);
    std::printf("harq_gain_db = %.6g\n", gain);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid RF/FSO link performance under HARQ"};
    app.require_subcommand(1);

    CommonOptions analyze_opt, simulate_opt, sweep_opt, validate_opt, gain_opt;
    rffso::ToleranceProfile tol;

    CLI::App* analyze = app.add_subcommand("analyze", "Closed-form metrics at one operating point");
    add_common_options(analyze, analyze_opt, false);

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo metrics at one operating point");
    add_common_options(simulate, simulate_opt, false);

    CLI::App* sweep = app.add_subcommand("sweep", "Emit a dataset over a parameter grid");
    add_common_options(sweep, sweep_opt, true);

    CLI::App* validate = app.add_subcommand("validate", "Cross-method validation on a preset grid");
    add_common_options(validate, validate_opt, true);
    validate->add_option("--tol-lin", tol.linearized_abs, "Tolerance |linearized - exact|");
    validate->add_option("--tol-asym", tol.asymptotic_abs, "Tolerance |asymptotic - exact|");
    validate->add_option("--tol-mc-sigmas", tol.mc_sigmas, "MC tolerance in standard errors");
    validate->add_option("--tol-mc-abs", tol.mc_abs_floor, "MC absolute tolerance floor");
    validate->add_option("--mc-points", tol.mc_points, "Grid points simulated for MC comparison");

    std::string gain_preset;
    double gain_target = 1e-2;
    CLI::App* gain = app.add_subcommand("harq-gain", "SNR gain of HARQ at a target outage");
    gain->add_option("preset", gain_preset, "Preset name")->required();
    gain->add_option("target", gain_target, "Target outage probability")->required();
    add_common_options(gain, gain_opt, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return run_point(analyze_opt, false);
        if (simulate->parsed()) return run_point(simulate_opt, true);
        if (sweep->parsed()) return run_sweep_cmd(sweep_opt);
        if (validate->parsed()) return run_validate(validate_opt, tol);
        if (gain->parsed()) return run_harq_gain(gain_opt, gain_preset, gain_target);
    } catch (const rffso::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
