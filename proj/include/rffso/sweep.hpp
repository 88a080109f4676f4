#ifndef RFFSO_SWEEP_HPP
#define RFFSO_SWEEP_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rffso/mc.hpp"

namespace rffso {

enum class SweepAxis {
    snr_db,
    xi,
    n_fso,
    rate,
    m_max,
};

std::string to_string(SweepAxis a);
SweepAxis axis_from_string(const std::string& s);

/// Full parameter bundle for one operating point. p_fso / p_cons are derived
/// from `power` when the scenario is materialized.
struct Scenario {
    FsoLinkParams fso;
    RfLinkParams rf;
    HarqParams harq;
    SystemPower power;
    McConfig mc;

    /// Copy with powers resolved from the SNR convention.
    Scenario materialized() const;
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::snr_db;
    std::vector<double> grid;  // nonempty, strictly monotone
    Scenario base;
    std::vector<Method> methods;  // nonempty

    void validate() const;
};

struct SweepRow {
    double axis_value = 0.0;
    Method method = Method::exact;
    int m = 1;
    double phi = 0.0;
    double throughput = 0.0;
    double outage = 0.0;
    std::optional<double> std_err;  // empty for analytic methods
    std::string status = "ok";
};

/// Evaluates every (grid point x method); per-point failures are recorded in
/// the status column and never abort the sweep. Rows come back in grid order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers = 0);

/// Built-in parameter bundles for the reference figures (plus "smoke", a tiny
/// fixture used by the golden-file test).
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
SweepSpec preset_sweep(const std::string& name);

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool timestamp_header);
void write_json(std::ostream& os, const std::vector<SweepRow>& rows);

struct ToleranceProfile {
    double linearized_abs = 0.02;   // |linearized - exact|
    double asymptotic_abs = 0.05;   // |asymptotic - exact|
    double mc_sigmas = 3.0;         // MC within max(mc_sigmas * SE, mc_abs_floor)
    double mc_abs_floor = 5e-3;
    int mc_points = 8;              // grid thinning for the Monte Carlo method
};

struct ValidationRow {
    double axis_value;
    int m;
    Method method;
    double value;
    double reference;  // exact
    double tolerance;
    bool pass;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    bool pass = true;
    double max_linearized_gap = 0.0;
    double max_asymptotic_gap = 0.0;
    double max_mc_gap = 0.0;
};

/// Cross-method validation on a sweep grid with the exact integral as the
/// reference. `methods` lists what to compare (exact itself is always run).
ValidationReport validate_sweep(const SweepSpec& spec, const std::vector<Method>& methods,
                                const ToleranceProfile& tol);

/// SNR gain of HARQ at a target outage: inverse-interpolates log-outage vs
/// SNR (piecewise linear) for M = 1 and M = m_max and returns the dB gap.
/// Throws std::domain_error when the target is outside either curve.
double harq_gain(const Scenario& base, const std::vector<double>& snr_grid,
                 double target_outage);

}  // namespace rffso

#endif
