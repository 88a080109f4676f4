#include "rffso/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "rffso/quadrature.hpp"

namespace rffso {

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<double> linspace_steps(double first, double last, double step) {
    std::vector<double> grid;
    for (double v = first; v <= last + 1e-9; v += step) grid.push_back(v);
    return grid;
}

Scenario paper_base() {
    Scenario s;
    s.fso = FsoLinkParams{};         // alpha 4.3939, beta 2.5636, heterodyne, unit mean gain
    s.rf = RfLinkParams{};           // nu 0.0995, omega 0.7036, ideal PA defaults
    s.power = SystemPower{20.0, 0.5};
    s.mc = McConfig{100000, 12345, false, 0};
    return s;
}

void set_nonideal_pa(Scenario& s, double p_max_db) {
    s.rf.epsilon = 0.65;
    s.rf.vartheta = 0.5;
    s.rf.p_max = std::pow(10.0, p_max_db / 10.0);
}

}  // namespace

std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::snr_db: return "snr_db";
        case SweepAxis::xi: return "xi";
        case SweepAxis::n_fso: return "n_fso";
        case SweepAxis::rate: return "rate";
        case SweepAxis::m_max: return "m_max";
    }
    return "?";
}

SweepAxis axis_from_string(const std::string& s) {
    if (s == "snr_db") return SweepAxis::snr_db;
    if (s == "xi") return SweepAxis::xi;
    if (s == "n_fso") return SweepAxis::n_fso;
    if (s == "rate") return SweepAxis::rate;
    if (s == "m_max") return SweepAxis::m_max;
    throw std::invalid_argument("unknown sweep axis: " + s);
}

Scenario Scenario::materialized() const {
    Scenario out = *this;
    out.fso.p_fso = power.p_fso();
    out.rf.p_cons = power.p_cons();
    return out;
}

void SweepSpec::validate() const {
    if (grid.empty()) throw std::invalid_argument("SweepSpec: grid must be nonempty");
    for (size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("SweepSpec: grid must be strictly increasing");
        }
    }
    if (methods.empty()) throw std::invalid_argument("SweepSpec: methods must be nonempty");
    if (axis == SweepAxis::n_fso || axis == SweepAxis::m_max) {
        for (double g : grid) {
            if (g < 1.0 || g != std::floor(g)) {
                throw std::invalid_argument("SweepSpec: integer axis needs integer grid values >= 1");
            }
        }
    }
}

std::vector<std::string> preset_names() { return {"fig3", "fig4", "fig5", "fig6", "smoke"}; }

bool is_preset(const std::string& name) {
    for (const auto& n : preset_names())
        if (n == name) return true;
    return false;
}

SweepSpec preset_sweep(const std::string& name) {
    SweepSpec spec;
    spec.base = paper_base();
    if (name == "fig3") {
        // outage vs SNR, ideal PA; paper compares M=1 against M=3
        spec.base.fso.xi = 0.9;
        spec.base.harq = HarqParams{3, 1.0, 100, 0.03};
        spec.axis = SweepAxis::snr_db;
        spec.grid = linspace_steps(0.0, 35.0, 1.0);
        spec.methods = {Method::exact, Method::linearized, Method::asymptotic};
    } else if (name == "fig4") {
        // throughput vs SNR under the non-ideal PA (rerun with --ideal-pa to compare)
        spec.base.fso.xi = 0.9;
        spec.base.harq = HarqParams{1, 0.5, 100, 0.03};
        set_nonideal_pa(spec.base, 18.0);
        spec.axis = SweepAxis::snr_db;
        spec.grid = linspace_steps(0.0, 20.0, 1.0);  // grid choice ours; not stated for this figure
        spec.methods = {Method::exact};
    } else if (name == "fig5") {
        // outage vs pointing-error parameter at a fixed SNR
        spec.base.fso.xi = 0.9;
        spec.base.harq = HarqParams{2, 3.0, 100, 0.25};
        set_nonideal_pa(spec.base, 30.0);
        spec.base.power.snr_db = 25.0;
        spec.axis = SweepAxis::xi;
        spec.grid = {0.1, 0.5, 1.0, 2.0, 10.0};
        spec.methods = {Method::exact};
    } else if (name == "fig6") {
        // outage vs FSO realizations per round at fixed total power
        spec.base.fso.xi = 1.2;
        spec.base.harq = HarqParams{1, 12.0, 100, 2.0};
        set_nonideal_pa(spec.base, 18.0);
        spec.base.power.snr_db = 18.0;
        spec.axis = SweepAxis::n_fso;
        spec.grid = {1, 5, 25, 100, 1000};
        spec.methods = {Method::exact};
    } else if (name == "smoke") {
        // tiny fixture for schema/golden tests
        spec.base.fso.xi = 0.9;
        spec.base.harq = HarqParams{2, 1.0, 4, 0.03};
        spec.base.mc = McConfig{2000, 42, false, 1};
        spec.axis = SweepAxis::snr_db;
        spec.grid = {0.0, 10.0};
        spec.methods = {Method::exact, Method::linearized, Method::asymptotic,
                        Method::monte_carlo};
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return spec;
}

namespace {

Scenario scenario_at(const SweepSpec& spec, double value) {
    Scenario s = spec.base;
    switch (spec.axis) {
        case SweepAxis::snr_db: s.power.snr_db = value; break;
        case SweepAxis::xi: s.fso.xi = value; break;
        case SweepAxis::n_fso: s.harq.n_fso = static_cast<int>(value); break;
        case SweepAxis::rate: s.harq.rate = value; break;
        case SweepAxis::m_max: s.harq.m_max = static_cast<int>(value); break;
    }
    return s.materialized();
}

void append_point_rows(std::vector<SweepRow>& rows, const SweepSpec& spec, double value) {
    Scenario s = scenario_at(spec, value);
    std::string annotations;
    if (pa_output(s.rf).clamped) annotations += ";pa-clamped";

    bool need_moments = false;
    for (Method m : spec.methods)
        if (m != Method::monte_carlo) need_moments = true;

    FsoLogMoments fm;
    std::string moment_error;
    if (need_moments) {
        try {
            fm = fso_log_moments(s.fso, s.harq.psi);
        } catch (const ConvergenceError&) {
            moment_error = "fail:convergence";
        } catch (const std::exception&) {
            moment_error = "fail:error";
        }
    }

    for (Method method : spec.methods) {
        std::vector<double> phi(s.harq.m_max, std::nan(""));
        std::vector<double> se;
        double throughput = std::nan("");
        double outage = std::nan("");
        std::string status = "ok" + annotations;
        try {
            if (method == Method::monte_carlo) {
                McEstimate est = simulate_harq(s.fso, s.rf, s.harq, s.mc);
                phi = est.phi_hat;
                se = est.std_err;
                throughput = est.throughput_hat;
                outage = est.outage_hat;
            } else if (!moment_error.empty()) {
                status = moment_error;
            } else {
                DecodingProfile profile = decoding_profile(method, fm, s.rf, s.harq);
                if (profile.used_fallback) status += ";lin-fallback";
                phi = profile.phi;
                PerformanceMetrics metrics = throughput_and_outage(profile, s.harq.rate);
                throughput = metrics.throughput;
                outage = metrics.outage;
            }
        } catch (const ConvergenceError&) {
            status = "fail:convergence";
        } catch (const std::exception&) {
            status = "fail:error";
        }
        for (int m = 1; m <= s.harq.m_max; ++m) {
            SweepRow row;
            row.axis_value = value;
            row.method = method;
            row.m = m;
            row.phi = phi[m - 1];
            row.throughput = throughput;
            row.outage = outage;
            if (!se.empty()) row.std_err = se[m - 1];
            row.status = status;
            rows.push_back(row);
        }
    }
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers) {
    spec.validate();
    spec.base.fso.validate();
    spec.base.rf.validate();
    spec.base.harq.validate();

    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(std::min<size_t>(workers, spec.grid.size()));

    // Each point task gets a single-threaded MC so the pool is not oversubscribed.
    SweepSpec pooled = spec;
    if (workers > 1) pooled.base.mc.workers = 1;

    std::vector<std::vector<SweepRow>> per_point(spec.grid.size());
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= pooled.grid.size()) return;
            append_point_rows(per_point[i], pooled, pooled.grid[i]);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    std::vector<SweepRow> rows;
    for (auto& point_rows : per_point) {
        rows.insert(rows.end(), point_rows.begin(), point_rows.end());
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool timestamp_header) {
    if (timestamp_header) {
        std::time_t now = std::time(nullptr);
        char buf[64];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        os << "# generated " << buf << "\n";
    }
    os << "axis-value,method,m,phi,throughput,outage,std-err,status\n";
    for (const auto& r : rows) {
        os << format_double(r.axis_value) << ',' << to_string(r.method) << ',' << r.m << ','
           << format_double(r.phi) << ',' << format_double(r.throughput) << ','
           << format_double(r.outage) << ',' << (r.std_err ? format_double(*r.std_err) : "")
           << ',' << r.status << "\n";
    }
}

void write_json(std::ostream& os, const std::vector<SweepRow>& rows) {
    auto number = [](double v) -> std::string {
        return std::isfinite(v) ? format_double(v) : "null";
    };
    os << "[\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << "  {\"axis-value\": " << number(r.axis_value) << ", \"method\": \""
           << to_string(r.method) << "\", \"m\": " << r.m << ", \"phi\": " << number(r.phi)
           << ", \"throughput\": " << number(r.throughput) << ", \"outage\": "
           << number(r.outage) << ", \"std-err\": "
           << (r.std_err ? number(*r.std_err) : "null") << ", \"status\": \"" << r.status
           << "\"}" << (i + 1 < rows.size() ? "," : "") << "\n";
    }
    os << "]\n";
}

ValidationReport validate_sweep(const SweepSpec& spec, const std::vector<Method>& methods,
                                const ToleranceProfile& tol) {
    spec.validate();
    ValidationReport report;

    // exact reference at every grid point
    std::vector<std::vector<double>> exact(spec.grid.size());
    std::vector<FsoLogMoments> moments(spec.grid.size());
    for (size_t i = 0; i < spec.grid.size(); ++i) {
        Scenario s = scenario_at(spec, spec.grid[i]);
        moments[i] = fso_log_moments(s.fso, s.harq.psi);
        exact[i] = decoding_profile(Method::exact, moments[i], s.rf, s.harq).phi;
    }

    auto compare_analytic = [&](Method method) {
        for (size_t i = 0; i < spec.grid.size(); ++i) {
            Scenario s = scenario_at(spec, spec.grid[i]);
            DecodingProfile prof = decoding_profile(method, moments[i], s.rf, s.harq);
            for (int m = 1; m <= s.harq.m_max; ++m) {
                double gap = std::abs(prof.phi[m - 1] - exact[i][m - 1]);
                double limit =
                    method == Method::linearized ? tol.linearized_abs : tol.asymptotic_abs;
                bool pass = gap <= limit;
                report.rows.push_back({spec.grid[i], m, method, prof.phi[m - 1],
                                       exact[i][m - 1], limit, pass});
                report.pass = report.pass && pass;
                double& max_gap = method == Method::linearized ? report.max_linearized_gap
                                                               : report.max_asymptotic_gap;
                max_gap = std::max(max_gap, gap);
            }
        }
    };

    for (Method method : methods) {
        if (method == Method::exact) continue;  // reference
        if (method == Method::linearized || method == Method::asymptotic) {
            compare_analytic(method);
            continue;
        }
        // Monte Carlo on a thinned grid
        size_t n = spec.grid.size();
        size_t points = std::min<size_t>(std::max(1, tol.mc_points), n);
        for (size_t k = 0; k < points; ++k) {
            size_t i = points == 1 ? 0 : k * (n - 1) / (points - 1);
            Scenario s = scenario_at(spec, spec.grid[i]);
            McEstimate est = simulate_harq(s.fso, s.rf, s.harq, s.mc);
            for (int m = 1; m <= s.harq.m_max; ++m) {
                double gap = std::abs(est.phi_hat[m - 1] - exact[i][m - 1]);
                double limit =
                    std::max(tol.mc_sigmas * est.std_err[m - 1], tol.mc_abs_floor);
                bool pass = gap <= limit;
                report.rows.push_back({spec.grid[i], m, Method::monte_carlo,
                                       est.phi_hat[m - 1], exact[i][m - 1], limit, pass});
                report.pass = report.pass && pass;
                report.max_mc_gap = std::max(report.max_mc_gap, gap);
            }
        }
    }
    return report;
}

namespace {

double interpolate_snr_at_outage(const std::vector<double>& snr, const std::vector<double>& outage,
                                 double target) {
    if (!(target > 0.0)) throw std::domain_error("harq_gain: target outage must be positive");
    for (size_t i = 0; i + 1 < snr.size(); ++i) {
        double hi = outage[i], lo = outage[i + 1];
        if (hi >= target && target >= lo && hi > 0.0 && lo > 0.0) {
            if (hi == lo) return snr[i];
            double f = (std::log(hi) - std::log(target)) / (std::log(hi) - std::log(lo));
            return snr[i] + f * (snr[i + 1] - snr[i]);
        }
        if (hi >= target && target >= lo) {  // hit an exact zero; fall back to linear
            double f = (hi - target) / (hi - lo);
            return snr[i] + f * (snr[i + 1] - snr[i]);
        }
    }
    throw std::domain_error("harq_gain: target outage outside the achieved curve range");
}

}  // namespace

double harq_gain(const Scenario& base, const std::vector<double>& snr_grid, double target_outage) {
    if (snr_grid.size() < 2) throw std::invalid_argument("harq_gain: need at least two SNR points");

    auto outage_curve = [&](int m_max) {
        std::vector<double> curve;
        curve.reserve(snr_grid.size());
        for (double snr : snr_grid) {
            Scenario s = base;
            s.power.snr_db = snr;
            s.harq.m_max = m_max;
            s = s.materialized();
            FsoLogMoments fm = fso_log_moments(s.fso, s.harq.psi);
            DecodingProfile prof = decoding_profile(Method::exact, fm, s.rf, s.harq);
            curve.push_back(throughput_and_outage(prof, s.harq.rate).outage);
        }
        return curve;
    };

    std::vector<double> open_loop = outage_curve(1);
    double snr_open = interpolate_snr_at_outage(snr_grid, open_loop, target_outage);
    if (base.harq.m_max == 1) return 0.0;
    std::vector<double> harq_curve = outage_curve(base.harq.m_max);
    double snr_harq = interpolate_snr_at_outage(snr_grid, harq_curve, target_outage);
    return snr_open - snr_harq;
}

}  // namespace rffso
