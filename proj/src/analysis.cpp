#include "rffso/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "rffso/quadrature.hpp"

namespace rffso {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMonotoneSlack = 1e-9;

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

void check_round(int m, const HarqParams& harq) {
    if (m < 1 || m > harq.m_max) {
        throw std::invalid_argument("decoding probability: m must lie in [1, m_max]");
    }
}

}  // namespace

void HarqParams::validate() const {
    if (m_max < 1) throw std::invalid_argument("HarqParams: m_max must be >= 1");
    if (!(rate > 0.0)) throw std::invalid_argument("HarqParams: rate must be positive");
    if (n_fso < 1) throw std::invalid_argument("HarqParams: n_fso must be >= 1");
    if (!(psi > 0.0)) throw std::invalid_argument("HarqParams: psi must be positive");
}

std::string to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::linearized: return "linearized";
        case Method::asymptotic: return "asymptotic";
        case Method::monte_carlo: return "monte-carlo";
    }
    return "?";
}

Method method_from_string(const std::string& s) {
    if (s == "exact") return Method::exact;
    if (s == "linearized") return Method::linearized;
    if (s == "asymptotic") return Method::asymptotic;
    if (s == "monte-carlo" || s == "mc") return Method::monte_carlo;
    throw std::invalid_argument("unknown method: " + s);
}

FsoLogMoments fso_log_moments(const FsoLinkParams& fso, double psi) {
    fso.validate();
    if (!(psi > 0.0)) throw std::invalid_argument("fso_log_moments: psi must be positive");
    if (fso.p_fso == 0.0) return {0.0, 0.0, 0.0};

    const FsoGainDensityParams dens = fso.density();
    const double c = fso.c_r() * fso.p_fso;
    QuadratureOptions opts;  // abs 1e-10 / rel 1e-8

    double mean = fso_expected_value(dens, [&](double x) { return std::log1p(c * x); }, opts);
    // central second moment; avoids the rho^2 - mu^2 cancellation
    double var = fso_expected_value(
        dens,
        [&](double x) {
            double dev = std::log1p(c * x) - mean;
            return dev * dev;
        },
        opts);

    FsoLogMoments fm;
    fm.mu = psi * mean;
    fm.sigma2 = psi * psi * var;
    fm.rho2 = fm.sigma2 + fm.mu * fm.mu;
    return fm;
}

double decoding_prob_exact(int m, const HarqParams& harq, const FsoLogMoments& fm,
                           const RfLinkParams& rf) {
    harq.validate();
    check_round(m, harq);
    const double s = pa_output_power(rf);
    const double threshold = harq.rate / m - fm.mu;

    if (fm.sigma2 <= 0.0) {
        // FSO term is deterministic: failure iff log(1+s*G_RF) <= R/m - mu
        if (threshold <= 0.0) return 0.0;
        if (s == 0.0) return 1.0;
        return rician_gain_cdf(std::sqrt(std::expm1(threshold) / s), rf);
    }
    const double sd = std::sqrt(fm.sigma2 / (static_cast<double>(m) * harq.n_fso));
    if (s == 0.0) return gaussian_q(-threshold / sd);

    const double upper = std::sqrt(std::expm1(harq.rate / m) / s);
    auto integrand = [&](double u) {
        return rician_amplitude_pdf(u, rf) *
               gaussian_q((std::log1p(s * u * u) - threshold) / sd);
    };
    return clamp01(integrate(integrand, 0.0, upper));
}

double decoding_prob_linearized(int m, const HarqParams& harq, const FsoLogMoments& fm,
                                const RfLinkParams& rf, bool* fell_back) {
    harq.validate();
    check_round(m, harq);
    if (fell_back) *fell_back = false;
    const double s = pa_output_power(rf);
    const double x = harq.rate / m - fm.mu;

    auto fallback = [&]() {
        if (fell_back) *fell_back = true;
        return decoding_prob_exact(m, harq, fm, rf);
    };
    if (!(x > 0.0) || fm.sigma2 <= 0.0 || s <= 0.0) return fallback();

    const double lam = std::sqrt(2.0 * m * harq.n_fso *
                                 (std::exp(-x) - std::exp(-2.0 * x)) * s /
                                 (kPi * fm.sigma2));
    if (!(lam > 0.0) || !std::isfinite(lam)) return fallback();

    // Tangent of the Gaussian tail in the amplitude variable: centered where
    // the argument vanishes (u0 = sqrt(tau_m)) and clipped at sqrt(d_m).
    const double u0 = std::sqrt(std::expm1(x) / s);
    const double ud = std::sqrt(std::expm1(harq.rate / m) / s);
    const double a = std::max(0.0, u0 - 0.5 / lam);
    const double b = std::min(u0 + 0.5 / lam, ud);

    const double fa = rician_gain_cdf(a, rf);
    const double fb = rician_gain_cdf(b, rf);
    const double fmid = rician_gain_cdf(0.5 * (a + b), rf);
    double phi = fa + (0.5 + lam * u0) * (fb - fa) -
                 lam * (b * fb - a * fa - (b - a) * fmid);
    return clamp01(phi);
}

double decoding_prob_asymptotic(int m, const HarqParams& harq, const FsoLogMoments& fm,
                                const RfLinkParams& rf) {
    harq.validate();
    check_round(m, harq);
    const double x = harq.rate / m - fm.mu;
    if (x <= 0.0) return 0.0;
    const double s = pa_output_power(rf);
    if (s == 0.0) return 1.0;
    return rician_gain_cdf(std::sqrt(std::expm1(x) / s), rf);
}

DecodingProfile decoding_profile(Method method, const FsoLogMoments& fm,
                                 const RfLinkParams& rf, const HarqParams& harq) {
    harq.validate();
    DecodingProfile profile;
    profile.method = method;
    profile.phi.resize(harq.m_max);
    for (int m = 1; m <= harq.m_max; ++m) {
        double phi;
        switch (method) {
            case Method::exact:
                phi = decoding_prob_exact(m, harq, fm, rf);
                break;
            case Method::linearized: {
                bool fb = false;
                phi = decoding_prob_linearized(m, harq, fm, rf, &fb);
                profile.used_fallback = profile.used_fallback || fb;
                break;
            }
            case Method::asymptotic:
                phi = decoding_prob_asymptotic(m, harq, fm, rf);
                break;
            default:
                throw std::invalid_argument("decoding_profile: analytic methods only");
        }
        profile.phi[m - 1] = phi;
    }
    return profile;
}

DecodingProfile decoding_profile(Method method, const FsoLinkParams& fso,
                                 const RfLinkParams& rf, const HarqParams& harq) {
    return decoding_profile(method, fso_log_moments(fso, harq.psi), rf, harq);
}

PerformanceMetrics throughput_and_outage(const DecodingProfile& profile, double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("throughput_and_outage: rate must be positive");
    if (profile.phi.empty()) throw std::invalid_argument("throughput_and_outage: empty profile");

    std::vector<double> phi = profile.phi;
    for (size_t i = 0; i < phi.size(); ++i) {
        if (!(phi[i] >= -1e-12 && phi[i] <= 1.0 + 1e-12)) {
            throw std::invalid_argument("throughput_and_outage: phi outside [0,1]");
        }
        phi[i] = std::min(1.0, std::max(0.0, phi[i]));
        if (i > 0) {
            if (phi[i] > phi[i - 1] + kMonotoneSlack) {
                throw std::invalid_argument("throughput_and_outage: phi not nonincreasing in m");
            }
            phi[i] = std::min(phi[i], phi[i - 1]);
        }
    }
    double denom = 1.0;
    for (size_t i = 0; i + 1 < phi.size(); ++i) denom += phi[i];
    PerformanceMetrics out;
    out.outage = phi.back();
    out.throughput = rate * (1.0 - out.outage) / denom;
    return out;
}

}  // namespace rffso
