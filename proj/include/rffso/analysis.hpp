#ifndef RFFSO_ANALYSIS_HPP
#define RFFSO_ANALYSIS_HPP

#include <string>
#include <vector>

#include "rffso/channel.hpp"

namespace rffso {

struct HarqParams {
    int m_max = 1;      // maximum transmissions M; M = 1 is open loop
    double rate = 1.0;  // initial code rate R, npcu
    int n_fso = 1;      // FSO realizations per HARQ round N
    double psi = 1.0;   // RF-to-FSO relative symbol rate

    void validate() const;
};

/// Mean/variance of the scaled per-realization FSO log-rate
/// psi * log(1 + c_r * P_FSO * G).
struct FsoLogMoments {
    double mu = 0.0;
    double sigma2 = 0.0;
    double rho2 = 0.0;  // second raw moment, rho2 = sigma2 + mu^2
};

enum class Method {
    exact,
    linearized,
    asymptotic,
    monte_carlo,
};

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct DecodingProfile {
    std::vector<double> phi;  // phi_1 .. phi_M
    Method method = Method::exact;
    bool used_fallback = false;  // linearized formula invalid somewhere, exact used
};

struct PerformanceMetrics {
    double throughput = 0.0;  // eta, npcu
    double outage = 0.0;      // phi_M
};

/// Moment integrals of the FSO log-rate, by adaptive quadrature against
/// fso_gain_pdf. Relative accuracy ~1e-6. Returns exact zeros when p_fso = 0.
FsoLogMoments fso_log_moments(const FsoLinkParams& fso, double psi);

/// phi_m by direct quadrature of the Rician amplitude density against the
/// Gaussian (CLT) tail of the accumulated FSO log-rate. No linearization.
double decoding_prob_exact(int m, const HarqParams& harq, const FsoLogMoments& fm,
                           const RfLinkParams& rf);

/// phi_m by the tangent-line + Riemann closed form. Falls back to
/// decoding_prob_exact when the linearization constants are invalid
/// (R/m <= mu, zero sigma^2 or zero RF power); *fell_back reports this.
double decoding_prob_linearized(int m, const HarqParams& harq, const FsoLogMoments& fm,
                                const RfLinkParams& rf, bool* fell_back = nullptr);

/// Large-N second-order approximation: the FSO term is replaced by its mean,
/// leaving a pure Rician gain CDF. Returns 0 when R/m <= mu.
double decoding_prob_asymptotic(int m, const HarqParams& harq, const FsoLogMoments& fm,
                                const RfLinkParams& rf);

/// Full phi_1..phi_M profile for one analytic method (moments computed once).
DecodingProfile decoding_profile(Method method, const FsoLinkParams& fso,
                                 const RfLinkParams& rf, const HarqParams& harq);
DecodingProfile decoding_profile(Method method, const FsoLogMoments& fm,
                                 const RfLinkParams& rf, const HarqParams& harq);

/// Throughput eta = R(1-phi_M) / (1 + sum_{m<M} phi_m) and outage phi_M.
/// Tiny non-monotonicities (quadrature noise within 1e-9) are clamped;
/// anything larger is an invariant violation.
PerformanceMetrics throughput_and_outage(const DecodingProfile& profile, double rate);

}  // namespace rffso

#endif
