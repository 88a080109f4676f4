#include "rffso/channel.hpp"

#include <stdexcept>

namespace rffso {

void FsoLinkParams::validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(xi > 0.0)) {
        throw std::invalid_argument("FsoLinkParams: alpha, beta, xi must be positive");
    }
    if (!(mean_gain > 0.0)) throw std::invalid_argument("FsoLinkParams: mean_gain must be positive");
    if (!(p_fso >= 0.0)) throw std::invalid_argument("FsoLinkParams: p_fso must be nonnegative");
}

void RfLinkParams::validate() const {
    if (!(nu >= 0.0)) throw std::invalid_argument("RfLinkParams: nu must be nonnegative");
    if (!(omega > 0.0)) throw std::invalid_argument("RfLinkParams: omega must be positive");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("RfLinkParams: epsilon must lie in [0,1]");
    }
    if (!(vartheta >= 0.0 && vartheta < 1.0)) {
        throw std::invalid_argument("RfLinkParams: vartheta must lie in [0,1)");
    }
    if (!(p_max > 0.0)) throw std::invalid_argument("RfLinkParams: p_max must be positive");
    if (!(p_cons >= 0.0)) throw std::invalid_argument("RfLinkParams: p_cons must be nonnegative");
}

PaOutput pa_output(const RfLinkParams& rf) {
    rf.validate();
    if (rf.p_cons == 0.0 || rf.epsilon == 0.0) return {0.0, false};
    double p_rf = std::pow(rf.epsilon * rf.p_cons / std::pow(rf.p_max, rf.vartheta),
                           1.0 / (1.0 - rf.vartheta));
    if (p_rf > rf.p_max) return {rf.p_max, true};
    return {p_rf, false};
}

double pa_output_power(const RfLinkParams& rf) { return pa_output(rf).p_rf; }

double sample_fso_gain(const FsoLinkParams& fso, RandomStream& rng) {
    double xa = sample_gamma_mean1(fso.alpha, rng);
    double xb = sample_gamma_mean1(fso.beta, rng);
    double hp = std::pow(rng.next_double(), 1.0 / (fso.xi * fso.xi));
    double t = xa * xb * hp / fso.h();
    return fso.detection == Detection::heterodyne ? fso.mu_r() * t : fso.mu_r() * t * t;
}

double sample_rf_gain(const RfLinkParams& rf, RandomStream& rng) {
    double z1 = rng.next_normal();
    double z2 = rng.next_normal();
    double re = rf.nu + rf.omega * z1;
    double im = rf.omega * z2;
    return re * re + im * im;
}

double rician_amplitude_pdf(double x, const RfLinkParams& rf) {
    if (x <= 0.0) return 0.0;
    double w2 = rf.omega * rf.omega;
    double dev = x - rf.nu;
    return x / w2 * std::exp(-0.5 * dev * dev / w2) * bessel_i0_scaled(x * rf.nu / w2);
}

double rician_gain_cdf(double x, const RfLinkParams& rf) {
    if (x <= 0.0) return 0.0;
    return 1.0 - marcum_q1(rf.nu / rf.omega, x / rf.omega);
}

}  // namespace rffso
