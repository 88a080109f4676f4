#ifndef RFFSO_CHANNEL_HPP
#define RFFSO_CHANNEL_HPP

#include <cmath>
#include <limits>

#include "rffso/rng.hpp"
#include "rffso/special.hpp"

namespace rffso {

/// FSO link: turbulence/pointing shape, mean gain normalization and optical
/// transmit power. Noise power is normalized to one on both links, so powers
/// plug directly into log(1 + P*G).
struct FsoLinkParams {
    double alpha = 4.3939;
    double beta = 2.5636;
    double xi = 0.9;
    Detection detection = Detection::heterodyne;
    double mean_gain = 1.0;  // E[G_FSO]
    double p_fso = 0.0;      // optical transmit power, linear

    int r() const { return static_cast<int>(detection); }
    double h() const { return xi * xi / (xi * xi + 1.0); }

    /// Rate constant of the log(1 + c_r * SNR) achievable-rate bound.
    double c_r() const {
        return detection == Detection::heterodyne ? 1.0 : 0.43263050871754563;  // e/(2*pi)
    }

    /// Average electrical SNR mu_r derived from mean_gain.
    double mu_r() const {
        if (detection == Detection::heterodyne) return mean_gain;
        double xi2 = xi * xi;
        return mean_gain * alpha * beta * xi2 * (xi2 + 2.0) /
               ((alpha + 1.0) * (beta + 1.0) * (xi2 + 1.0) * (xi2 + 1.0));
    }

    FsoGainDensityParams density() const {
        return FsoGainDensityParams{alpha, beta, xi, detection, mu_r()};
    }

    void validate() const;
};

/// RF link: Rician fading plus the power-amplifier model
/// P_RF = (eps * P_cons / P_max^theta)^(1/(1-theta)), clamped at P_max.
struct RfLinkParams {
    double nu = 0.0995;
    double omega = 0.7036;
    double epsilon = 1.0;    // max PA efficiency, in [0,1]
    double vartheta = 0.0;   // PA class parameter, in [0,1)
    double p_max = std::numeric_limits<double>::infinity();
    double p_cons = 0.0;     // consumed power, linear

    void validate() const;
};

struct PaOutput {
    double p_rf;
    bool clamped;
};

/// Transmitted RF power for the given consumed power; clamps at p_max.
PaOutput pa_output(const RfLinkParams& rf);
double pa_output_power(const RfLinkParams& rf);

/// SNR convention: total power P = 10^(snr_db/10) split between the FSO
/// transmit power and the RF consumed power.
struct SystemPower {
    double snr_db = 0.0;
    double split = 0.5;  // fraction of P assigned to the FSO link

    double total() const { return std::pow(10.0, snr_db / 10.0); }
    double p_fso() const { return split * total(); }
    double p_cons() const { return (1.0 - split) * total(); }
};

/// One draw of the FSO channel gain (composite construction of the unified
/// Gamma-Gamma pointing-error law). Uses draw slots rng.draw_index().
double sample_fso_gain(const FsoLinkParams& fso, RandomStream& rng);

/// One draw of the RF channel gain; sqrt(G) is Rician(nu, omega).
double sample_rf_gain(const RfLinkParams& rf, RandomStream& rng);

/// Density of the Rician amplitude sqrt(G_RF) at x >= 0.
double rician_amplitude_pdf(double x, const RfLinkParams& rf);

/// CDF of the Rician amplitude: Pr(sqrt(G_RF) <= x) = 1 - Q1(nu/omega, x/omega).
/// For the gain, Pr(G_RF <= g) = rician_gain_cdf(sqrt(g), rf).
double rician_gain_cdf(double x, const RfLinkParams& rf);

}  // namespace rffso

#endif
