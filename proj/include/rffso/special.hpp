#ifndef RFFSO_SPECIAL_HPP
#define RFFSO_SPECIAL_HPP

#include <functional>
#include <stdexcept>

#include "rffso/quadrature.hpp"

namespace rffso {

enum class Detection : int {
    heterodyne = 1,  // coherent, r = 1
    imdd = 2,        // intensity modulation / direct detection, r = 2
};

/// Parameters of the unified Gamma-Gamma + pointing-error gain density.
/// The gain is distributed as mu_r * (Xa*Xb*Hp / h)^r with
/// Xa ~ Gamma(alpha, mean 1), Xb ~ Gamma(beta, mean 1), Hp = U^(1/xi^2),
/// h = xi^2/(xi^2+1).
struct FsoGainDensityParams {
    double alpha;  // large-scale scintillation shape
    double beta;   // small-scale scintillation shape
    double xi;     // beam-radius to jitter ratio; xi -> inf means no pointing error
    Detection detection = Detection::heterodyne;
    double mu_r = 1.0;  // average electrical SNR (linear)

    int r() const { return static_cast<int>(detection); }
    double h() const { return xi * xi / (xi * xi + 1.0); }
    void validate() const;
};

/// Standard normal upper-tail probability Q(x).
double gaussian_q(double x);

/// Modified Bessel function I0(x), x >= 0.
double bessel_i0(double x);
/// exp(-x) * I0(x); safe for large x.
double bessel_i0_scaled(double x);

/// Modified Bessel function K_nu(x), real nu, x > 0.
double bessel_k(double nu, double x);
/// exp(x) * K_nu(x); safe for large x.
double bessel_k_scaled(double nu, double x);

/// Regularized upper incomplete gamma Q(s, x) = Gamma(s,x)/Gamma(s), s > 0.
double gamma_q_upper(double s, double x);

/// First-order Marcum Q function Q1(a, b) = Pr(Rician(a,1) amplitude > b).
double marcum_q1(double a, double b);

/// Density of the FSO channel gain at x > 0.
///
/// Default route integrates the pointing-loss density against the
/// Gamma-product density (closed Bessel-K form). A residue-series fast path
/// is used when the pole pattern of the underlying Meijer-G integrand is
/// well separated and the argument is small enough for the alternating sum
/// to be safe.
double fso_gain_pdf(double x, const FsoGainDensityParams& p);

/// Expectation E[g(G)] against the FSO gain density by adaptive quadrature.
/// Handles the near-zero density spike of small-xi configurations, whose mass
/// sits below the range of double-precision gains.
double fso_expected_value(const FsoGainDensityParams& p,
                          const std::function<double(double)>& g,
                          const QuadratureOptions& opts = {});

namespace detail {

/// Density of the product of two independent unit-mean Gamma variates
/// (shapes alpha and beta) at w > 0.
double gamma_product_pdf(double w, double alpha, double beta);

/// log of gamma_product_pdf; -inf where the density underflows.
double gamma_product_log_pdf(double w, double alpha, double beta);
double gamma_product_log_pdf_ln(double ln_w, double alpha, double beta);

/// True when the residue series is numerically safe for these parameters.
bool residue_series_applicable(const FsoGainDensityParams& p);

/// Force a specific evaluation route (for cross-route tests).
double fso_gain_pdf_integral(double x, const FsoGainDensityParams& p);
double fso_gain_pdf_series(double x, const FsoGainDensityParams& p);

/// log density as a function of ln(x); valid far outside the range of
/// double-precision gains.
double fso_gain_log_pdf_ln(double ln_x, const FsoGainDensityParams& p);
double fso_gain_log_pdf_series_ln(double ln_x, const FsoGainDensityParams& p);
double fso_gain_log_pdf_ln_any(double ln_x, const FsoGainDensityParams& p);

}  // namespace detail

}  // namespace rffso

#endif
