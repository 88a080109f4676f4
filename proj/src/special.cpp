#include "rffso/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rffso/quadrature.hpp"

namespace rffso {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// zeta(2..16); beyond that 1 + 2^-k + 3^-k + 4^-k + 5^-k is accurate enough.
const double kZeta[] = {
    1.6449340668482264, 1.2020569031595943, 1.0823232337111382, 1.0369277551433699,
    1.0173430619844491, 1.0083492773819228, 1.0040773561979443, 1.0020083928260822,
    1.0009945751278181, 1.0004941886041195, 1.0002460865533080, 1.0001227133475785,
    1.0000612481350587, 1.0000305882363070, 1.0000152822594087,
};

double zeta_int(int k) {
    if (k - 2 < static_cast<int>(sizeof(kZeta) / sizeof(kZeta[0]))) return kZeta[k - 2];
    return 1.0 + std::pow(2.0, -k) + std::pow(3.0, -k) + std::pow(4.0, -k) + std::pow(5.0, -k);
}

// Temme's auxiliary functions for |mu| <= 1/2, via
// log Gamma(1+mu) = -gamma*mu + sum_{k>=2} (-1)^k zeta(k) mu^k / k:
//   1/Gamma(1+mu) = exp(q_e + q_o), 1/Gamma(1-mu) = exp(q_e - q_o)
//   gam1 = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu) = -exp(q_e) sinh(q_o)/mu
//   gam2 = [1/Gamma(1-mu) + 1/Gamma(1+mu)] / 2 = exp(q_e) cosh(q_o)
void temme_gammas(double mu, double* gam1, double* gam2, double* one_over_gamma_1p,
                  double* one_over_gamma_1m) {
    double qo = kEulerGamma * mu;
    double qe = 0.0;
    double mu_k = mu;  // mu^1
    for (int k = 2; k < 80; ++k) {
        mu_k *= mu;
        double term = zeta_int(k) * mu_k / k;
        if (k % 2 == 1) {
            qo += term;
        } else {
            qe -= term;
        }
        if (std::abs(term) < 1e-19) break;
    }
    double ee = std::exp(qe);
    *gam2 = ee * std::cosh(qo);
    *one_over_gamma_1p = ee * std::exp(qo);
    *one_over_gamma_1m = ee * std::exp(-qo);
    if (std::abs(mu) < 1e-12) {
        *gam1 = -kEulerGamma * ee;  // limit of -sinh(q_o)/mu with q_o ~ gamma*mu
    } else {
        *gam1 = -ee * std::sinh(qo) / mu;
    }
}

// K_mu(x) and K_{mu+1}(x), scaled by e^x, for |mu| <= 1/2.
// Temme's series below x = 2, Steed's continued fraction above.
void bessel_k_pair_scaled(double mu, double x, double* kmu, double* kmu1) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double mu2 = mu * mu;
    if (x < 2.0) {
        double x2 = 0.5 * x;
        double pimu = kPi * mu;
        double fact = (std::abs(pimu) < 1e-15) ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = mu * d;
        double fact2 = (std::abs(e) < 1e-15) ? 1.0 : std::sinh(e) / e;
        double gam1, gam2, gampl, gammi;
        temme_gammas(mu, &gam1, &gam2, &gampl, &gammi);
        double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
        double sum = ff;
        double ee = std::exp(e);
        double p = 0.5 * ee / gampl;
        double q = 0.5 / (ee * gammi);
        double c = 1.0;
        double d2 = x2 * x2;
        double sum1 = p;
        for (int i = 1; i <= 1000; ++i) {
            ff = (i * ff + p + q) / (i * i - mu2);
            c *= d2 / i;
            p /= (i - mu);
            q /= (i + mu);
            double del = c * ff;
            sum += del;
            double del1 = c * (p - i * ff);
            sum1 += del1;
            if (std::abs(del) < std::abs(sum) * eps) break;
        }
        double scale = std::exp(x);
        *kmu = sum * scale;
        *kmu1 = sum1 * (2.0 / x) * scale;
    } else {
        double b = 2.0 * (1.0 + x);
        double d = 1.0 / b;
        double h = d, delh = d;
        double q1 = 0.0, q2 = 1.0;
        double a1 = 0.25 - mu2;
        double q = a1, c = a1, a = -a1;
        double s = 1.0 + q * delh;
        for (int i = 2; i <= 10000; ++i) {
            a -= 2 * (i - 1);
            c = -a * c / i;
            double qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            double dels = q * delh;
            s += dels;
            if (std::abs(dels / s) <= eps) break;
        }
        h = a1 * h;
        *kmu = std::sqrt(kPi / (2.0 * x)) / s;
        *kmu1 = *kmu * (mu + x + 0.5 - h) / x;
    }
}

}  // namespace

void FsoGainDensityParams::validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(xi > 0.0) || !(mu_r > 0.0)) {
        throw std::invalid_argument("FsoGainDensityParams: alpha, beta, xi, mu_r must be positive");
    }
    if (detection != Detection::heterodyne && detection != Detection::imdd) {
        throw std::invalid_argument("FsoGainDensityParams: detection must be heterodyne or IM/DD");
    }
}

double gaussian_q(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

double bessel_i0_scaled(double x) {
    x = std::abs(x);
    if (x <= 50.0) {
        // power series sum_k (x/2)^{2k} / (k!)^2, all-positive
        double term = 1.0, sum = 1.0;
        double q = 0.25 * x * x;
        for (int k = 1; k <= 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(-x);
    }
    // asymptotic: I0(x) ~ e^x/sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 40; ++k) {
        double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (next >= term) break;  // divergent tail reached
        term = next;
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum / std::sqrt(2.0 * kPi * x);
}

double bessel_i0(double x) {
    x = std::abs(x);
    return bessel_i0_scaled(x) * std::exp(x);
}

double bessel_k_scaled(double nu, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("bessel_k: x must be positive");
    nu = std::abs(nu);
    int nl = static_cast<int>(nu + 0.5);
    double mu = nu - nl;  // |mu| <= 1/2
    double kmu, kmu1;
    bessel_k_pair_scaled(mu, x, &kmu, &kmu1);
    for (int i = 1; i <= nl; ++i) {
        double knext = (mu + i) * (2.0 / x) * kmu1 + kmu;
        kmu = kmu1;
        kmu1 = knext;
    }
    return kmu;
}

double bessel_k(double nu, double x) { return bessel_k_scaled(nu, x) * std::exp(-x); }

double gamma_q_upper(double s, double x) {
    if (!(s > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q_upper: need s > 0, x >= 0");
    if (x == 0.0) return 1.0;
    double lp = -x + s * std::log(x) - std::lgamma(s);
    if (x < s + 1.0) {
        // lower series
        double ap = s, del = 1.0 / s, sum = del;
        for (int n = 0; n < 1000; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-17) break;
        }
        return clamp01(1.0 - sum * std::exp(lp));
    }
    // Lentz continued fraction for the upper function
    double b = x + 1.0 - s;
    double c = 1.0 / 1e-300;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return clamp01(std::exp(lp) * h);
}

double marcum_q1(double a, double b) {
    if (a < 0.0 || b < 0.0) throw std::invalid_argument("marcum_q1: need a, b >= 0");
    if (b == 0.0) return 1.0;
    double y = 0.5 * b * b;
    if (a == 0.0) return std::exp(-y);
    // Q1(a,b) = sum_j Pois(j; a^2/2) * Q(j+1, b^2/2); all terms positive.
    // Start at the Poisson mode so weights never underflow prematurely.
    double lambda = 0.5 * a * a;
    int j0 = static_cast<int>(lambda);
    double w0 = std::exp(j0 * std::log(lambda) - lambda - std::lgamma(j0 + 1.0));
    double q0 = gamma_q_upper(j0 + 1.0, y);
    double d0 = std::exp(j0 * std::log(y) - y - std::lgamma(j0 + 1.0));
    double sum = w0 * q0;
    double w = w0, q = q0, d = d0;
    for (int j = j0; j < j0 + 100000; ++j) {
        d *= y / (j + 1.0);
        q = std::min(1.0, q + d);
        w *= lambda / (j + 1.0);
        double term = w * q;
        sum += term;
        if (j > lambda && (term < 1e-18 * sum || term == 0.0)) break;
    }
    w = w0;
    q = q0;
    d = d0;
    for (int j = j0; j > 0; --j) {
        q = std::max(0.0, q - d);  // Q(j, y) = Q(j+1, y) - y^j e^{-y} / j!
        d *= j / y;
        w *= j / lambda;
        double term = w * q;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return clamp01(sum);
}

namespace detail {

double gamma_product_log_pdf_ln(double ln_w, double alpha, double beta) {
    const double ln_t = 0.5 * std::log(4.0 * alpha * beta) + 0.5 * ln_w;
    if (ln_t > 500.0) return -std::numeric_limits<double>::infinity();
    const double pref = std::log(2.0) + 0.5 * (alpha + beta) * std::log(alpha * beta) +
                        (0.5 * (alpha + beta) - 1.0) * ln_w - std::lgamma(alpha) -
                        std::lgamma(beta);
    double lk;
    if (ln_t < -600.0) {
        // K_nu small-argument form, assembled from ln_t to dodge underflow
        double nu = std::abs(alpha - beta);
        lk = nu > 1e-8 ? std::log(0.5) + std::lgamma(nu) + nu * (std::log(2.0) - ln_t)
                       : std::log(-ln_t);  // K_0(t) ~ -log(t/2) - gamma_E
    } else {
        double t = std::exp(ln_t);
        lk = std::log(bessel_k_scaled(alpha - beta, t)) - t;
    }
    return pref + lk;
}

double gamma_product_log_pdf(double w, double alpha, double beta) {
    if (!(w > 0.0)) return -std::numeric_limits<double>::infinity();
    return gamma_product_log_pdf_ln(std::log(w), alpha, beta);
}

double gamma_product_pdf(double w, double alpha, double beta) {
    double l = gamma_product_log_pdf(w, alpha, beta);
    return l < -745.0 ? 0.0 : std::exp(l);
}

// log f_Y at ln_y, where Y = Xa*Xb*Hp. Integrating the pointing-loss density
// against the Gamma-product density in log-gain coordinates gives
//   f_Y(y) = xi^2 y^{xi^2-1} J,  J = int_{ln y}^inf e^{(1-xi^2)s} f_GG(e^s) ds.
// The peak of the log-integrand is located by a coarse scan and factored out,
// so the quadrature only ever sees exponentials near unity.
double composite_y_log_pdf(double ln_y, const FsoGainDensityParams& p) {
    const double xi2 = p.xi * p.xi;
    auto log_integrand = [&](double s) {
        return (1.0 - xi2) * s + gamma_product_log_pdf_ln(s, p.alpha, p.beta);
    };

    double peak_s = ln_y;
    double peak = log_integrand(ln_y);
    auto consider = [&](double s) {
        if (s < ln_y) return;
        double v = log_integrand(s);
        if (v > peak || !std::isfinite(peak)) {
            peak = v;
            peak_s = s;
        }
    };
    for (double s = -60.0; s <= 40.0; s += 2.0) consider(s);
    for (double ds : {1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0}) consider(ln_y + ds);
    if (!std::isfinite(peak)) return -std::numeric_limits<double>::infinity();

    // For large xi^2 the integrand is a boundary layer of width ~1/xi^2 at
    // the lower limit; rescale so the quadrature nodes resolve it.
    const double layer = std::max(1.0, xi2 - 1.0);
    auto shifted = [&](double sigma) {
        double e = log_integrand(ln_y + sigma / layer) - peak;
        return e < -745.0 ? 0.0 : std::exp(e);
    };
    QuadratureOptions opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-11;
    opts.max_intervals = 4000;
    double j_shifted;
    try {
        j_shifted = integrate_to_inf(shifted, 0.0, opts) / layer;
    } catch (const ConvergenceError& e) {
        if (e.achieved_error() <= 1e-9 * std::max(std::abs(e.value()), 1e-300)) {
            j_shifted = e.value() / layer;
        } else {
            throw;
        }
    }
    if (!(j_shifted > 0.0)) return -std::numeric_limits<double>::infinity();
    return std::log(xi2) + (xi2 - 1.0) * ln_y + peak + std::log(j_shifted);
}

double fso_gain_log_pdf_ln(double ln_x, const FsoGainDensityParams& p) {
    const int r = p.r();
    const double ln_y = std::log(p.h()) + (ln_x - std::log(p.mu_r)) / r;
    return composite_y_log_pdf(ln_y, p) + ln_y - std::log(static_cast<double>(r)) - ln_x;
}

double fso_gain_pdf_integral(double x, const FsoGainDensityParams& p) {
    double l = fso_gain_log_pdf_ln(std::log(x), p);
    return l < -745.0 ? 0.0 : std::exp(l);
}

bool residue_series_applicable(const FsoGainDensityParams& p) {
    double xi2 = p.xi * p.xi;
    // Residue poles collide whenever two of {xi^2, alpha, beta} differ by an
    // integer; also keep every Gamma(b_i - b_j) factor far from overflow.
    if (std::max({p.alpha, p.beta, xi2}) > 60.0) return false;
    auto off_integer = [](double v) {
        return std::abs(v - std::round(v)) > 1e-3;
    };
    return off_integer(p.alpha - p.beta) && off_integer(p.alpha - xi2) &&
           off_integer(p.beta - xi2);
}

// Residue expansion of G^{3,0}_{1,3}(z | xi^2+1; xi^2, alpha, beta).
// The xi^2 branch terminates after one term; the alpha/beta branches are
// Bessel-like alternating series, summed in long double. The z^{xi^2} factor
// is kept in log form so the expansion stays usable at extreme arguments.
double fso_gain_log_pdf_series_ln(double ln_x, const FsoGainDensityParams& p) {
    const int r = p.r();
    const long double xi2 = static_cast<long double>(p.xi) * p.xi;
    const long double a = p.alpha, b = p.beta;
    const long double ln_z =
        logl(static_cast<long double>(p.h()) * p.alpha * p.beta) +
        (static_cast<long double>(ln_x) - logl(static_cast<long double>(p.mu_r))) / r;
    const long double z = expl(ln_z);

    // bracket = G(z) / z^{xi^2}
    long double bracket = tgammal(a - xi2) * tgammal(b - xi2);
    auto branch = [&](long double b1, long double b2) -> long double {
        long double term = tgammal(b2 - b1) / (xi2 - b1) * expl((b1 - xi2) * ln_z);
        long double sum = term;
        for (int k = 1; k <= 600; ++k) {
            term *= -z * (xi2 - b1 - (k - 1)) /
                    (static_cast<long double>(k) * (b2 - b1 - k) * (xi2 - b1 - k));
            sum += term;
            if (fabsl(term) < 1e-22L * fabsl(sum) && k > 4) break;
        }
        return sum;
    };
    bracket += branch(a, b) + branch(b, a);
    if (!(bracket > 0.0L)) return -std::numeric_limits<double>::infinity();

    long double lf = logl(xi2) - lgammal(a) - lgammal(b) + xi2 * ln_z + logl(bracket) -
                     logl(static_cast<long double>(r)) - static_cast<long double>(ln_x);
    return static_cast<double>(lf);
}

double fso_gain_pdf_series(double x, const FsoGainDensityParams& p) {
    double l = fso_gain_log_pdf_series_ln(std::log(x), p);
    return l < -745.0 ? 0.0 : std::exp(l);
}

double fso_gain_log_pdf_ln_any(double ln_x, const FsoGainDensityParams& p) {
    double ln_z = std::log(p.h() * p.alpha * p.beta) + (ln_x - std::log(p.mu_r)) / p.r();
    if (ln_z <= 3.4011973816621555 /* log 30 */ && residue_series_applicable(p)) {
        return fso_gain_log_pdf_series_ln(ln_x, p);
    }
    return fso_gain_log_pdf_ln(ln_x, p);
}

}  // namespace detail

double fso_gain_pdf(double x, const FsoGainDensityParams& p) {
    p.validate();
    if (!(x > 0.0)) throw std::domain_error("fso_gain_pdf: x must be positive");
    double l = detail::fso_gain_log_pdf_ln_any(std::log(x), p);
    return l < -745.0 ? 0.0 : std::exp(l);
}

double fso_expected_value(const FsoGainDensityParams& p,
                          const std::function<double(double)>& g,
                          const QuadratureOptions& opts) {
    p.validate();
    // Gain mass can sit at x too small for doubles when xi^2 < r (the density
    // has an x^{xi^2/r - 1} spike); the substitution x = v^pow flattens it.
    const double xi2 = p.xi * p.xi;
    const double pow_sub = std::max(1.0, p.r() / xi2);
    double lower = integrate(
        [&](double v) {
            double ln_v = std::log(v);
            double ln_x = pow_sub * ln_v;
            double lf = detail::fso_gain_log_pdf_ln_any(ln_x, p) + std::log(pow_sub) +
                        (pow_sub - 1.0) * ln_v;
            if (lf < -745.0) return 0.0;
            return g(std::exp(ln_x)) * std::exp(lf);
        },
        0.0, 1.0, opts);
    double upper = integrate_to_inf(
        [&](double x) {
            double lf = detail::fso_gain_log_pdf_ln_any(std::log(x), p);
            if (lf < -745.0) return 0.0;
            return g(x) * std::exp(lf);
        },
        1.0, opts);
    return lower + upper;
}

}  // namespace rffso
