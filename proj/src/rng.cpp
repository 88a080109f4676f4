#include "rffso/rng.hpp"

#include <stdexcept>

namespace rffso {

double sample_gamma(double shape, RandomStream& rng) {
    if (!(shape > 0.0)) throw std::invalid_argument("sample_gamma: shape must be positive");
    if (shape < 1.0) {
        // boost: Gamma(a) = Gamma(a+1) * U^{1/a}
        double g = sample_gamma(shape + 1.0, rng);
        return g * std::pow(rng.next_double(), 1.0 / shape);
    }
    // Marsaglia-Tsang with squeeze; exact rejection sampler.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = rng.next_normal();
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = rng.next_double();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace rffso
