#ifndef RFFSO_QUADRATURE_HPP
#define RFFSO_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace rffso {

/// Thrown when an adaptive integration cannot reach the requested tolerance.
/// Carries the best error estimate achieved so the caller can decide whether
/// the partial result is still usable.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double value, double achieved_error)
        : std::runtime_error(what + " (value=" + std::to_string(value) +
                             ", error estimate=" + std::to_string(achieved_error) + ")"),
          value_(value),
          achieved_error_(achieved_error) {}

    double value() const noexcept { return value_; }
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double value_;
    double achieved_error_;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_intervals = 4000;
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton iteration on
// P_n. Machine-precision and table-free.
template <int N>
struct GaussRule {
    double node[N];
    double weight[N];

    GaussRule() {
        for (int i = 0; i < (N + 1) / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (N + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < N; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
                }
                pp = N * (x * p0 - p1) / (x * x - 1.0);
                double dx = p0 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            node[i] = -x;
            node[N - 1 - i] = x;
            weight[i] = weight[N - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
        }
    }
};

inline const GaussRule<7>& gauss7() {
    static const GaussRule<7> rule;
    return rule;
}
inline const GaussRule<15>& gauss15() {
    static const GaussRule<15> rule;
    return rule;
}

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel evaluate_panel(F&& f, double a, double b) {
    const auto& g7 = gauss7();
    const auto& g15 = gauss15();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s7 = 0.0, s15 = 0.0;
    bool finite = true;
    for (int i = 0; i < 7; ++i) {
        double v = f(mid + half * g7.node[i]);
        if (!std::isfinite(v)) finite = false;
        s7 += g7.weight[i] * v;
    }
    for (int i = 0; i < 15; ++i) {
        double v = f(mid + half * g15.node[i]);
        if (!std::isfinite(v)) finite = false;
        s15 += g15.weight[i] * v;
    }
    s7 *= half;
    s15 *= half;
    Panel p{a, b, s15, std::abs(s15 - s7)};
    if (!finite) {
        p.value = 0.0;
        p.error = std::numeric_limits<double>::max();
    }
    return p;
}

}  // namespace detail

/// Adaptive Gauss(7)/Gauss(15) integration over a finite interval.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
    if (!(a < b)) return 0.0;
    std::priority_queue<detail::Panel> panels;
    detail::Panel first = detail::evaluate_panel(f, a, b);
    double total = first.value;
    double total_err = first.error;
    panels.push(first);
    int n = 1;
    while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (n >= opts.max_intervals) {
            throw ConvergenceError("quadrature failed to reach tolerance", total, total_err);
        }
        detail::Panel worst = panels.top();
        panels.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            // Interval width exhausted double precision; accept what we have.
            if (worst.error == std::numeric_limits<double>::max()) {
                throw ConvergenceError("non-finite integrand", total, total_err);
            }
            panels.push(worst);
            break;
        }
        detail::Panel left = detail::evaluate_panel(f, worst.a, mid);
        detail::Panel right = detail::evaluate_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++n;
    }
    return total;
}

/// Integral over [a, inf), mapped to [0,1) by x = a + t/(1-t).
/// The integrand must decay faster than 1/x^2; contributions where the
/// Jacobian would overflow are treated as zero.
template <class F>
double integrate_to_inf(F&& f, double a, const QuadratureOptions& opts = {}) {
    auto mapped = [&f, a](double t) -> double {
        double omt = 1.0 - t;
        if (omt < 1e-150) return 0.0;
        double x = a + t / omt;
        double v = f(x);
        if (v == 0.0) return 0.0;
        return v / (omt * omt);
    };
    return integrate(mapped, 0.0, 1.0, opts);
}

}  // namespace rffso

#endif
