#include "rffso/mc.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace rffso {

namespace {

struct TrialCounts {
    std::vector<uint64_t> failures;  // per round
    uint64_t nesting_violations = 0;

    explicit TrialCounts(int m_max) : failures(m_max, 0) {}

    void operator+=(const TrialCounts& other) {
        for (size_t i = 0; i < failures.size(); ++i) failures[i] += other.failures[i];
        nesting_violations += other.nesting_violations;
    }
};

// Simulates trials [t0, t1). Deterministic in the trial index, so any
// partition across workers yields identical totals.
TrialCounts run_trials(const FsoLinkParams& fso, const RfLinkParams& rf,
                       const HarqParams& harq, const McConfig& cfg, uint64_t t0, uint64_t t1) {
    const int M = harq.m_max;
    const int N = harq.n_fso;
    const double R = harq.rate;
    const double psi = harq.psi;
    const double s = pa_output_power(rf);
    const double c_p = fso.c_r() * fso.p_fso;
    const double inv_xi2 = 1.0 / (fso.xi * fso.xi);
    const double inv_h = 1.0 / fso.h();
    const double mu_r = fso.mu_r();
    const bool heterodyne = fso.detection == Detection::heterodyne;

    TrialCounts counts(M);
    for (uint64_t t = t0; t < t1; ++t) {
        const uint64_t stream_trial = cfg.antithetic ? (t >> 1) : t;
        const bool mirror = cfg.antithetic && (t & 1);
        RandomStream rng(cfg.seed, stream_trial);

        rng.set_draw(0);
        const double rf_term = std::log1p(s * sample_rf_gain(rf, rng));

        double fso_sum = 0.0;
        bool decoded = false;
        uint32_t slot = 1;
        for (int m = 1; m <= M; ++m) {
            if (c_p > 0.0) {
                for (int k = 0; k < N; ++k) {
                    rng.set_draw(slot++);
                    double xa = sample_gamma_mean1(fso.alpha, rng);
                    double xb = sample_gamma_mean1(fso.beta, rng);
                    double u = rng.next_double();
                    if (mirror) u = 1.0 - u;
                    double y = xa * xb * std::pow(u, inv_xi2) * inv_h;
                    double g = heterodyne ? mu_r * y : mu_r * y * y;
                    fso_sum += std::log1p(c_p * g);
                }
            }
            // failure at round m iff W_m <= R/m, i.e. m*W_m <= R; the scaled
            // form m*W_m is nondecreasing in m, which nests the events.
            const double v = m * rf_term + psi * fso_sum / N;
            const bool fail = v <= R;
            if (fail) {
                counts.failures[m - 1]++;
                if (decoded) counts.nesting_violations++;
            } else {
                decoded = true;
            }
        }
    }
    return counts;
}

}  // namespace

void McConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("McConfig: trials must be >= 1");
}

McEstimate simulate_harq(const FsoLinkParams& fso, const RfLinkParams& rf,
                         const HarqParams& harq, const McConfig& cfg) {
    fso.validate();
    rf.validate();
    harq.validate();
    cfg.validate();

    int workers = cfg.workers > 0 ? cfg.workers
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    const uint64_t n = cfg.trials;
    workers = static_cast<int>(std::min<uint64_t>(workers, n));

    std::vector<TrialCounts> partials(workers, TrialCounts(harq.m_max));
    std::vector<std::thread> pool;
    const uint64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        uint64_t t0 = w * chunk;
        uint64_t t1 = std::min(n, t0 + chunk);
        if (t0 >= t1) break;
        pool.emplace_back([&, w, t0, t1]() { partials[w] = run_trials(fso, rf, harq, cfg, t0, t1); });
    }
    for (auto& th : pool) th.join();

    TrialCounts total(harq.m_max);
    for (const auto& part : partials) total += part;
    if (total.nesting_violations != 0) {
        throw std::logic_error("simulate_harq: decoding events not nested across rounds");
    }

    McEstimate est;
    est.phi_hat.resize(harq.m_max);
    est.std_err.resize(harq.m_max);
    for (int m = 0; m < harq.m_max; ++m) {
        double p = static_cast<double>(total.failures[m]) / static_cast<double>(n);
        est.phi_hat[m] = p;
        est.std_err[m] = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    }
    DecodingProfile profile;
    profile.phi = est.phi_hat;
    profile.method = Method::monte_carlo;
    PerformanceMetrics metrics = throughput_and_outage(profile, harq.rate);
    est.throughput_hat = metrics.throughput;
    est.outage_hat = metrics.outage;
    return est;
}

RateStats simulate_fso_rate_stats(const FsoLinkParams& fso, double psi, uint64_t samples,
                                  uint64_t seed) {
    fso.validate();
    if (!(psi > 0.0)) throw std::invalid_argument("simulate_fso_rate_stats: psi must be positive");
    if (samples < 1000) throw std::invalid_argument("simulate_fso_rate_stats: need >= 1000 samples");

    RateStats stats;
    if (fso.p_fso == 0.0) return stats;

    const double c_p = fso.c_r() * fso.p_fso;
    long double sum = 0.0L, sum2 = 0.0L;
    for (uint64_t i = 0; i < samples; ++i) {
        RandomStream rng(seed, i);
        double v = psi * std::log1p(c_p * sample_fso_gain(fso, rng));
        sum += v;
        sum2 += static_cast<long double>(v) * v;
    }
    const double n = static_cast<double>(samples);
    stats.mean = static_cast<double>(sum / samples);
    stats.variance = std::max(0.0, static_cast<double>(sum2 / samples) - stats.mean * stats.mean) *
                     (n / (n - 1.0));
    stats.mean_se = std::sqrt(stats.variance / n);
    stats.variance_se = stats.variance * std::sqrt(2.0 / (n - 1.0));
    return stats;
}

}  // namespace rffso
