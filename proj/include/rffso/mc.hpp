#ifndef RFFSO_MC_HPP
#define RFFSO_MC_HPP

#include <cstdint>
#include <vector>

#include "rffso/analysis.hpp"

namespace rffso {

struct McConfig {
    uint64_t trials = 100000;
    uint64_t seed = 1;
    bool antithetic = false;  // mirror the pointing-loss uniform across trial pairs
    int workers = 0;          // 0 = hardware concurrency

    void validate() const;
};

struct McEstimate {
    std::vector<double> phi_hat;  // failure frequency per round
    std::vector<double> std_err;  // binomial standard errors
    double throughput_hat = 0.0;
    double outage_hat = 0.0;
};

/// Simulates the HARQ process exactly: one quasi-static RF gain per trial,
/// M*N fresh FSO gains, failure at round m when
///   log(1+s*G_RF) + (psi/(mN)) * sum_{k<=mN} log(1+c_r*P_FSO*G_k) <= R/m.
/// Bit-reproducible for fixed (seed, trials) under any worker count.
McEstimate simulate_harq(const FsoLinkParams& fso, const RfLinkParams& rf,
                         const HarqParams& harq, const McConfig& cfg);

struct RateStats {
    double mean = 0.0;
    double variance = 0.0;
    double mean_se = 0.0;
    double variance_se = 0.0;
};

/// Empirical mean/variance of psi * log(1 + c_r * P_FSO * G) over `samples`
/// independent gains.
RateStats simulate_fso_rate_stats(const FsoLinkParams& fso, double psi,
                                  uint64_t samples, uint64_t seed);

}  // namespace rffso

#endif
