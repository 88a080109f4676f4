#ifndef RFFSO_RNG_HPP
#define RFFSO_RNG_HPP

#include <cmath>
#include <cstdint>

namespace rffso {

// Philox4x32-10 counter-based generator. Every (seed, trial, draw) triple
// addresses an independent substream, so results do not depend on how trials
// are scheduled across workers.
class Philox4x32 {
public:
    struct Block {
        uint32_t w[4];
    };

    static Block generate(uint64_t seed, uint64_t trial, uint32_t draw, uint32_t seq) {
        uint32_t c0 = static_cast<uint32_t>(trial);
        uint32_t c1 = static_cast<uint32_t>(trial >> 32);
        uint32_t c2 = draw;
        uint32_t c3 = seq;
        uint32_t k0 = static_cast<uint32_t>(seed);
        uint32_t k1 = static_cast<uint32_t>(seed >> 32);
        for (int round = 0; round < 10; ++round) {
            uint64_t p0 = 0xD2511F53ULL * c0;
            uint64_t p1 = 0xCD9E8D57ULL * c2;
            uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
            uint32_t lo0 = static_cast<uint32_t>(p0);
            uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
            uint32_t lo1 = static_cast<uint32_t>(p1);
            uint32_t n0 = hi1 ^ c1 ^ k0;
            uint32_t n1 = lo1;
            uint32_t n2 = hi0 ^ c3 ^ k1;
            uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        return Block{{c0, c1, c2, c3}};
    }
};

// One substream of uniforms/normals addressed by (seed, trial, draw).
// Cheap to construct; advance draw_index to start a fresh substream.
class RandomStream {
public:
    RandomStream(uint64_t seed, uint64_t trial, uint32_t draw = 0)
        : seed_(seed), trial_(trial), draw_(draw) {}

    void set_draw(uint32_t draw) {
        draw_ = draw;
        seq_ = 0;
        buffered_ = 0;
        have_normal_ = false;
    }

    uint32_t draw_index() const { return draw_; }

    uint64_t next_u64() {
        if (buffered_ < 2) refill();
        uint64_t hi = buf_[--buffered_];
        uint64_t lo = buf_[--buffered_];
        return (hi << 32) | lo;
    }

    /// Uniform on the open interval (0,1).
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    /// Standard normal via Box-Muller (pairs cached).
    double next_normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_normal_;
        }
        double u1 = next_double();
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double angle = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(angle);
        have_normal_ = true;
        return r * std::cos(angle);
    }

private:
    void refill() {
        Philox4x32::Block b = Philox4x32::generate(seed_, trial_, draw_, seq_++);
        buf_[0] = b.w[0];
        buf_[1] = b.w[1];
        buf_[2] = b.w[2];
        buf_[3] = b.w[3];
        buffered_ = 4;
    }

    uint64_t seed_;
    uint64_t trial_;
    uint32_t draw_ = 0;
    uint32_t seq_ = 0;
    uint32_t buf_[4] = {0, 0, 0, 0};
    int buffered_ = 0;
    bool have_normal_ = false;
    double cached_normal_ = 0.0;
};

/// Gamma(shape, scale 1) draw, exact for any shape > 0.
/// Marsaglia-Tsang squeeze for shape >= 1, boosting below.
double sample_gamma(double shape, RandomStream& rng);

/// Gamma with unit mean: Gamma(shape, scale 1/shape).
inline double sample_gamma_mean1(double shape, RandomStream& rng) {
    return sample_gamma(shape, rng) / shape;
}

}  // namespace rffso

#endif
