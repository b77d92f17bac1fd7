#pragma once

#include <cmath>
#include <cstdint>

namespace diffshape {

// Deterministic per-path random stream. The state is derived from
// (seed, stream) through a splitmix64 expansion, so path `i` of a run with a
// given seed produces the same variates no matter which thread simulates it
// or in which order paths are scheduled. Core generator: xoshiro256++.
class PathRng {
public:
    PathRng(uint64_t seed, uint64_t stream) {
        uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        for (auto& word : state_) {
            word = splitmix64(z);
        }
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform on (0, 1)
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal, Box-Muller (pairs are cached)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return negate_ ? -spare_ : spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double th = 2.0 * M_PI * uniform();
        spare_ = r * std::sin(th);
        have_spare_ = true;
        const double value = r * std::cos(th);
        return negate_ ? -value : value;
    }

    // Exp(1)
    double exponential() { return -std::log(uniform()); }

    // Antithetic switch: when set, normal() returns sign-flipped variates.
    void set_negate_normals(bool negate) { negate_ = negate; }

private:
    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    static uint64_t splitmix64(uint64_t& z) {
        z += 0x9e3779b97f4a7c15ULL;
        uint64_t r = z;
        r = (r ^ (r >> 30)) * 0xbf58476d1ce4e5b9ULL;
        r = (r ^ (r >> 27)) * 0x94d049bb133111ebULL;
        return r ^ (r >> 31);
    }

    uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
    bool negate_ = false;
};

}  // namespace diffshape
