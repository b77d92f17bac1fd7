#pragma once

#include <cmath>
#include <cstdint>

#include "diffshape/parallel.hpp"

namespace diffshape {

// Monte Carlo result. Estimates with a truncation fraction at or above 1e-3
// are flagged.
struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    long n_effective = 0;
    long n_truncated = 0;
    uint64_t seed = 0;
    bool flagged = false;
};

inline Estimate make_estimate(const Tally& t, uint64_t seed) {
    Estimate e;
    e.n_effective = t.n;
    e.n_truncated = t.discarded;
    e.seed = seed;
    if (t.n > 0) {
        e.value = t.sum / t.n;
        if (t.n > 1) {
            const double var = std::max(0.0, (t.sumsq - t.sum * t.sum / t.n) / (t.n - 1));
            e.stderr_ = std::sqrt(var / t.n);
        }
    }
    const long total = t.n + t.discarded;
    e.flagged = total == 0 || static_cast<double>(t.discarded) / total >= 1e-3;
    return e;
}

}  // namespace diffshape
