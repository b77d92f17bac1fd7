#include "diffshape/sampling.hpp"

#include <cmath>
#include <sstream>

#include "diffshape/errors.hpp"

namespace diffshape {

Classification classify(const Vec2& x, const SolutionField& solution,
                        const TrackingData& tracking) {
    if (!(x.norm2() < 1.0)) {
        std::ostringstream msg;
        msg << "classify: point (" << x.x << "," << x.y << ") lies outside the domain";
        throw DomainError(msg.str());
    }
    Classification c;
    c.weight = solution.u(x) - tracking.u_dag(x);
    c.side = c.weight >= 0.0 ? Side::Plus : Side::Minus;
    return c;
}

namespace {

constexpr double kBoxLo = -1.0;
constexpr double kBoxHi = 1.0;
constexpr double kBoxArea = (kBoxHi - kBoxLo) * (kBoxHi - kBoxLo);

double signed_part(double w, Side side) {
    if (side == Side::Plus) return w >= 0.0 ? w : 0.0;
    return w < 0.0 ? -w : 0.0;
}

Estimate constant_one_side(long n_samples, const SolutionField& solution,
                           const TrackingData& tracking, uint64_t seed, int threads,
                           Side side) {
    const Tally t = parallel_tally(static_cast<std::size_t>(n_samples), threads,
        [&](std::size_t i) -> std::pair<bool, double> {
            PathRng rng(seed, i);
            const Vec2 p{kBoxLo + (kBoxHi - kBoxLo) * rng.uniform(),
                         kBoxLo + (kBoxHi - kBoxLo) * rng.uniform()};
            if (!(p.norm2() < 1.0)) return {true, 0.0};
            const double w = solution.u(p) - tracking.u_dag(p);
            return {true, kBoxArea * signed_part(w, side)};
        });
    return make_estimate(t, seed);
}

}  // namespace

ConstantsEstimate estimate_constants(long n_samples, const SolutionField& solution,
                                     const TrackingData& tracking, uint64_t seed,
                                     int threads) {
    if (n_samples < 1000) throw ConfigError("estimate_constants: need at least 10^3 samples");
    ConstantsEstimate est;
    est.c_plus = constant_one_side(n_samples, solution, tracking, seed, threads, Side::Plus);
    est.c_minus = constant_one_side(n_samples, solution, tracking, seed, threads, Side::Minus);

    // hit-or-miss sanity: with zero in-domain samples both estimates are void
    long hits = 0;
    for (std::size_t i = 0; i < 64 && hits == 0; ++i) {
        PathRng rng(seed, i);
        const Vec2 p{kBoxLo + (kBoxHi - kBoxLo) * rng.uniform(),
                     kBoxLo + (kBoxHi - kBoxLo) * rng.uniform()};
        if (p.norm2() < 1.0) ++hits;
    }
    if (hits == 0 && est.c_plus.value == 0.0 && est.c_minus.value == 0.0) {
        throw SamplingError("estimate_constants: no samples landed inside the domain");
    }
    return est;
}

InitialSampler::InitialSampler(const SolutionField& solution, const TrackingData& tracking)
    : solution_(solution), tracking_(tracking) {
    constexpr int kScan = 401;
    double max_abs = 0.0;
    for (int i = 0; i < kScan; ++i) {
        for (int j = 0; j < kScan; ++j) {
            const Vec2 p{kBoxLo + (kBoxHi - kBoxLo) * i / (kScan - 1),
                         kBoxLo + (kBoxHi - kBoxLo) * j / (kScan - 1)};
            if (!(p.norm2() < 1.0)) continue;
            max_abs = std::max(max_abs, std::abs(solution_.u(p) - tracking_.u_dag(p)));
        }
    }
    envelope_ = 1.05 * max_abs;
    if (envelope_ <= 0.0) {
        throw SamplingError("InitialSampler: weight vanishes identically on the domain");
    }
}

Vec2 InitialSampler::sample(Side side, PathRng& rng) const {
    constexpr long kMaxProposals = 10'000'000;
    for (long it = 0; it < kMaxProposals; ++it) {
        const Vec2 p{kBoxLo + (kBoxHi - kBoxLo) * rng.uniform(),
                     kBoxLo + (kBoxHi - kBoxLo) * rng.uniform()};
        if (!(p.norm2() < 1.0)) continue;
        const double w = solution_.u(p) - tracking_.u_dag(p);
        if (std::abs(w) > envelope_) {
            std::ostringstream msg;
            msg << "InitialSampler: |weight| = " << std::abs(w) << " at (" << p.x << "," << p.y
                << ") exceeds the envelope " << envelope_ << "; refresh the envelope";
            throw EnvelopeError(msg.str());
        }
        const Side s = w >= 0.0 ? Side::Plus : Side::Minus;
        if (s != side) continue;
        if (rng.uniform() * envelope_ < std::abs(w)) return p;
    }
    throw SamplingError("InitialSampler: no acceptance within the proposal cap");
}

}  // namespace diffshape
