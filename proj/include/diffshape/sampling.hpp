#pragma once

#include <cstdint>

#include "diffshape/estimate.hpp"
#include "diffshape/fields.hpp"
#include "diffshape/geometry.hpp"
#include "diffshape/rng.hpp"

namespace diffshape {

// Sign split of the domain by d(phi)/du = u - u_dag for the tracking
// functional. Ties (weight exactly 0) classify as Plus.
enum class Side { Plus, Minus };

struct Classification {
    Side side = Side::Plus;
    double weight = 0.0;  // u(x) - u_dag(x)
};

// Throws DomainError when x lies outside the unit disk.
Classification classify(const Vec2& x, const SolutionField& solution,
                        const TrackingData& tracking);

// The nonnegative constants C+- = +-integral of the signed weight over its
// sign region, estimated hit-or-miss over the bounding box [-1,1]^2. They do
// not depend on any perturbation direction.
struct ConstantsEstimate {
    Estimate c_plus;
    Estimate c_minus;
};

ConstantsEstimate estimate_constants(long n_samples, const SolutionField& solution,
                                     const TrackingData& tracking, uint64_t seed,
                                     int threads = 0);

// Acceptance-rejection sampler for the initial-point measures mu+-, whose
// densities are proportional to |u - u_dag| restricted to the sign regions.
// The envelope bound is 1.05x the max |weight| over a 401x401 grid scan of
// the bounding box.
class InitialSampler {
public:
    InitialSampler(const SolutionField& solution, const TrackingData& tracking);

    double envelope() const { return envelope_; }

    // Draws one point distributed per mu_side. Throws EnvelopeError when a
    // proposal's |weight| exceeds the envelope (prompting a refresh), and
    // SamplingError when no acceptance occurs within an iteration cap.
    Vec2 sample(Side side, PathRng& rng) const;

private:
    SolutionField solution_;
    TrackingData tracking_;
    double envelope_ = 0.0;
};

}  // namespace diffshape
