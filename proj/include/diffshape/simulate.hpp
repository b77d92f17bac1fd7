#pragma once

#include <cstdint>
#include <span>

#include "diffshape/fields.hpp"
#include "diffshape/geometry.hpp"
#include "diffshape/rng.hpp"

namespace diffshape {

struct SimConfig {
    double dt = 1e-3;
    long max_steps = 1'000'000;
    uint64_t seed = 1;
    bool antithetic = false;
    int threads = 0;  // 0 = hardware concurrency
};

enum class ExitStatus { Exited, Killed, Truncated };

// Result of one trajectory: boundary point on exit, cemetery on kill.
struct ExitKillOutcome {
    ExitStatus status = ExitStatus::Truncated;
    Vec2 point{};            // meaningful for Exited only
    long steps_taken = 0;
    double exit_time_estimate = 0.0;  // steps * dt, meaningful for Exited/Killed
    double log_survival = 0.0;        // -integral of the killing intensity along the path
};

// One Euler-Maruyama update: x + mu(x) dt + sigma(x) sqrt(dt) gaussian.
Vec2 em_step(const Vec2& x, const PDECoefficients& coeffs, double dt, const Vec2& gaussian);

enum class KillMode {
    DoublyStochastic,  // draw E ~ Exp(1), kill when the integrated intensity reaches it
    WeightOnly,        // never kill; report the accumulated survival weight instead
};

// Simulates one exit-kill trajectory from x0 following the discretized
// killing clock: the intensity -df_du is accumulated at the pre-move position
// and the kill test precedes each position update. On domain exit the
// boundary point is the segment-circle crossing.
ExitKillOutcome simulate_exit_kill(const Vec2& x0, const Domain& domain,
                                   const PDECoefficients& coeffs, const SolutionField& solution,
                                   const SimConfig& cfg, PathRng& rng,
                                   KillMode mode = KillMode::DoublyStochastic);

// First-exit time of the diffusion from an arbitrary (possibly perturbed)
// domain, recorded as (k - 1/2) dt at the first outside step. No killing, no
// boundary projection. Returns a negative value when truncated.
double simulate_exit_time(const Vec2& x0, const Domain& domain, const PDECoefficients& coeffs,
                          const SimConfig& cfg, PathRng& rng);

// exp(sum over path positions of df_du(x_j, u(x_j)) dt); the last position
// (the exit point) is excluded, matching the discrete killing clock.
double discount_weight(std::span<const Vec2> path, const PDECoefficients& coeffs,
                       const SolutionField& solution, double dt);

}  // namespace diffshape
