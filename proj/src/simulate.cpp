#include "diffshape/simulate.hpp"

#include <cmath>
#include <limits>

#include "diffshape/errors.hpp"

namespace diffshape {

Vec2 em_step(const Vec2& x, const PDECoefficients& coeffs, double dt, const Vec2& gaussian) {
    const double sdt = std::sqrt(dt);
    Vec2 next = x;
    if (!coeffs.mu_is_zero) next += coeffs.mu(x) * dt;
    const Mat2 sigma = coeffs.sigma_is_const ? coeffs.sigma_const : coeffs.sigma(x);
    next += sigma.apply(gaussian) * sdt;
    return next;
}

namespace {

double killing_intensity(const PDECoefficients& coeffs, const SolutionField& solution,
                         const Vec2& x) {
    const double d = coeffs.df_du(x, solution.u(x));
    if (d > 1e-12) {
        throw CoefficientError("df_du > 0 encountered; the killing intensity must be nonnegative");
    }
    return -d;
}

}  // namespace

ExitKillOutcome simulate_exit_kill(const Vec2& x0, const Domain& domain,
                                   const PDECoefficients& coeffs, const SolutionField& solution,
                                   const SimConfig& cfg, PathRng& rng, KillMode mode) {
    const bool kill = (mode == KillMode::DoublyStochastic) && !coeffs.intensity_is_zero;
    const double threshold = kill ? rng.exponential() : std::numeric_limits<double>::infinity();

    ExitKillOutcome out;
    Vec2 x = x0;
    double clock = 0.0;
    for (long k = 1; k <= cfg.max_steps; ++k) {
        if (!coeffs.intensity_is_zero) {
            clock += killing_intensity(coeffs, solution, x) * cfg.dt;
            if (clock >= threshold) {
                out.status = ExitStatus::Killed;
                out.steps_taken = k;
                out.exit_time_estimate = k * cfg.dt;
                out.log_survival = -clock;
                return out;
            }
        }
        const Vec2 gaussian{rng.normal(), rng.normal()};
        const Vec2 next = em_step(x, coeffs, cfg.dt, gaussian);
        if (!domain.contains(next)) {
            out.status = ExitStatus::Exited;
            out.point = project_exit(domain, x, next);
            out.steps_taken = k;
            out.exit_time_estimate = k * cfg.dt;
            out.log_survival = -clock;
            return out;
        }
        x = next;
    }
    out.status = ExitStatus::Truncated;
    out.steps_taken = cfg.max_steps;
    out.exit_time_estimate = cfg.max_steps * cfg.dt;
    out.log_survival = -clock;
    return out;
}

double simulate_exit_time(const Vec2& x0, const Domain& domain, const PDECoefficients& coeffs,
                          const SimConfig& cfg, PathRng& rng) {
    Vec2 x = x0;
    for (long k = 1; k <= cfg.max_steps; ++k) {
        const Vec2 gaussian{rng.normal(), rng.normal()};
        x = em_step(x, coeffs, cfg.dt, gaussian);
        if (!domain.contains(x)) return (k - 0.5) * cfg.dt;
    }
    return -1.0;
}

double discount_weight(std::span<const Vec2> path, const PDECoefficients& coeffs,
                       const SolutionField& solution, double dt) {
    double integral = 0.0;
    const std::size_t steps = path.size() > 0 ? path.size() - 1 : 0;
    for (std::size_t j = 0; j < steps; ++j) {
        integral += coeffs.df_du(path[j], solution.u(path[j])) * dt;
    }
    return std::exp(integral);
}

}  // namespace diffshape
