#pragma once

#include <optional>
#include <vector>

#include "diffshape/estimators.hpp"

namespace diffshape {

// Tracking functional on a (possibly perturbed) domain: masked midpoint
// quadrature of 1/2 |u - u_dag|^2 over the bounding box [-1.25, 1.25]^2 at
// resolution n x n. Deterministic.
double functional_value(const Domain& domain, const SolutionField& solution,
                        const TrackingData& tracking, int quad_resolution);

// Solution value on a perturbed domain by simulation: mean exit time of the
// driving diffusion, recorded as (k - 1/2) dt at the first outside step.
// Valid for the exit-time problem only (f constant in u, g = 0); a state
// dependent source is rejected with UnsupportedError.
Estimate perturbed_solution_mc(const Domain& domain, const Vec2& x,
                               const PDECoefficients& coeffs, long n_paths,
                               const SimConfig& cfg);

// One row of the Taylor remainder study at a single distortion factor.
struct TaylorRecord {
    double eps = 0.0;
    double j_perturbed = 0.0;
    double j_perturbed_stderr = 0.0;  // 0 in analytic mode
    double j_base = 0.0;
    double j_base_stderr = 0.0;
    double derivative = 0.0;  // first-order coefficient used in the remainder
    double remainder = 0.0;   // |j_perturbed - j_base + eps * derivative|
};

// Log-log least-squares fit of the remainder against eps over the
// noise-filtered range (points whose remainder clears 3x the combined
// standard error of the two functional values).
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double eps_lo = 0.0;
    double eps_hi = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
    bool conclusive = false;  // at least 3 points survived the filter
};

enum class TaylorMode {
    AnalyticRadial,  // closed-form ball integral; radial fields only (V1)
    NestedMc,        // functional_value over per-node simulated solutions
};

struct TaylorOptions {
    TaylorMode mode = TaylorMode::AnalyticRadial;
    std::vector<double> eps_list;  // empty = 0.1 * 2^-k, k = 0..11 analytic, 0..6 nested
    std::optional<double> supplied_derivative;   // preimage convention; unset = estimate
    long n_paths_per_node = 160;                 // nested mode, per quadrature node
    int grid_resolution = 192;                   // nested mode functional grid
    long derivative_paths = 200'000;             // when the derivative is estimated
    long constants_samples = 1'000'000;
    SimConfig sim;
};

struct TaylorResult {
    std::vector<TaylorRecord> records;
    SlopeFit fit;
    double derivative = 0.0;
};

// Closed-form value of the tracking functional on the ball of radius
// 1/(1-eps) with its own exit-time solution. That ball is the pre-image
// domain of the radial direction at distortion -eps, the family the Taylor
// remainder walks through; eps = 0 gives the base disk value.
double analytic_radial_functional(double eps);

// Taylor remainder test of the first-order expansion. The remainder adds
// +eps*derivative and the derivative is the d/deps of the pre-image family,
// so j_perturbed is evaluated on the inverse distortion {x - eps*V(x) in
// domain}. Nested mode reuses one random stream per quadrature node across
// all eps so the remainders difference common noise away.
TaylorResult taylor_test(const PerturbationField& field, const Problem& problem,
                         const TaylorOptions& opt);

}  // namespace diffshape
