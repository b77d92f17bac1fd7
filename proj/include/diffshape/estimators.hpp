#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "diffshape/estimate.hpp"
#include "diffshape/sampling.hpp"
#include "diffshape/simulate.hpp"

namespace diffshape {

// The state problem the estimators operate on: domain, PDE data, solution
// provider and tracking target.
struct Problem {
    Domain domain = Domain::unit_disk();
    PDECoefficients coeffs;
    SolutionField solution;
    TrackingData tracking;
};

// Unit disk, Laplacian generator, f = 1, g = 0, analytic solution and the
// polynomial tracking target.
Problem benchmark_problem();

// The perturbed domains are pre-images of the identity perturbation; the
// usual push-forward convention carries the opposite sign.
enum class SignConvention { Preimage, Pushforward };

// Which face of the killed-process identity an estimator evaluates: the
// exit-kill random variable itself, or the survival-weighted exit.
enum class EstimatorKind { WeightBased, KillBased };

// Pointwise shape derivative of the state: mean over paths of
// survival weight x <grad u - grad g, V> at the exit point.
Estimate du_at(const Vec2& x, const PerturbationField& field, const Problem& problem,
               long n_paths, const SimConfig& cfg,
               EstimatorKind kind = EstimatorKind::WeightBased);

// Deterministic boundary term: integral of 1/2 |g - u_dag|^2 <V, n> over the
// boundary circle.
double surface_term(const PerturbationField& field, const BoundaryQuadrature& quad,
                    const Problem& problem);

// Initial-point measures and constants; independent of the direction V, so
// built once per domain and shared across directions.
struct MeasureSetup {
    ConstantsEstimate constants;
    std::shared_ptr<const InitialSampler> sampler;
};

MeasureSetup build_measure_setup(const Problem& problem, long n_constant_samples,
                                 uint64_t seed, int threads = 0);

struct ShapeDerivativeReport {
    Estimate dphi;              // assembled value in `convention`
    double surface_term = 0.0;  // preimage-orientation boundary integral
    Estimate boundary_plus;
    Estimate boundary_minus;
    Estimate c_plus;
    Estimate c_minus;
    SignConvention convention = SignConvention::Preimage;
};

// Mesh-free shape functional derivative:
//   C+ E[<V, grad u - grad g>(exit-kill from mu+)]
// - C- E[<V, grad u - grad g>(exit-kill from mu-)]
// - boundary term.
// A side whose constant is zero is skipped (its measure is void).
ShapeDerivativeReport dphi_free(const PerturbationField& field, const Problem& problem,
                                const MeasureSetup& setup, long n_paths, const SimConfig& cfg,
                                SignConvention convention = SignConvention::Preimage,
                                int quad_nodes = 720,
                                EstimatorKind kind = EstimatorKind::KillBased);

// L1-derivative of exit times for the Poisson exit-time problem
// (generator[u] + 1 = 0, g = 0): +-E[<grad u, V>(exit)] per mode.
enum class ExitPerturbationMode { Inflating, Deflating };

Estimate exit_time_l1_derivative(const Vec2& x, const PerturbationField& field,
                                 ExitPerturbationMode mode, const Problem& problem,
                                 long n_paths, const SimConfig& cfg);

// Evaluates E[eta(exit-kill)] two ways over independent path sets: by actual
// killing with the given intensity, and by weighting exits with the survival
// probability. The two estimates agree within Monte Carlo error.
std::pair<Estimate, Estimate> kill_weight_equivalence(
    const std::function<double(const Vec2&)>& intensity,
    const std::function<double(const Vec2&)>& eta, const Vec2& x0, const Problem& problem,
    long n_paths, const SimConfig& cfg);

// Stable sub-seed derivation so different estimator stages never share
// random streams.
uint64_t derive_seed(uint64_t seed, uint64_t tag);

// Per-path stream honoring the antithetic convention (pairs share a stream,
// odd members flip the Gaussian signs).
PathRng make_path_rng(uint64_t seed, std::size_t path_index, bool antithetic);

}  // namespace diffshape
