#include "diffshape/estimators.hpp"

#include <cmath>

#include "diffshape/errors.hpp"
#include "diffshape/parallel.hpp"

namespace diffshape {

namespace {

// distinct tags per estimator stage
constexpr uint64_t kTagDu = 1;
constexpr uint64_t kTagConstants = 2;
constexpr uint64_t kTagBoundaryPlus = 3;
constexpr uint64_t kTagBoundaryMinus = 4;
constexpr uint64_t kTagExitTime = 5;
constexpr uint64_t kTagKillSide = 6;
constexpr uint64_t kTagWeightSide = 7;

}  // namespace

uint64_t derive_seed(uint64_t seed, uint64_t tag) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

PathRng make_path_rng(uint64_t seed, std::size_t path_index, bool antithetic) {
    PathRng rng(seed, antithetic ? path_index >> 1 : path_index);
    rng.set_negate_normals(antithetic && (path_index & 1));
    return rng;
}

Problem benchmark_problem() {
    Problem p;
    p.domain = Domain::unit_disk();
    p.coeffs = benchmark_coefficients();
    p.solution = benchmark_solution();
    p.tracking = benchmark_tracking();
    return p;
}

namespace {

double exit_payoff(const PerturbationField& field, const Problem& problem, const Vec2& y) {
    const Vec2 grad = problem.solution.grad_u(y) - problem.coeffs.grad_g(y);
    return field(y).dot(grad);
}

}  // namespace

Estimate du_at(const Vec2& x, const PerturbationField& field, const Problem& problem,
               long n_paths, const SimConfig& cfg, EstimatorKind kind) {
    if (!problem.domain.contains(x)) {
        throw DomainError("du_at: evaluation point lies outside the domain");
    }
    const uint64_t seed = derive_seed(cfg.seed, kTagDu);
    const KillMode mode =
        kind == EstimatorKind::WeightBased ? KillMode::WeightOnly : KillMode::DoublyStochastic;
    const Tally t = parallel_tally(static_cast<std::size_t>(n_paths), cfg.threads,
        [&](std::size_t i) -> std::pair<bool, double> {
            PathRng rng = make_path_rng(seed, i, cfg.antithetic);
            const ExitKillOutcome out =
                simulate_exit_kill(x, problem.domain, problem.coeffs, problem.solution, cfg, rng,
                                   mode);
            if (out.status == ExitStatus::Truncated) return {false, 0.0};
            if (out.status == ExitStatus::Killed) return {true, 0.0};
            double v = exit_payoff(field, problem, out.point);
            if (kind == EstimatorKind::WeightBased) v *= std::exp(out.log_survival);
            return {true, v};
        });
    return make_estimate(t, cfg.seed);
}

double surface_term(const PerturbationField& field, const BoundaryQuadrature& quad,
                    const Problem& problem) {
    double acc = 0.0;
    for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
        const Vec2& y = quad.nodes[k];
        const double r = problem.coeffs.g(y) - problem.tracking.u_dag(y);
        acc += quad.weights[k] * 0.5 * r * r * field(y).dot(quad.normals[k]);
    }
    return acc;
}

MeasureSetup build_measure_setup(const Problem& problem, long n_constant_samples, uint64_t seed,
                                 int threads) {
    MeasureSetup setup;
    setup.constants = estimate_constants(n_constant_samples, problem.solution, problem.tracking,
                                         derive_seed(seed, kTagConstants), threads);
    setup.sampler = std::make_shared<const InitialSampler>(problem.solution, problem.tracking);
    return setup;
}

namespace {

Estimate boundary_expectation(Side side, const PerturbationField& field, const Problem& problem,
                              const MeasureSetup& setup, long n_paths, const SimConfig& cfg,
                              EstimatorKind kind) {
    const uint64_t seed =
        derive_seed(cfg.seed, side == Side::Plus ? kTagBoundaryPlus : kTagBoundaryMinus);
    const KillMode mode =
        kind == EstimatorKind::WeightBased ? KillMode::WeightOnly : KillMode::DoublyStochastic;
    const Tally t = parallel_tally(static_cast<std::size_t>(n_paths), cfg.threads,
        [&](std::size_t i) -> std::pair<bool, double> {
            PathRng rng = make_path_rng(seed, i, cfg.antithetic);
            const Vec2 x0 = setup.sampler->sample(side, rng);
            const ExitKillOutcome out =
                simulate_exit_kill(x0, problem.domain, problem.coeffs, problem.solution, cfg, rng,
                                   mode);
            if (out.status == ExitStatus::Truncated) return {false, 0.0};
            if (out.status == ExitStatus::Killed) return {true, 0.0};
            double v = exit_payoff(field, problem, out.point);
            if (kind == EstimatorKind::WeightBased) v *= std::exp(out.log_survival);
            return {true, v};
        });
    return make_estimate(t, cfg.seed);
}

}  // namespace

ShapeDerivativeReport dphi_free(const PerturbationField& field, const Problem& problem,
                                const MeasureSetup& setup, long n_paths, const SimConfig& cfg,
                                SignConvention convention, int quad_nodes, EstimatorKind kind) {
    ShapeDerivativeReport report;
    report.convention = convention;
    report.c_plus = setup.constants.c_plus;
    report.c_minus = setup.constants.c_minus;
    report.surface_term = surface_term(field, circle_quadrature(quad_nodes), problem);

    if (report.c_plus.value != 0.0) {
        report.boundary_plus =
            boundary_expectation(Side::Plus, field, problem, setup, n_paths, cfg, kind);
    }
    if (report.c_minus.value != 0.0) {
        report.boundary_minus =
            boundary_expectation(Side::Minus, field, problem, setup, n_paths, cfg, kind);
    }

    const double cp = report.c_plus.value;
    const double cm = report.c_minus.value;
    const double ep = report.boundary_plus.value;
    const double em = report.boundary_minus.value;
    double value = cp * ep - cm * em - report.surface_term;
    if (convention == SignConvention::Pushforward) value = -value;

    // first-order error propagation through the product form
    const double var = cp * cp * report.boundary_plus.stderr_ * report.boundary_plus.stderr_ +
                       ep * ep * report.c_plus.stderr_ * report.c_plus.stderr_ +
                       cm * cm * report.boundary_minus.stderr_ * report.boundary_minus.stderr_ +
                       em * em * report.c_minus.stderr_ * report.c_minus.stderr_;

    report.dphi.value = value;
    report.dphi.stderr_ = std::sqrt(var);
    report.dphi.n_effective = report.boundary_plus.n_effective + report.boundary_minus.n_effective;
    report.dphi.n_truncated = report.boundary_plus.n_truncated + report.boundary_minus.n_truncated;
    report.dphi.seed = cfg.seed;
    report.dphi.flagged = report.boundary_plus.flagged || report.boundary_minus.flagged ||
                          report.c_plus.flagged || report.c_minus.flagged;
    return report;
}

Estimate exit_time_l1_derivative(const Vec2& x, const PerturbationField& field,
                                 ExitPerturbationMode mode, const Problem& problem,
                                 long n_paths, const SimConfig& cfg) {
    if (!problem.domain.contains(x)) {
        throw DomainError("exit_time_l1_derivative: evaluation point lies outside the domain");
    }
    // Poisson exit-time setting only: f = 1 (no state dependence) and g = 0.
    const Vec2 probes[] = {x, Vec2{0.31, -0.17}};
    for (const Vec2& p : probes) {
        const double u = problem.solution.u(p);
        if (std::abs(problem.coeffs.f(p, u) - 1.0) > 1e-12 ||
            std::abs(problem.coeffs.df_du(p, u)) > 1e-12) {
            throw UnsupportedError(
                "exit_time_l1_derivative: requires the exit-time problem with source f = 1");
        }
    }
    const Vec2 boundary_probes[] = {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
    for (const Vec2& p : boundary_probes) {
        if (std::abs(problem.coeffs.g(p)) > 1e-12) {
            throw UnsupportedError(
                "exit_time_l1_derivative: requires zero boundary values (g = 0)");
        }
    }

    const uint64_t seed = derive_seed(cfg.seed, kTagExitTime);
    const double sign = mode == ExitPerturbationMode::Inflating ? 1.0 : -1.0;
    const Tally t = parallel_tally(static_cast<std::size_t>(n_paths), cfg.threads,
        [&](std::size_t i) -> std::pair<bool, double> {
            PathRng rng = make_path_rng(seed, i, cfg.antithetic);
            const ExitKillOutcome out =
                simulate_exit_kill(x, problem.domain, problem.coeffs, problem.solution, cfg, rng,
                                   KillMode::WeightOnly);
            if (out.status != ExitStatus::Exited) return {false, 0.0};
            return {true, sign * problem.solution.grad_u(out.point).dot(field(out.point))};
        });
    return make_estimate(t, cfg.seed);
}

std::pair<Estimate, Estimate> kill_weight_equivalence(
    const std::function<double(const Vec2&)>& intensity,
    const std::function<double(const Vec2&)>& eta, const Vec2& x0, const Problem& problem,
    long n_paths, const SimConfig& cfg) {
    if (!problem.domain.contains(x0)) {
        throw DomainError("kill_weight_equivalence: start point lies outside the domain");
    }
    PDECoefficients coeffs = problem.coeffs;
    coeffs.df_du = [intensity](const Vec2& x, double) { return -intensity(x); };
    // A vanishing intensity makes killing a no-op; flagging it keeps the two
    // runs on identical variate streams so the estimates coincide pathwise.
    bool zero = true;
    for (const Vec2& p : {x0, Vec2{0.31, -0.17}, Vec2{-0.52, 0.44}}) {
        if (intensity(p) != 0.0) zero = false;
    }
    coeffs.intensity_is_zero = zero;

    auto run = [&](uint64_t tag, KillMode mode) {
        const uint64_t seed = derive_seed(cfg.seed, tag);
        const Tally t = parallel_tally(static_cast<std::size_t>(n_paths), cfg.threads,
            [&](std::size_t i) -> std::pair<bool, double> {
                PathRng rng = make_path_rng(seed, i, cfg.antithetic);
                const ExitKillOutcome out =
                    simulate_exit_kill(x0, problem.domain, coeffs, problem.solution, cfg, rng,
                                       mode);
                if (out.status == ExitStatus::Truncated) return {false, 0.0};
                if (out.status == ExitStatus::Killed) return {true, 0.0};
                double v = eta(out.point);
                if (mode == KillMode::WeightOnly) v *= std::exp(out.log_survival);
                return {true, v};
            });
        return make_estimate(t, cfg.seed);
    };

    return {run(kTagKillSide, KillMode::DoublyStochastic),
            run(zero ? kTagKillSide : kTagWeightSide, KillMode::WeightOnly)};
}

}  // namespace diffshape
