#include <cmath>
#include <vector>

#include "doctest.h"

#include "diffshape/estimators.hpp"
#include "diffshape/simulate.hpp"

using namespace diffshape;

TEST_CASE("em_step arithmetic") {
    const PDECoefficients coeffs = benchmark_coefficients();
    const Vec2 x{0.2, -0.3};
    const Vec2 same = em_step(x, coeffs, 1e-3, {0.0, 0.0});
    CHECK(same.x == x.x);
    CHECK(same.y == x.y);

    PDECoefficients drift = coeffs;
    drift.mu = [](const Vec2&) { return Vec2{1.0, 0.0}; };
    drift.mu_is_zero = false;
    drift.sigma = [](const Vec2&) { return Mat2{}; };
    drift.sigma_is_const = true;
    drift.sigma_const = Mat2{};
    const Vec2 moved = em_step({0.0, 0.0}, drift, 0.5, {1.7, -0.4});
    CHECK(moved.x == doctest::Approx(0.5));
    CHECK(moved.y == doctest::Approx(0.0));
}

TEST_CASE("em_step increments have variance 2 dt per coordinate") {
    const PDECoefficients coeffs = benchmark_coefficients();
    const double dt = 1e-3;
    const long n = 1'000'000;
    PathRng rng(99, 0);
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        const Vec2 next = em_step({0.0, 0.0}, coeffs, dt, {rng.normal(), rng.normal()});
        sum += next.x;
        sumsq += next.x * next.x;
    }
    const double var = (sumsq - sum * sum / n) / (n - 1);
    // Var(chi^2 sample variance) = 2 sigma^4 / n
    const double band = 3.0 * std::sqrt(2.0 / n) * 2.0 * dt;
    CHECK(std::abs(var - 2.0 * dt) <= band);
}

TEST_CASE("benchmark paths always exit on the boundary and are never killed") {
    const Problem problem = benchmark_problem();
    SimConfig cfg;
    cfg.dt = 1e-3;
    for (int i = 0; i < 2000; ++i) {
        PathRng rng(5, i);
        const ExitKillOutcome out = simulate_exit_kill({0.0, 0.0}, problem.domain, problem.coeffs,
                                                       problem.solution, cfg, rng);
        REQUIRE(out.status == ExitStatus::Exited);
        CHECK(std::abs(out.point.norm() - 1.0) <= 1e-10);
        CHECK(out.log_survival == 0.0);
        CHECK(out.exit_time_estimate == doctest::Approx(out.steps_taken * cfg.dt));
    }
}

TEST_CASE("overwhelming intensity kills at the first step") {
    const Problem problem = benchmark_problem();
    PDECoefficients coeffs = problem.coeffs;
    coeffs.df_du = [](const Vec2&, double) { return -1e9; };
    coeffs.intensity_is_zero = false;
    SimConfig cfg;
    int killed = 0;
    for (int i = 0; i < 200; ++i) {
        PathRng rng(8, i);
        const ExitKillOutcome out = simulate_exit_kill({0.0, 0.0}, problem.domain, coeffs,
                                                       problem.solution, cfg, rng);
        if (out.status == ExitStatus::Killed) {
            ++killed;
            CHECK(out.steps_taken == 1);
        }
    }
    CHECK(killed == 200);
}

TEST_CASE("positive df_du violates the intensity assumption") {
    const Problem problem = benchmark_problem();
    PDECoefficients coeffs = problem.coeffs;
    coeffs.df_du = [](const Vec2&, double) { return 0.5; };
    coeffs.intensity_is_zero = false;
    SimConfig cfg;
    PathRng rng(1, 0);
    CHECK_THROWS_AS(simulate_exit_kill({0.0, 0.0}, problem.domain, coeffs, problem.solution, cfg,
                                       rng),
                    CoefficientError);
}

TEST_CASE("mean exit time from the center approximates 1/4") {
    const Problem problem = benchmark_problem();
    SimConfig cfg;
    cfg.dt = 1e-3;
    const long n = 20'000;
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        PathRng rng(17, i);
        const ExitKillOutcome out = simulate_exit_kill({0.0, 0.0}, problem.domain, problem.coeffs,
                                                       problem.solution, cfg, rng);
        sum += out.exit_time_estimate;
        sumsq += out.exit_time_estimate * out.exit_time_estimate;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq - sum * sum / n) / (n - 1) / n);
    // discrete monitoring overshoots the exit; allow the step-bias band
    CHECK(std::abs(mean - 0.25) <= 3.0 * se + 0.02);
    CHECK(mean > 0.25);  // discrete exit detection is late, never early
}

TEST_CASE("kill probability matches the weighted survival oracle") {
    const Problem problem = benchmark_problem();
    PDECoefficients coeffs = problem.coeffs;
    coeffs.df_du = [](const Vec2&, double) { return -2.0; };
    coeffs.intensity_is_zero = false;
    SimConfig cfg;
    cfg.dt = 1e-3;
    const long n = 30'000;

    double kills = 0.0;
    double weight_sum = 0.0, weight_sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        PathRng rng_kill(23, i);
        const auto killed = simulate_exit_kill({0.0, 0.0}, problem.domain, coeffs,
                                               problem.solution, cfg, rng_kill,
                                               KillMode::DoublyStochastic);
        if (killed.status == ExitStatus::Killed) kills += 1.0;

        PathRng rng_weight(24, i);
        const auto weighted = simulate_exit_kill({0.0, 0.0}, problem.domain, coeffs,
                                                 problem.solution, cfg, rng_weight,
                                                 KillMode::WeightOnly);
        const double death = 1.0 - std::exp(weighted.log_survival);
        weight_sum += death;
        weight_sumsq += death * death;
    }
    const double p_kill = kills / n;
    const double p_weight = weight_sum / n;
    const double se_kill = std::sqrt(p_kill * (1.0 - p_kill) / n);
    const double se_weight =
        std::sqrt((weight_sumsq - weight_sum * weight_sum / n) / (n - 1) / n);
    CHECK(std::abs(p_kill - p_weight) <= 3.0 * std::hypot(se_kill, se_weight));
}

TEST_CASE("identical seeds reproduce identical outcomes") {
    const Problem problem = benchmark_problem();
    SimConfig cfg;
    std::vector<Vec2> first;
    for (int round = 0; round < 2; ++round) {
        std::vector<Vec2> points;
        // walk the paths in a different order the second time
        for (int i = 0; i < 50; ++i) {
            const int idx = round == 0 ? i : 49 - i;
            PathRng rng(42, idx);
            const auto out = simulate_exit_kill({0.1, 0.2}, problem.domain, problem.coeffs,
                                                problem.solution, cfg, rng);
            points.push_back(out.point);
        }
        if (round == 0) {
            first = points;
        } else {
            for (int i = 0; i < 50; ++i) {
                CHECK(first[i].x == points[49 - i].x);
                CHECK(first[i].y == points[49 - i].y);
            }
        }
    }
}

TEST_CASE("truncation is reported when max_steps is exhausted") {
    const Problem problem = benchmark_problem();
    SimConfig cfg;
    cfg.max_steps = 3;
    PathRng rng(1, 0);
    const auto out = simulate_exit_kill({0.0, 0.0}, problem.domain, problem.coeffs,
                                        problem.solution, cfg, rng);
    CHECK(out.status == ExitStatus::Truncated);
    CHECK(out.steps_taken == 3);
}

TEST_CASE("discount weight closed forms") {
    const Problem problem = benchmark_problem();
    const std::vector<Vec2> path{{0.0, 0.0}, {0.1, 0.0}, {0.1, 0.1}, {0.2, 0.1}};

    CHECK(discount_weight(path, problem.coeffs, problem.solution, 1e-3) == 1.0);

    PDECoefficients coeffs = problem.coeffs;
    coeffs.df_du = [](const Vec2&, double) { return -3.0; };
    const double w = discount_weight(path, coeffs, problem.solution, 0.01);
    // last position (the exit point) is excluded: 3 increments
    CHECK(w == doctest::Approx(std::exp(-3.0 * 3 * 0.01)).epsilon(1e-13));
}

TEST_CASE("path rng streams are reproducible and order-independent") {
    PathRng a(123, 7);
    PathRng b(123, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    PathRng c(123, 8);
    bool differs = false;
    PathRng a2(123, 7);
    for (int i = 0; i < 16; ++i) {
        if (a2.next_u64() != c.next_u64()) differs = true;
    }
    CHECK(differs);

    // antithetic flag flips normals exactly
    PathRng d(9, 1), e(9, 1);
    e.set_negate_normals(true);
    for (int i = 0; i < 32; ++i) CHECK(d.normal() == -e.normal());
}
