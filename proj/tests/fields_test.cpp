#include <cmath>
#include <cstdio>

#include "doctest.h"

#include "diffshape/fields.hpp"
#include "diffshape/rng.hpp"

using namespace diffshape;

TEST_CASE("benchmark solution values and gradient") {
    const SolutionField s = benchmark_solution();
    CHECK(s.u({0.0, 0.0}) == doctest::Approx(0.25));
    CHECK(s.u({1.0, 0.0}) == doctest::Approx(0.0));
    const Vec2 g = s.grad_u({1.0, 0.0});
    CHECK(g.x == doctest::Approx(-0.5));
    CHECK(g.y == doctest::Approx(0.0));
}

TEST_CASE("benchmark solution satisfies the PDE residual") {
    const SolutionField s = benchmark_solution();
    const double h = 1e-4;
    PathRng rng(11, 0);
    for (int it = 0; it < 100; ++it) {
        Vec2 p;
        do {
            p = Vec2{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
        } while (!(p.norm2() < 0.9));
        const double lap = (s.u({p.x + h, p.y}) + s.u({p.x - h, p.y}) + s.u({p.x, p.y + h}) +
                            s.u({p.x, p.y - h}) - 4.0 * s.u(p)) /
                           (h * h);
        CHECK(std::abs(lap + 1.0) <= 1e-6);

        // gradient consistency with central differences
        const double gx = (s.u({p.x + h, p.y}) - s.u({p.x - h, p.y})) / (2 * h);
        const double gy = (s.u({p.x, p.y + h}) - s.u({p.x, p.y - h})) / (2 * h);
        const Vec2 g = s.grad_u(p);
        CHECK(std::abs(g.x - gx) <= 1e-8);
        CHECK(std::abs(g.y - gy) <= 1e-8);
    }
}

TEST_CASE("generator-form conversion of convection-diffusion coefficients") {
    auto identity = [](const Vec2&) { return Mat2::identity(); };
    auto zero_vec = [](const Vec2&) { return Vec2{0.0, 0.0}; };

    SUBCASE("isotropic unit diffusion") {
        auto [mu, sigma] = convert_convection_diffusion(identity, zero_vec, zero_vec);
        CHECK(mu({0.3, 0.4}).norm() == 0.0);
        const Mat2 s = sigma({0.3, 0.4});
        CHECK(s.a == doctest::Approx(std::sqrt(2.0)));
        CHECK(s.d == doctest::Approx(std::sqrt(2.0)));
        CHECK(s.b == doctest::Approx(0.0));
        CHECK(s.c == doctest::Approx(0.0));
    }

    SUBCASE("diagonal anisotropy") {
        auto K = [](const Vec2&) { return Mat2{2.0, 0.0, 0.0, 8.0}; };
        auto [mu, sigma] = convert_convection_diffusion(K, zero_vec, zero_vec);
        const Mat2 s = sigma({0.0, 0.0});
        CHECK(s.a == doctest::Approx(2.0));
        CHECK(s.d == doctest::Approx(4.0));
        CHECK(mu({0.0, 0.0}).norm() == 0.0);
    }

    SUBCASE("drift passes through") {
        auto v = [](const Vec2&) { return Vec2{1.0, 0.0}; };
        auto [mu, sigma] = convert_convection_diffusion(identity, v, zero_vec);
        CHECK(mu({0.5, 0.5}).x == doctest::Approx(1.0));
        CHECK(sigma({0.5, 0.5}).a == doctest::Approx(std::sqrt(2.0)));
    }

    SUBCASE("sigma sigma^T = 2K for a position-dependent SPD matrix") {
        auto K = [](const Vec2& p) {
            return Mat2{2.0 + p.x * p.x, 0.5 * p.x, 0.5 * p.x, 1.0 + p.y * p.y};
        };
        auto [mu, sigma] = convert_convection_diffusion(K, zero_vec, zero_vec);
        (void)mu;
        for (const Vec2 p : {Vec2{0.0, 0.0}, Vec2{0.7, -0.3}, Vec2{-0.9, 0.9}}) {
            const Mat2 s = sigma(p);
            const Mat2 prod = mul(s, s.transpose());
            const Mat2 target = K(p) * 2.0;
            CHECK(std::abs(prod.a - target.a) <= 1e-12);
            CHECK(std::abs(prod.b - target.b) <= 1e-12);
            CHECK(std::abs(prod.c - target.c) <= 1e-12);
            CHECK(std::abs(prod.d - target.d) <= 1e-12);
        }
    }

    SUBCASE("non-SPD diffusion is rejected") {
        auto K = [](const Vec2&) { return Mat2{1.0, 3.0, 3.0, 1.0}; };  // indefinite
        auto [mu, sigma] = convert_convection_diffusion(K, zero_vec, zero_vec);
        (void)mu;
        CHECK_THROWS_AS(sigma({0.0, 0.0}), CoefficientError);
    }
}

TEST_CASE("grid field reproduces linear functions exactly") {
    const GridData grid = tabulate([](const Vec2& p) { return p.x; }, -1.5, 1.5, 61);
    const SolutionField f = grid_field(grid);
    PathRng rng(3, 0);
    for (int it = 0; it < 200; ++it) {
        const Vec2 p{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
        CHECK(f.u(p) == doctest::Approx(p.x).epsilon(1e-12));
        const Vec2 g = f.grad_u(p);
        CHECK(g.x == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(g.y) <= 1e-9);
    }
}

TEST_CASE("grid field converges at second order on the benchmark solution") {
    const SolutionField exact = benchmark_solution();
    const GridData grid = tabulate(exact.u, -1.0, 1.0, 513);  // h = 1/256
    const SolutionField f = grid_field(grid);
    PathRng rng(5, 0);
    double max_err = 0.0;
    for (int it = 0; it < 1000; ++it) {
        Vec2 p;
        do {
            p = Vec2{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
        } while (!(p.norm2() < 0.81));
        max_err = std::max(max_err, std::abs(f.u(p) - exact.u(p)));
    }
    // quadratic u: bilinear error is h^2/8 * |Hessian| = (1/256)^2 / 16
    CHECK(max_err <= 1e-5);
}

TEST_CASE("grid field rejects out-of-coverage queries") {
    const GridData grid = tabulate([](const Vec2& p) { return p.x; }, -1.0, 1.0, 21);
    const SolutionField f = grid_field(grid);
    CHECK_THROWS_AS(f.u({10.0, 10.0}), FieldError);
    CHECK_THROWS_AS(f.grad_u({0.999, 0.0}), FieldError);  // stencil leaves the box
}

TEST_CASE("grid CSV round trip") {
    const GridData grid = tabulate(benchmark_solution().u, -1.0, 1.0, 33);
    const std::string path = "grid_roundtrip_test.csv";
    save_grid_csv(path, grid);
    const GridData loaded = load_grid_csv(path);
    CHECK(loaded.nx == grid.nx);
    CHECK(loaded.ny == grid.ny);
    CHECK(loaded.h == doctest::Approx(grid.h).epsilon(1e-12));
    double max_diff = 0.0;
    for (std::size_t k = 0; k < grid.values.size(); ++k) {
        max_diff = std::max(max_diff, std::abs(grid.values[k] - loaded.values[k]));
    }
    CHECK(max_diff <= 1e-14);
    std::remove(path.c_str());
}

TEST_CASE("malformed grid CSV is rejected") {
    const std::string path = "grid_malformed_test.csv";
    {
        FILE* f = std::fopen(path.c_str(), "w");
        std::fputs("x,y,u\n0,0,1\n0,1,1\n0,2.5,1\n1,0,1\n1,1,1\n1,2.5,1\n", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(load_grid_csv(path), FieldError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_grid_csv("does_not_exist.csv"), FieldError);
}
