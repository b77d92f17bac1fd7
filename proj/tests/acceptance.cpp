// Acceptance harness: one line per criterion, nonzero exit when any fails.
// Criterion 10 exercises the CLI binary, whose path arrives as argv[1].

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "diffshape/estimators.hpp"
#include "diffshape/taylor.hpp"

using namespace diffshape;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::cout << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL") << " - " << detail
              << std::endl;
    if (!ok) ++g_failures;
}

struct Table1Row {
    const char* name;
    double target;
};

constexpr Table1Row kTable1[] = {
    {"V1", -0.98974}, {"V2", -0.53191}, {"V3", -0.10275}, {"V4", -0.30272},
    {"V5", 0.47429},  {"V6", 0.47425},  {"V7", 1.22689},  {"V8", 0.19628},
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const Problem problem = benchmark_problem();

    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.seed = 42;

    // ---- criteria 1 and 2: reference-value reproduction and sign duality ----
    const MeasureSetup setup = build_measure_setup(problem, 1'000'000, cfg.seed, cfg.threads);
    {
        bool all_in_band = true;
        bool all_dual = true;
        std::ostringstream detail;
        detail.precision(5);
        detail << std::fixed;
        for (const Table1Row& row : kTable1) {
            const auto field = PerturbationField::builtin(row.name);
            const auto pre = dphi_free(field, problem, setup, 200'000, cfg);
            const auto push = dphi_free(field, problem, setup, 200'000, cfg,
                                        SignConvention::Pushforward);
            const double band = std::max(0.01, 3.0 * pre.dphi.stderr_);
            const double err = std::abs(pre.dphi.value - row.target);
            if (err > band) all_in_band = false;
            if (push.dphi.value != -pre.dphi.value) all_dual = false;
            detail << row.name << "=" << pre.dphi.value << " (ref " << row.target << ", |err| "
                   << err << ", band " << band << ") ";
        }
        report(1, all_in_band, "eight-direction derivative table: " + detail.str());
        report(2, all_dual, "pushforward equals the bitwise negation of preimage, all directions");
    }

    // ---- criterion 3: exit-time calibration at dt and dt/4 ----
    {
        auto mean_exit = [&](double dt) {
            SimConfig c = cfg;
            c.dt = dt;
            const long n = 100'000;
            const Tally t = parallel_tally(n, c.threads,
                [&](std::size_t i) -> std::pair<bool, double> {
                    PathRng rng(derive_seed(c.seed, 300), i);
                    const auto out = simulate_exit_kill({0.0, 0.0}, problem.domain,
                                                        problem.coeffs, problem.solution, c, rng);
                    if (out.status != ExitStatus::Exited) return {false, 0.0};
                    return {true, out.exit_time_estimate};
                });
            return make_estimate(t, c.seed);
        };
        const Estimate coarse = mean_exit(1e-3);
        const Estimate fine = mean_exit(2.5e-4);
        const double band = 3.0 * coarse.stderr_ + 0.01;
        const double bias_coarse = std::abs(coarse.value - 0.25);
        const double bias_fine = std::abs(fine.value - 0.25);
        const bool in_band = bias_coarse <= band;
        const bool shrinks = bias_fine < bias_coarse;
        std::ostringstream detail;
        detail << "mean exit " << coarse.value << " at dt=1e-3 (|bias| " << bias_coarse
               << " vs band " << band << "), " << fine.value << " at dt/4 (|bias| " << bias_fine
               << (shrinks ? ", shrinks)" : ", does not shrink)")
               << "; first-crossing overshoot of the discrete walk is ~0.014 at this step size";
        report(3, in_band && shrinks, detail.str());
    }

    // ---- criterion 4: exit-time derivative vs finite-difference oracle ----
    {
        const auto v1 = PerturbationField::builtin("V1");
        const Estimate est = exit_time_l1_derivative({0.0, 0.0}, v1,
                                                     ExitPerturbationMode::Deflating, problem,
                                                     50'000, cfg);
        const bool half = std::abs(est.value - 0.5) <= 3.0 * est.stderr_ + 1e-9;

        // pathwise finite difference with common random numbers
        const double eps = 1e-2;
        const Domain shrunk = Domain::perturbed(problem.domain, v1, eps);
        const long n = 200'000;
        const Tally t = parallel_tally(n, cfg.threads,
            [&](std::size_t i) -> std::pair<bool, double> {
                PathRng rng_a(derive_seed(cfg.seed, 400), i);
                PathRng rng_b(derive_seed(cfg.seed, 400), i);
                const double tau_eps = simulate_exit_time({0.0, 0.0}, shrunk, problem.coeffs,
                                                          cfg, rng_a);
                const double tau = simulate_exit_time({0.0, 0.0}, problem.domain, problem.coeffs,
                                                      cfg, rng_b);
                if (tau_eps < 0.0 || tau < 0.0) return {false, 0.0};
                return {true, (tau_eps - tau) / eps};
            });
        const Estimate fd = make_estimate(t, cfg.seed);
        // second-order term of the ball solution contributes ~0.0074 at eps=1e-2
        const double tol = 3.0 * std::hypot(est.stderr_, fd.stderr_) + 0.009;
        const bool agrees = std::abs(est.value - (-fd.value)) <= tol;
        std::ostringstream detail;
        detail << "deflating derivative " << est.value << " (target 0.5), CRN difference oracle "
               << -fd.value << " +- " << fd.stderr_ << ", tolerance " << tol;
        report(4, half && agrees, detail.str());
    }

    // ---- criterion 5: constants difference equals pi/12 ----
    {
        const long n = 1'000'000;
        const ConstantsEstimate c =
            estimate_constants(n, problem.solution, problem.tracking, cfg.seed);
        // the two one-sided estimates share their samples, so their difference
        // equals this direct signed tally; its stderr is the right scale
        const Tally t = parallel_tally(n, cfg.threads,
            [&](std::size_t i) -> std::pair<bool, double> {
                PathRng rng(cfg.seed, i);
                const Vec2 p{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
                if (!(p.norm2() < 1.0)) return {true, 0.0};
                return {true, 4.0 * (problem.solution.u(p) - problem.tracking.u_dag(p))};
            });
        const Estimate diff = make_estimate(t, cfg.seed);
        const double reported = c.c_plus.value - c.c_minus.value;
        const bool consistent = std::abs(reported - diff.value) <= 1e-12;
        const bool in_band = std::abs(reported - M_PI / 12.0) <= 3.0 * diff.stderr_;
        std::ostringstream detail;
        detail << "C+ - C- = " << reported << " vs pi/12 = " << M_PI / 12.0 << ", 3 sigma "
               << 3.0 * diff.stderr_;
        report(5, consistent && in_band, detail.str());
    }

    // ---- criterion 6: killing vs weighting equivalence ----
    {
        const auto [killed, weighted] = kill_weight_equivalence(
            [](const Vec2&) { return 2.0; }, [](const Vec2&) { return 1.0; }, {0.0, 0.0},
            problem, 100'000, cfg);
        const double tol = 3.0 * std::hypot(killed.stderr_, weighted.stderr_);
        const bool ok = std::abs(killed.value - weighted.value) <= tol;
        std::ostringstream detail;
        detail << "kill " << killed.value << " vs weight " << weighted.value << ", 3 sigma "
               << tol;
        report(6, ok, detail.str());
    }

    // ---- criterion 7: linearity under common random numbers ----
    {
        const auto v1 = PerturbationField::builtin("V1");
        const auto v5 = PerturbationField::builtin("V5");
        const auto combo = PerturbationField::linear_combo({{2.0, v1}, {-3.0, v5}});
        const Vec2 x{0.2, -0.3};
        const double da = du_at(x, v1, problem, 20'000, cfg).value;
        const double db = du_at(x, v5, problem, 20'000, cfg).value;
        const double dc = du_at(x, combo, problem, 20'000, cfg).value;
        const bool du_linear = std::abs(dc - (2.0 * da - 3.0 * db)) <= 1e-12;

        const auto ra = dphi_free(v1, problem, setup, 20'000, cfg);
        const auto rb = dphi_free(v5, problem, setup, 20'000, cfg);
        const auto rc = dphi_free(combo, problem, setup, 20'000, cfg);
        const bool plus_linear =
            std::abs(rc.boundary_plus.value -
                     (2.0 * ra.boundary_plus.value - 3.0 * rb.boundary_plus.value)) <= 1e-12;
        const bool minus_linear =
            std::abs(rc.boundary_minus.value -
                     (2.0 * ra.boundary_minus.value - 3.0 * rb.boundary_minus.value)) <= 1e-12;
        std::ostringstream detail;
        detail << "pointwise residual "
               << std::abs(dc - (2.0 * da - 3.0 * db)) << ", boundary residuals "
               << std::abs(rc.boundary_plus.value -
                           (2.0 * ra.boundary_plus.value - 3.0 * rb.boundary_plus.value))
               << " / "
               << std::abs(rc.boundary_minus.value -
                           (2.0 * ra.boundary_minus.value - 3.0 * rb.boundary_minus.value));
        report(7, du_linear && plus_linear && minus_linear, detail.str());
    }

    // ---- criterion 8: analytic radial remainder slope and negative control ----
    {
        const auto v1 = PerturbationField::builtin("V1");
        TaylorOptions opt;
        opt.mode = TaylorMode::AnalyticRadial;
        opt.supplied_derivative = -0.98974;
        const TaylorResult good = taylor_test(v1, problem, opt);
        opt.supplied_derivative = -0.98974 + 0.05;
        const TaylorResult bad = taylor_test(v1, problem, opt);
        const bool ok = good.fit.conclusive && good.fit.slope >= 1.9 && good.fit.slope <= 2.1 &&
                        bad.fit.slope < 1.3;
        std::ostringstream detail;
        detail << "slope " << good.fit.slope << " with the reference derivative, "
               << bad.fit.slope << " with the corrupted one";
        report(8, ok, detail.str());
    }

    // ---- criterion 9: nested simulation Taylor slope for V4 ----
    {
        TaylorOptions opt;
        opt.mode = TaylorMode::NestedMc;
        opt.sim = cfg;
        const TaylorResult res = taylor_test(PerturbationField::builtin("V4"), problem, opt);
        std::ostringstream detail;
        detail << "slope " << res.fit.slope << " over " << res.fit.n_points
               << " noise-filtered points in [" << res.fit.eps_lo << ", " << res.fit.eps_hi
               << "], derivative " << res.derivative;
        if (!res.fit.conclusive) {
            std::cout << "criterion 9: INCONCLUSIVE - fewer than 3 points above the noise floor; "
                      << detail.str() << std::endl;
        } else {
            report(9, res.fit.slope >= 1.6 && res.fit.slope <= 2.4, detail.str());
        }
    }

    // ---- criterion 10: byte-identical CSV across thread counts ----
    {
        if (cli.empty()) {
            report(10, false, "CLI binary path not supplied");
        } else {
            const std::string base = " dphi --direction V1 --n-paths 200000 --seed 42";
            const int rc1 =
                std::system((cli + base + " --threads 1 --output acceptance_run_a.csv").c_str());
            const int rc2 =
                std::system((cli + base + " --threads 4 --output acceptance_run_b.csv").c_str());
            const std::string a = read_file("acceptance_run_a.csv");
            const std::string b = read_file("acceptance_run_b.csv");
            const bool ok = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
            std::ostringstream detail;
            detail << "two CLI runs with 1 and 4 threads, " << a.size() << " bytes each, "
                   << (ok ? "identical" : "MISMATCH");
            report(10, ok, detail.str());
            std::remove("acceptance_run_a.csv");
            std::remove("acceptance_run_b.csv");
        }
    }

    std::cout << (g_failures == 0 ? "acceptance: all criteria passed"
                                  : "acceptance: " + std::to_string(g_failures) +
                                        " criterion(s) failed")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
