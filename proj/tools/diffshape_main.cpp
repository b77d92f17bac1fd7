// Command-line front end: shape-derivative and exit-time estimators with
// reproducible CSV output.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "diffshape/estimators.hpp"
#include "diffshape/taylor.hpp"

namespace {

using diffshape::ConfigError;

// shortest round-trip decimal form, for diffable CSVs
std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// "V3", "2*V1-3*V5", "0.5*V2 + V7", ...
diffshape::PerturbationField parse_direction(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    std::vector<std::pair<double, diffshape::PerturbationField>> terms;
    std::size_t i = 0;
    while (i < s.size()) {
        double sign = 1.0;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
        const std::string term = s.substr(i, j - i);
        i = j;
        if (term.empty()) throw ConfigError("direction: empty term in '" + text + "'");
        double coef = 1.0;
        std::string name = term;
        if (const auto star = term.find('*'); star != std::string::npos) {
            try {
                std::size_t used = 0;
                coef = std::stod(term.substr(0, star), &used);
                if (used != star) throw std::invalid_argument("trailing junk");
            } catch (const std::exception&) {
                throw ConfigError("direction: bad coefficient in term '" + term + "'");
            }
            name = term.substr(star + 1);
        }
        terms.emplace_back(sign * coef, diffshape::PerturbationField::builtin(name));
    }
    if (terms.empty()) throw ConfigError("direction: empty specification");
    if (terms.size() == 1 && terms[0].first == 1.0) return terms[0].second;
    return diffshape::PerturbationField::linear_combo(terms);
}

struct Options {
    std::string direction = "V1";
    long n_paths = 200'000;
    double dt = 1e-3;
    uint64_t seed = 1;
    int quad_nodes = 720;
    int grid_resolution = 1024;
    std::string output;
    std::string sign_convention = "preimage";
    std::string solution_grid;  // empty = analytic benchmark solution
    int threads = 0;
    bool antithetic = false;
    long n_samples = 1'000'000;  // constants / hit-or-miss sample count
    std::string estimator = "default";  // weight | kill
    double x = 0.0, y = 0.0;
    double eps = 0.0;
    std::string mode;           // taylor: analytic-radial | nested-mc; exittime: inflating | deflating
    long node_paths = 160;
    std::optional<double> derivative;  // taylor: supplied first-order coefficient
    std::string config_file;
    bool grid_resolution_set = false;  // explicit value given (flag or config file)
};

// JSON config supplies defaults; explicitly passed flags win.
void apply_config_file(Options& opt, const CLI::App& cmd) {
    std::ifstream in(opt.config_file);
    if (!in) throw ConfigError("cannot open config file '" + opt.config_file + "'");
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config file: top level must be an object");

    auto overridden = [&](const std::string& flag) {
        return cmd.get_option_no_throw(flag) != nullptr && cmd.count(flag) > 0;
    };
    for (const auto& [key, value] : cfg.items()) {
        try {
            if (key == "direction") {
                if (!overridden("--direction")) opt.direction = value.get<std::string>();
            } else if (key == "n_paths") {
                if (!overridden("--n-paths")) opt.n_paths = value.get<long>();
            } else if (key == "dt") {
                if (!overridden("--dt")) opt.dt = value.get<double>();
            } else if (key == "seed") {
                if (!overridden("--seed")) opt.seed = value.get<uint64_t>();
            } else if (key == "quad_nodes") {
                if (!overridden("--quad-nodes")) opt.quad_nodes = value.get<int>();
            } else if (key == "grid_resolution") {
                if (!overridden("--grid-resolution")) opt.grid_resolution = value.get<int>();
                opt.grid_resolution_set = true;
            } else if (key == "output") {
                if (!overridden("--output")) opt.output = value.get<std::string>();
            } else if (key == "sign_convention") {
                if (!overridden("--sign-convention"))
                    opt.sign_convention = value.get<std::string>();
            } else if (key == "solution_grid") {
                if (!overridden("--solution-grid")) opt.solution_grid = value.get<std::string>();
            } else if (key == "threads") {
                if (!overridden("--threads")) opt.threads = value.get<int>();
            } else if (key == "antithetic") {
                if (!overridden("--antithetic")) opt.antithetic = value.get<bool>();
            } else if (key == "n_samples") {
                if (!overridden("--n-samples")) opt.n_samples = value.get<long>();
            } else if (key == "estimator") {
                if (!overridden("--estimator")) opt.estimator = value.get<std::string>();
            } else if (key == "x") {
                if (!overridden("--x")) opt.x = value.get<double>();
            } else if (key == "y") {
                if (!overridden("--y")) opt.y = value.get<double>();
            } else if (key == "eps") {
                if (!overridden("--eps")) opt.eps = value.get<double>();
            } else if (key == "mode") {
                if (!overridden("--mode")) opt.mode = value.get<std::string>();
            } else if (key == "node_paths") {
                if (!overridden("--node-paths")) opt.node_paths = value.get<long>();
            } else if (key == "derivative") {
                if (!overridden("--derivative")) opt.derivative = value.get<double>();
            } else {
                throw ConfigError("config file: unknown key '" + key + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config file: bad value for '" + key + "': " + e.what());
        }
    }
}

void validate(const Options& opt) {
    if (opt.n_paths <= 0) throw ConfigError("n_paths must be positive");
    if (opt.dt <= 0.0) throw ConfigError("dt must be positive");
    if (opt.quad_nodes < 4) throw ConfigError("quad_nodes must be at least 4");
    if (opt.grid_resolution < 2) throw ConfigError("grid_resolution must be at least 2");
    if (opt.n_samples <= 0) throw ConfigError("n_samples must be positive");
    if (opt.node_paths <= 0) throw ConfigError("node_paths must be positive");
    if (opt.sign_convention != "preimage" && opt.sign_convention != "pushforward") {
        throw ConfigError("sign_convention must be 'preimage' or 'pushforward'");
    }
    if (opt.estimator != "default" && opt.estimator != "weight" && opt.estimator != "kill") {
        throw ConfigError("estimator must be 'weight' or 'kill'");
    }
}

diffshape::SimConfig sim_config(const Options& opt) {
    diffshape::SimConfig cfg;
    cfg.dt = opt.dt;
    cfg.seed = opt.seed;
    cfg.antithetic = opt.antithetic;
    cfg.threads = opt.threads;
    return cfg;
}

diffshape::Problem make_problem(const Options& opt) {
    diffshape::Problem problem = diffshape::benchmark_problem();
    if (!opt.solution_grid.empty()) {
        problem.solution = diffshape::grid_field(diffshape::load_grid_csv(opt.solution_grid));
    }
    return problem;
}

// Full effective config as CSV comments. Thread count and output path are
// deliberately omitted: neither influences the numbers, and including them
// would break byte-identical output across machines.
std::string config_header(const std::string& command, const Options& opt) {
    std::ostringstream h;
    h << "# command=" << command << '\n'
      << "# direction=" << opt.direction << '\n'
      << "# n_paths=" << opt.n_paths << '\n'
      << "# dt=" << fmt(opt.dt) << '\n'
      << "# seed=" << opt.seed << '\n'
      << "# quad_nodes=" << opt.quad_nodes << '\n'
      << "# grid_resolution=" << opt.grid_resolution << '\n'
      << "# sign_convention=" << opt.sign_convention << '\n'
      << "# solution_source=" << (opt.solution_grid.empty() ? "analytic" : opt.solution_grid)
      << '\n'
      << "# antithetic=" << (opt.antithetic ? "true" : "false") << '\n'
      << "# n_samples=" << opt.n_samples << '\n'
      << "# estimator=" << opt.estimator << '\n';
    if (command == "du" || command == "exittime") {
        h << "# x=" << fmt(opt.x) << '\n' << "# y=" << fmt(opt.y) << '\n';
    }
    if (command == "exittime") h << "# eps=" << fmt(opt.eps) << '\n';
    if (!opt.mode.empty()) h << "# mode=" << opt.mode << '\n';
    if (command == "taylor") {
        h << "# node_paths=" << opt.node_paths << '\n'
          << "# derivative="
          << (opt.derivative ? fmt(*opt.derivative) : std::string("estimated")) << '\n';
    }
    return h.str();
}

void emit(const Options& opt, const std::string& csv, const std::string& summary) {
    if (opt.output.empty()) {
        std::cout << csv;
        std::cerr << summary;
    } else {
        std::ofstream out(opt.output, std::ios::binary);
        if (!out) throw ConfigError("cannot write output file '" + opt.output + "'");
        out << csv;
        std::cout << summary;
    }
}

int run_dphi(const Options& opt) {
    const auto field = parse_direction(opt.direction);
    const auto problem = make_problem(opt);
    const auto cfg = sim_config(opt);
    const auto setup =
        diffshape::build_measure_setup(problem, opt.n_samples, opt.seed, opt.threads);
    const auto convention = opt.sign_convention == "pushforward"
                                ? diffshape::SignConvention::Pushforward
                                : diffshape::SignConvention::Preimage;
    const auto kind = opt.estimator == "weight" ? diffshape::EstimatorKind::WeightBased
                                                : diffshape::EstimatorKind::KillBased;
    const auto report = diffshape::dphi_free(field, problem, setup, opt.n_paths, cfg, convention,
                                             opt.quad_nodes, kind);

    std::ostringstream csv;
    csv << config_header("dphi", opt)
        << "direction,value,stderr,surface_term,c_plus,c_minus,sign_convention,seed,n_paths,dt\n"
        << opt.direction << ',' << fmt(report.dphi.value) << ',' << fmt(report.dphi.stderr_)
        << ',' << fmt(report.surface_term) << ',' << fmt(report.c_plus.value) << ','
        << fmt(report.c_minus.value) << ',' << opt.sign_convention << ',' << opt.seed << ','
        << opt.n_paths << ',' << fmt(opt.dt) << '\n';

    std::ostringstream summary;
    summary << "dphi[" << opt.direction << "] (" << opt.sign_convention
            << ") = " << report.dphi.value << "  stderr " << report.dphi.stderr_
            << "  (surface " << report.surface_term << ", C+ " << report.c_plus.value << ", C- "
            << report.c_minus.value << ")\n";
    if (report.dphi.flagged) summary << "warning: truncated-path fraction exceeded 1e-3\n";
    emit(opt, csv.str(), summary.str());
    return report.dphi.flagged ? 2 : 0;
}

int run_du(const Options& opt) {
    const auto field = parse_direction(opt.direction);
    const auto problem = make_problem(opt);
    const auto kind = opt.estimator == "kill" ? diffshape::EstimatorKind::KillBased
                                              : diffshape::EstimatorKind::WeightBased;
    const auto est = diffshape::du_at(diffshape::Vec2{opt.x, opt.y}, field, problem, opt.n_paths,
                                      sim_config(opt), kind);

    std::ostringstream csv;
    csv << config_header("du", opt)
        << "x,y,direction,value,stderr,n_effective,n_truncated,seed,n_paths,dt\n"
        << fmt(opt.x) << ',' << fmt(opt.y) << ',' << opt.direction << ',' << fmt(est.value)
        << ',' << fmt(est.stderr_) << ',' << est.n_effective << ',' << est.n_truncated << ','
        << opt.seed << ',' << opt.n_paths << ',' << fmt(opt.dt) << '\n';

    std::ostringstream summary;
    summary << "du[" << opt.direction << "](" << opt.x << "," << opt.y << ") = " << est.value
            << "  stderr " << est.stderr_ << '\n';
    if (est.flagged) summary << "warning: truncated-path fraction exceeded 1e-3\n";
    emit(opt, csv.str(), summary.str());
    return est.flagged ? 2 : 0;
}

int run_exittime(const Options& opt) {
    const auto problem = make_problem(opt);
    const auto cfg = sim_config(opt);
    diffshape::Estimate est;
    std::string quantity;
    if (opt.mode.empty()) {
        quantity = "mean_exit_time";
        diffshape::Domain domain = problem.domain;
        if (opt.eps != 0.0) {
            domain = diffshape::Domain::perturbed(domain, parse_direction(opt.direction), opt.eps);
        }
        est = diffshape::perturbed_solution_mc(domain, diffshape::Vec2{opt.x, opt.y},
                                               problem.coeffs, opt.n_paths, cfg);
    } else if (opt.mode == "inflating" || opt.mode == "deflating") {
        quantity = "l1_derivative_" + opt.mode;
        const auto mode = opt.mode == "inflating" ? diffshape::ExitPerturbationMode::Inflating
                                                  : diffshape::ExitPerturbationMode::Deflating;
        est = diffshape::exit_time_l1_derivative(diffshape::Vec2{opt.x, opt.y},
                                                 parse_direction(opt.direction), mode, problem,
                                                 opt.n_paths, cfg);
    } else {
        throw ConfigError("exittime mode must be 'inflating' or 'deflating' (or omitted)");
    }

    std::ostringstream csv;
    csv << config_header("exittime", opt)
        << "quantity,x,y,direction,value,stderr,n_effective,n_truncated,seed,n_paths,dt\n"
        << quantity << ',' << fmt(opt.x) << ',' << fmt(opt.y) << ',' << opt.direction << ','
        << fmt(est.value) << ',' << fmt(est.stderr_) << ',' << est.n_effective << ','
        << est.n_truncated << ',' << opt.seed << ',' << opt.n_paths << ',' << fmt(opt.dt)
        << '\n';

    std::ostringstream summary;
    summary << quantity << " at (" << opt.x << "," << opt.y << ") = " << est.value << "  stderr "
            << est.stderr_ << '\n';
    if (est.flagged) summary << "warning: truncated-path fraction exceeded 1e-3\n";
    emit(opt, csv.str(), summary.str());
    return est.flagged ? 2 : 0;
}

int run_constants(const Options& opt) {
    const auto problem = make_problem(opt);
    const auto consts = diffshape::estimate_constants(opt.n_samples, problem.solution,
                                                      problem.tracking, opt.seed, opt.threads);
    std::ostringstream csv;
    csv << config_header("constants", opt)
        << "c_plus,c_plus_stderr,c_minus,c_minus_stderr,difference,seed,n_samples\n"
        << fmt(consts.c_plus.value) << ',' << fmt(consts.c_plus.stderr_) << ','
        << fmt(consts.c_minus.value) << ',' << fmt(consts.c_minus.stderr_) << ','
        << fmt(consts.c_plus.value - consts.c_minus.value) << ',' << opt.seed << ','
        << opt.n_samples << '\n';

    std::ostringstream summary;
    summary << "C+ = " << consts.c_plus.value << " (stderr " << consts.c_plus.stderr_
            << "), C- = " << consts.c_minus.value << " (stderr " << consts.c_minus.stderr_
            << "), C+ - C- = " << consts.c_plus.value - consts.c_minus.value << '\n';
    emit(opt, csv.str(), summary.str());
    return 0;
}

int run_taylor(const Options& opt) {
    const auto field = parse_direction(opt.direction);
    const auto problem = make_problem(opt);
    diffshape::TaylorOptions topt;
    if (opt.mode == "analytic-radial" || opt.mode.empty()) {
        topt.mode = diffshape::TaylorMode::AnalyticRadial;
    } else if (opt.mode == "nested-mc") {
        topt.mode = diffshape::TaylorMode::NestedMc;
    } else {
        throw ConfigError("taylor mode must be 'analytic-radial' or 'nested-mc'");
    }
    topt.supplied_derivative = opt.derivative;
    topt.n_paths_per_node = opt.node_paths;
    // the 1024 default suits the deterministic functional; the nested grid
    // carries a path bundle per node, so its default is coarser
    topt.grid_resolution = opt.grid_resolution_set ? opt.grid_resolution
                           : topt.mode == diffshape::TaylorMode::NestedMc ? 192
                                                                          : opt.grid_resolution;
    topt.derivative_paths = opt.n_paths;
    topt.constants_samples = opt.n_samples;
    topt.sim = sim_config(opt);

    const auto result = diffshape::taylor_test(field, problem, topt);

    std::ostringstream csv;
    csv << config_header("taylor", opt) << "# derivative_used=" << fmt(result.derivative) << '\n'
        << "# slope=" << fmt(result.fit.slope) << '\n'
        << "# intercept=" << fmt(result.fit.intercept) << '\n'
        << "# r_squared=" << fmt(result.fit.r_squared) << '\n'
        << "# fit_points=" << result.fit.n_points << '\n'
        << "# fit_range=" << fmt(result.fit.eps_lo) << ".." << fmt(result.fit.eps_hi) << '\n'
        << "# conclusive=" << (result.fit.conclusive ? "true" : "false") << '\n'
        << "eps,remainder,stderr,slope\n";
    for (const auto& rec : result.records) {
        csv << fmt(rec.eps) << ',' << fmt(rec.remainder) << ','
            << fmt(std::hypot(rec.j_perturbed_stderr, rec.j_base_stderr)) << ','
            << fmt(result.fit.slope) << '\n';
    }

    std::ostringstream summary;
    summary << "taylor[" << opt.direction << "] slope = " << result.fit.slope << " over eps ["
            << result.fit.eps_lo << ", " << result.fit.eps_hi << "] (" << result.fit.n_points
            << " points, r^2 " << result.fit.r_squared << ", derivative " << result.derivative
            << ")\n";
    if (!result.fit.conclusive) {
        summary << "inconclusive: fewer than 3 points cleared the noise floor\n";
    }
    emit(opt, csv.str(), summary.str());
    return result.fit.conclusive ? 0 : 4;
}

int run_selftest(const Options& opt) {
    const auto problem = diffshape::benchmark_problem();
    diffshape::SimConfig cfg = sim_config(opt);
    int failures = 0;
    auto check = [&failures](bool ok, const std::string& what) {
        std::cout << (ok ? "[pass] " : "[FAIL] ") << what << '\n';
        if (!ok) ++failures;
    };

    using diffshape::PerturbationField;
    const auto v0 = PerturbationField::zero();
    const auto v1 = PerturbationField::builtin("V1");
    const auto v5 = PerturbationField::builtin("V5");
    const auto origin = diffshape::Vec2{0.0, 0.0};

    // zero direction annihilates every estimator
    const auto du0 = diffshape::du_at(origin, v0, problem, 2000, cfg);
    check(du0.value == 0.0 && du0.stderr_ == 0.0, "zero direction gives exact zero");

    // radial direction from the center: payoff is -1/2 on every path
    const auto du1 = diffshape::du_at(origin, v1, problem, 2000, cfg);
    check(std::abs(du1.value + 0.5) < 1e-9 && du1.stderr_ < 1e-9,
          "radial direction from the center is deterministic -1/2");

    // linearity under common random numbers
    const auto combo = PerturbationField::linear_combo({{2.0, v1}, {-3.0, v5}});
    const auto duc = diffshape::du_at(origin, combo, problem, 4000, cfg);
    const auto dua = diffshape::du_at(origin, v1, problem, 4000, cfg);
    const auto dub = diffshape::du_at(origin, v5, problem, 4000, cfg);
    check(std::abs(duc.value - (2.0 * dua.value - 3.0 * dub.value)) < 1e-12,
          "estimator is linear in the direction under common random numbers");

    // per-path bound through the estimate itself
    const double bound = 0.5 * v1.sup_norm();
    check(std::abs(du1.value) <= bound + 1e-12, "estimate respects the sup bound");

    // tangential directions have no boundary flux
    const PerturbationField tangential(
        "tangential", [](const diffshape::Vec2& p) { return diffshape::Vec2{-p.y, p.x}; },
        [](const diffshape::Vec2&) {
            return diffshape::Mat2{0.0, -1.0, 1.0, 0.0};
        });
    const double st = diffshape::surface_term(tangential, diffshape::circle_quadrature(512),
                                              problem);
    check(std::abs(st) < 1e-12, "tangential surface term vanishes");

    // sign duality of the assembled derivative
    const auto setup = diffshape::build_measure_setup(problem, 100'000, opt.seed, opt.threads);
    const auto pre = diffshape::dphi_free(v1, problem, setup, 5000, cfg,
                                          diffshape::SignConvention::Preimage);
    const auto push = diffshape::dphi_free(v1, problem, setup, 5000, cfg,
                                           diffshape::SignConvention::Pushforward);
    check(push.dphi.value == -pre.dphi.value, "pushforward value is the exact negation");

    // killing and weighting agree on the same functional
    const auto [killed, weighted] = diffshape::kill_weight_equivalence(
        [](const diffshape::Vec2&) { return 2.0; }, [](const diffshape::Vec2&) { return 1.0; },
        origin, problem, 20'000, cfg);
    const double tol = 3.0 * std::hypot(killed.stderr_, weighted.stderr_);
    check(std::abs(killed.value - weighted.value) <= tol,
          "kill-based and weight-based estimates agree within 3 sigma");

    // stderr shrinks like 1/sqrt(n)
    const diffshape::Vec2 off{0.3, 0.2};
    const auto small = diffshape::du_at(off, v5, problem, 4000, cfg);
    const auto large = diffshape::du_at(off, v5, problem, 16000, cfg);
    const double ratio = small.stderr_ / large.stderr_;
    check(ratio > 1.6 && ratio < 2.4, "stderr halves when paths quadruple (within 20%)");

    std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo shape-derivative estimators on the unit disk"};
    app.require_subcommand(1);

    Options opt;
    std::vector<CLI::App*> cmds;
    for (const char* name : {"dphi", "du", "taylor", "exittime", "constants", "selftest"}) {
        CLI::App* c = app.add_subcommand(name);
        c->add_option("--direction", opt.direction, "field id V0..V8 or combo like '2*V1-3*V5'");
        c->add_option("--n-paths", opt.n_paths, "Monte Carlo path count");
        c->add_option("--dt", opt.dt, "time step");
        c->add_option("--seed", opt.seed, "random seed");
        c->add_option("--quad-nodes", opt.quad_nodes, "boundary quadrature nodes");
        c->add_option("--grid-resolution", opt.grid_resolution, "functional grid resolution");
        c->add_option("--output", opt.output, "CSV output path (default stdout)");
        c->add_option("--sign-convention", opt.sign_convention, "preimage | pushforward");
        c->add_option("--solution-grid", opt.solution_grid, "CSV grid of solution values");
        c->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
        c->add_flag("--antithetic", opt.antithetic, "antithetic path pairs");
        c->add_option("--n-samples", opt.n_samples, "samples for the constants");
        c->add_option("--estimator", opt.estimator, "weight | kill");
        c->add_option("--x", opt.x, "evaluation point, first coordinate");
        c->add_option("--y", opt.y, "evaluation point, second coordinate");
        c->add_option("--eps", opt.eps, "distortion factor for perturbed-domain queries");
        c->add_option("--mode", opt.mode,
                      "taylor: analytic-radial | nested-mc; exittime: inflating | deflating");
        c->add_option("--node-paths", opt.node_paths, "paths per quadrature node (nested taylor)");
        c->add_option("--derivative",
                      [&opt](const std::vector<std::string>& v) {
                          opt.derivative = std::stod(v.back());
                          return true;
                      },
                      "supplied first-order coefficient (taylor)");
        c->add_option("--config", opt.config_file, "JSON config file; flags override");
        cmds.push_back(c);
    }

    CLI11_PARSE(app, argc, argv);
    CLI::App* cmd = app.get_subcommands().front();
    if (cmd->count("--grid-resolution") > 0) opt.grid_resolution_set = true;

    try {
        if (!opt.config_file.empty()) apply_config_file(opt, *cmd);
        validate(opt);
        const std::string name = cmd->get_name();
        if (name == "dphi") return run_dphi(opt);
        if (name == "du") return run_du(opt);
        if (name == "taylor") return run_taylor(opt);
        if (name == "exittime") return run_exittime(opt);
        if (name == "constants") return run_constants(opt);
        return run_selftest(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
