#include "wrw/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wrw/analysis.hpp"
#include "wrw/exact.hpp"
#include "wrw/fredholm.hpp"
#include "wrw/grids.hpp"
#include "wrw/model.hpp"
#include "wrw/report.hpp"
#include "wrw/scenarios.hpp"
#include "wrw/simulate.hpp"

namespace wrw::cli {

namespace {

using Clock = std::chrono::steady_clock;

struct OutputOpts {
    std::string kind = "csv";
    std::string file;
    bool quiet = false;
};

void add_output_flags(CLI::App* cmd, OutputOpts& out) {
    cmd->add_option("--out", out.kind, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out-file", out.file, "write the report to this path");
    cmd->add_flag("--quiet", out.quiet, "suppress notes on stderr");
}

std::vector<std::uint64_t> horizons_from_flags(std::uint64_t n, const std::string& grid) {
    if (!grid.empty()) {
        if (grid.rfind("dyadic:", 0) != 0)
            throw std::invalid_argument("--N-grid expects dyadic:<min>:<max>");
        const std::string body = grid.substr(7);
        const auto colon = body.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("--N-grid expects dyadic:<min>:<max>");
        const std::uint64_t lo = std::stoull(body.substr(0, colon));
        const std::uint64_t hi = std::stoull(body.substr(colon + 1));
        return dyadic_horizons(lo, hi);
    }
    if (n == 0) throw std::invalid_argument("provide --N or --N-grid");
    return {n};
}

std::vector<double> betas_from_flags(double beta, const std::string& grid) {
    if (!grid.empty()) {
        double lo = 0.0, hi = 0.0;
        int count = 0;
        char c1 = 0, c2 = 0;
        std::istringstream ss(grid);
        if (!(ss >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
            throw std::invalid_argument("--beta-grid expects <min>:<max>:<count>");
        return linear_grid(lo, hi, count);
    }
    if (!(beta > 0.0)) throw std::invalid_argument("provide --beta or --beta-grid");
    return {beta};
}

std::vector<analysis::CurvePoint> read_curve_csv(const std::string& path) {
    std::ifstream file;
    std::istream* in = nullptr;
    if (path == "-") {
        in = &std::cin;
    } else {
        file.open(path);
        if (!file) throw std::invalid_argument("cannot open curve file: " + path);
        in = &file;
    }
    std::string line;
    if (!std::getline(*in, line)) throw std::invalid_argument("empty curve file");
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(s);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    const auto header = split(line);
    int idx_n = -1, idx_p = -1, idx_se = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "N") idx_n = static_cast<int>(i);
        if (header[i] == "p_hat" || header[i] == "p_exact" || header[i] == "p")
            idx_p = static_cast<int>(i);
        if (header[i] == "std_err") idx_se = static_cast<int>(i);
    }
    if (idx_n < 0 || idx_p < 0)
        throw std::invalid_argument("curve CSV needs 'N' and 'p_hat'/'p_exact' columns");
    std::vector<analysis::CurvePoint> curve;
    while (std::getline(*in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        analysis::CurvePoint pt;
        pt.n = std::stod(cells.at(idx_n));
        pt.p = std::stod(cells.at(idx_p));
        pt.std_err = idx_se >= 0 ? std::stod(cells.at(idx_se)) : 0.0;
        curve.push_back(pt);
    }
    return curve;
}

int run_survival_mc(const std::string& sigma_spec, const std::string& dist_name, double barrier,
                    std::uint64_t n, const std::string& n_grid, std::uint64_t paths,
                    std::uint64_t seed, std::uint32_t streams, unsigned threads,
                    const OutputOpts& out) {
    const auto t0 = Clock::now();
    model::WalkSpec spec;
    spec.weight = model::parse_weight(sigma_spec);
    spec.dist = model::IncrementDistribution::parse(dist_name);
    spec.barrier = barrier;
    const auto horizons = horizons_from_flags(n, n_grid);

    const sim::RngStreamConfig rng{seed, streams};
    const auto curve = sim::survival_curve(spec, horizons, paths, rng, {true, threads});

    Table table;
    table.header = {"N", "p_hat", "std_err", "paths", "survivors", "seed"};
    nlohmann::json data = nlohmann::json::array();
    for (const auto& est : curve) {
        table.rows.push_back({std::to_string(est.horizon), format_double(est.p_hat),
                              format_double(est.std_err), std::to_string(est.paths),
                              std::to_string(est.survivors), std::to_string(est.seed)});
        data.push_back({{"N", est.horizon},
                        {"p_hat", est.p_hat},
                        {"std_err", est.std_err},
                        {"paths", est.paths},
                        {"survivors", est.survivors},
                        {"seed", est.seed}});
    }

    RunManifest manifest;
    manifest.subcommand = "survival-mc";
    manifest.seed = seed;
    manifest.params = {{"sigma", sigma_spec},
                       {"dist", dist_name},
                       {"barrier", format_double(barrier)},
                       {"N", n_grid.empty() ? std::to_string(n) : n_grid},
                       {"paths", std::to_string(paths)},
                       {"streams", std::to_string(streams)}};
    manifest.wall_time_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    emit_report(table, data, manifest, out.kind, out.file);
    return 0;
}

int run_survival_exact(const std::string& kappa_spec, double barrier, std::uint64_t n,
                       const std::string& n_grid, int nodes, double trunc_l,
                       const OutputOpts& out) {
    const auto t0 = Clock::now();
    const auto clock = model::parse_time_change(kappa_spec);
    const auto horizons = horizons_from_flags(n, n_grid);
    const exact::ExactOptions opts{trunc_l, nodes};
    const auto curve = exact::exact_survival_curve(clock, horizons, barrier, opts);

    Table table;
    table.header = {"N", "p_exact", "nodes", "trunc_L"};
    nlohmann::json data = nlohmann::json::array();
    for (const auto& pt : curve) {
        table.rows.push_back({std::to_string(pt.horizon), format_double(pt.p),
                              std::to_string(nodes), format_double(trunc_l)});
        data.push_back({{"N", pt.horizon},
                        {"p_exact", pt.p},
                        {"nodes", nodes},
                        {"trunc_L", trunc_l}});
    }

    RunManifest manifest;
    manifest.subcommand = "survival-exact";
    manifest.params = {{"kappa", kappa_spec},
                       {"barrier", format_double(barrier)},
                       {"N", n_grid.empty() ? std::to_string(n) : n_grid},
                       {"nodes", std::to_string(nodes)},
                       {"trunc_L", format_double(trunc_l)}};
    manifest.wall_time_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    emit_report(table, data, manifest, out.kind, out.file);
    return 0;
}

int run_lambda(double beta, const std::string& beta_grid, double tol, std::uint64_t max_iter,
               int nodes, double trunc_l, const OutputOpts& out) {
    const auto t0 = Clock::now();
    const auto betas = betas_from_flags(beta, beta_grid);
    fredholm::FredholmOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    opts.nodes = nodes;
    opts.trunc_L = trunc_l;

    Table table;
    table.header = {"beta", "lambda_hat", "lower_bound", "upper_bound", "iterations",
                    "residual_l1"};
    nlohmann::json data = nlohmann::json::array();
    for (double b : betas) {
        const auto result = fredholm::lambda_beta(b, opts);
        const auto bounds = analysis::lambda_bounds(b);
        table.rows.push_back({format_double(b), format_double(result.lambda_hat),
                              format_double(bounds.lower), format_double(bounds.upper),
                              std::to_string(result.iterations),
                              format_double(result.residual_l1)});
        data.push_back({{"beta", b},
                        {"lambda_hat", result.lambda_hat},
                        {"lower_bound", bounds.lower},
                        {"upper_bound", bounds.upper},
                        {"iterations", result.iterations},
                        {"residual_l1", result.residual_l1}});
    }

    RunManifest manifest;
    manifest.subcommand = "lambda";
    manifest.params = {{"beta", beta_grid.empty() ? format_double(beta) : beta_grid},
                       {"tol", format_double(tol)},
                       {"max_iter", std::to_string(max_iter)},
                       {"nodes", std::to_string(nodes)},
                       {"trunc_L", format_double(trunc_l)}};
    manifest.wall_time_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    emit_report(table, data, manifest, out.kind, out.file);
    return 0;
}

int run_bounds(double beta, const std::string& beta_grid, const OutputOpts& out) {
    const auto t0 = Clock::now();
    const auto betas = betas_from_flags(beta, beta_grid);

    Table table;
    table.header = {"beta", "c_beta", "beta0", "beta1", "lower", "upper"};
    nlohmann::json data = nlohmann::json::array();
    for (double b : betas) {
        const auto rep = analysis::lambda_bounds(b);
        table.rows.push_back({format_double(rep.beta), format_double(rep.c_beta),
                              format_double(rep.beta0), format_double(rep.beta1),
                              format_double(rep.lower), format_double(rep.upper)});
        data.push_back({{"beta", rep.beta},
                        {"c_beta", rep.c_beta},
                        {"beta0", rep.beta0},
                        {"beta1", rep.beta1},
                        {"lower", rep.lower},
                        {"upper", rep.upper}});
    }

    RunManifest manifest;
    manifest.subcommand = "bounds";
    manifest.params = {{"beta", beta_grid.empty() ? format_double(beta) : beta_grid}};
    manifest.wall_time_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    emit_report(table, data, manifest, out.kind, out.file);
    return 0;
}

int run_fit(const std::string& in_path, const std::string& kind_name, double alpha, double min_n,
            const OutputOpts& out) {
    const auto t0 = Clock::now();
    const auto curve = read_curve_csv(in_path);
    analysis::FitOptions opts;
    opts.min_n = min_n;
    analysis::FitDiagnostics diag;

    analysis::FitResult fit;
    if (kind_name == "poly") {
        fit = analysis::fit_polynomial_exponent(curve, opts, &diag);
    } else if (kind_name == "exp") {
        fit = analysis::fit_exponential_rate(curve, opts, &diag);
    } else if (kind_name == "subexp") {
        fit = analysis::fit_subexp_rate(curve, alpha, opts, &diag);
    } else {
        throw std::invalid_argument("--kind must be poly, exp, or subexp");
    }
    if (!out.quiet && (diag.dropped_nonpositive || diag.dropped_small_n || diag.dropped_low_count))
        std::cerr << "fit: dropped " << diag.dropped_nonpositive << " nonpositive, "
                  << diag.dropped_small_n << " below min-N, " << diag.dropped_low_count
                  << " low-count points\n";

    Table table;
    table.header = {"kind", "value", "intercept", "std_err", "r_squared", "points_used"};
    table.rows.push_back({std::string(analysis::fit_kind_name(fit.kind)),
                          format_double(fit.value), format_double(fit.intercept),
                          format_double(fit.std_err), format_double(fit.r_squared),
                          std::to_string(fit.points_used)});
    nlohmann::json data = {{"kind", std::string(analysis::fit_kind_name(fit.kind))},
                           {"value", fit.value},
                           {"intercept", fit.intercept},
                           {"std_err", fit.std_err},
                           {"r_squared", fit.r_squared},
                           {"points_used", fit.points_used}};

    RunManifest manifest;
    manifest.subcommand = "fit";
    manifest.params = {{"in", in_path},
                       {"kind", kind_name},
                       {"alpha", format_double(alpha)},
                       {"min_N", format_double(min_n)}};
    manifest.wall_time_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    emit_report(table, data, manifest, out.kind.empty() ? "json" : out.kind, out.file);
    return 0;
}

int run_universality(double p, std::uint64_t paths, const std::string& n_grid, double min_n,
                     std::uint64_t seed, std::uint32_t streams, unsigned threads,
                     const OutputOpts& out) {
    const auto t0 = Clock::now();
    const auto horizons = horizons_from_flags(0, n_grid.empty() ? "dyadic:8:512" : n_grid);
    analysis::FitOptions fit_opts;
    fit_opts.min_n = min_n;

    Table table;
    table.header = {"dist", "exponent", "std_err", "r_squared", "points_used"};
    nlohmann::json data = nlohmann::json::array();
    std::vector<double> exponents;
    for (auto kind : {model::IncrementDistribution::Kind::Gaussian,
                      model::IncrementDistribution::Kind::Rademacher,
                      model::IncrementDistribution::Kind::Laplace,
                      model::IncrementDistribution::Kind::Uniform}) {
        model::WalkSpec spec;
        spec.weight = model::WeightFunction::polynomial(p);
        spec.dist = {kind};
        const auto curve =
            sim::survival_curve(spec, horizons, paths, {seed, streams}, {true, threads});
        std::vector<analysis::CurvePoint> pts;
        for (const auto& est : curve)
            pts.push_back({static_cast<double>(est.horizon), est.p_hat, est.std_err});
        const auto fit = analysis::fit_polynomial_exponent(pts, fit_opts);
        exponents.push_back(fit.value);
        table.rows.push_back({std::string(spec.dist.name()), format_double(fit.value),
                              format_double(fit.std_err), format_double(fit.r_squared),
                              std::to_string(fit.points_used)});
        data.push_back({{"dist", std::string(spec.dist.name())},
                        {"exponent", fit.value},
                        {"std_err", fit.std_err},
                        {"r_squared", fit.r_squared},
                        {"points_used", fit.points_used}});
    }
    double max_delta = 0.0;
    for (std::size_t a = 0; a < exponents.size(); ++a)
        for (std::size_t b = a + 1; b < exponents.size(); ++b)
            max_delta = std::max(max_delta, std::abs(exponents[a] - exponents[b]));
    nlohmann::json payload = {{"curves", data},
                              {"max_pairwise_delta", max_delta},
                              {"target_exponent", p + 0.5}};
    if (!out.quiet)
        std::cerr << "universality: max pairwise exponent delta " << max_delta << "\n";

    RunManifest manifest;
    manifest.subcommand = "universality";
    manifest.seed = seed;
    manifest.params = {{"p", format_double(p)},
                       {"paths", std::to_string(paths)},
                       {"N", n_grid.empty() ? "dyadic:8:512" : n_grid},
                       {"min_N", format_double(min_n)},
                       {"streams", std::to_string(streams)}};
    manifest.wall_time_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    emit_report(table, payload, manifest, out.kind, out.file);
    return 0;
}

int run_reproduce(const std::string& name, bool list) {
    if (list) {
        for (const auto& n : scenarios::scenario_names()) std::cout << n << "\n";
        return 0;
    }
    const auto result = scenarios::run_scenario(name);
    for (const auto& c : result.checks)
        std::cout << (c.passed ? "PASS" : "FAIL") << " " << c.label << ": " << c.detail << "\n";
    std::cout << "scenario " << result.name << ": " << (result.passed ? "PASS" : "FAIL") << " ("
              << result.checks.size() << " checks, " << format_double(result.seconds) << " s)\n";
    return result.passed ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"survival probabilities of weighted random walks"};
    app.require_subcommand(1);

    // survival-mc
    std::string mc_sigma, mc_dist, mc_grid;
    double mc_barrier = 0.0;
    std::uint64_t mc_n = 0, mc_paths = 100000, mc_seed = 0;
    std::uint32_t mc_streams = 64;
    unsigned mc_threads = 0;
    OutputOpts mc_out;
    auto* mc = app.add_subcommand("survival-mc", "Monte Carlo survival estimates");
    mc->add_option("--sigma", mc_sigma, "weight spec: poly:p=, exp:beta=, const, table:@file")
        ->required();
    mc->add_option("--dist", mc_dist, "increment distribution")
        ->required()
        ->check(CLI::IsMember({"gaussian", "rademacher", "laplace", "uniform"}));
    mc->add_option("--barrier", mc_barrier, "barrier c");
    auto* mc_n_opt = mc->add_option("--N", mc_n, "single horizon")->check(CLI::PositiveNumber);
    mc->add_option("--N-grid", mc_grid, "dyadic:<min>:<max>")->excludes(mc_n_opt);
    mc->add_option("--paths", mc_paths, "number of simulated paths")->check(CLI::PositiveNumber);
    mc->add_option("--seed", mc_seed, "RNG seed");
    mc->add_option("--streams", mc_streams, "RNG substream count")->check(CLI::PositiveNumber);
    mc->add_option("--threads", mc_threads, "worker threads (0 = auto)");
    add_output_flags(mc, mc_out);

    // survival-exact
    std::string ex_kappa, ex_grid;
    double ex_barrier = 0.0, ex_trunc = 12.0;
    std::uint64_t ex_n = 0;
    int ex_nodes = 800;
    OutputOpts ex_out;
    auto* ex = app.add_subcommand("survival-exact", "quadrature-exact Gaussian survival");
    ex->add_option("--kappa", ex_kappa,
                   "time change spec: power:q=, subexp:nu=,alpha=, exp:beta=, pwexp:q=, sigma:<weight>")
        ->required();
    ex->add_option("--barrier", ex_barrier, "barrier c");
    auto* ex_n_opt = ex->add_option("--N", ex_n, "single horizon")->check(CLI::PositiveNumber);
    ex->add_option("--N-grid", ex_grid, "dyadic:<min>:<max>")->excludes(ex_n_opt);
    ex->add_option("--nodes", ex_nodes, "quadrature nodes")->check(CLI::Range(16, 100000));
    ex->add_option("--trunc-L", ex_trunc, "truncation depth")->check(CLI::PositiveNumber);
    add_output_flags(ex, ex_out);

    // lambda
    double la_beta = 0.0, la_tol = 1e-10, la_trunc = 12.0;
    std::string la_grid;
    std::uint64_t la_max_iter = 100000;
    int la_nodes = 600;
    OutputOpts la_out;
    auto* la = app.add_subcommand("lambda", "lambda_beta by restricted power iteration");
    auto* la_beta_opt =
        la->add_option("--beta", la_beta, "single beta")->check(CLI::PositiveNumber);
    la->add_option("--beta-grid", la_grid, "<min>:<max>:<count>")->excludes(la_beta_opt);
    la->add_option("--tol", la_tol, "mass-ratio stopping tolerance")->check(CLI::PositiveNumber);
    la->add_option("--max-iter", la_max_iter, "iteration cap")->check(CLI::PositiveNumber);
    la->add_option("--nodes", la_nodes, "quadrature nodes")->check(CLI::Range(16, 100000));
    la->add_option("--trunc-L", la_trunc, "truncation depth")->check(CLI::PositiveNumber);
    add_output_flags(la, la_out);

    // bounds
    double bo_beta = 0.0;
    std::string bo_grid;
    OutputOpts bo_out;
    bo_out.kind = "json";
    auto* bo = app.add_subcommand("bounds", "closed-form lambda_beta bounds");
    auto* bo_beta_opt =
        bo->add_option("--beta", bo_beta, "single beta")->check(CLI::PositiveNumber);
    bo->add_option("--beta-grid", bo_grid, "<min>:<max>:<count>")->excludes(bo_beta_opt);
    add_output_flags(bo, bo_out);

    // fit
    std::string fi_in, fi_kind;
    double fi_alpha = 0.0, fi_min_n = 8.0;
    OutputOpts fi_out;
    fi_out.kind = "json";
    auto* fi = app.add_subcommand("fit", "fit a decay rate to a survival curve CSV");
    fi->add_option("--in", fi_in, "curve CSV path ('-' for stdin)")->required();
    fi->add_option("--kind", fi_kind, "poly | exp | subexp")
        ->required()
        ->check(CLI::IsMember({"poly", "exp", "subexp"}));
    fi->add_option("--alpha", fi_alpha, "subexp stretching exponent");
    fi->add_option("--min-N", fi_min_n, "drop horizons below this before fitting");
    add_output_flags(fi, fi_out);

    // universality
    double un_p = 0.5, un_min_n = 8.0;
    std::uint64_t un_paths = 1000000, un_seed = 0;
    std::uint32_t un_streams = 64;
    unsigned un_threads = 0;
    std::string un_grid;
    OutputOpts un_out;
    auto* un = app.add_subcommand("universality",
                                  "fit MC exponents for all increment distributions");
    un->add_option("--p", un_p, "polynomial weight exponent")->check(CLI::PositiveNumber);
    un->add_option("--paths", un_paths, "paths per distribution")->check(CLI::PositiveNumber);
    un->add_option("--N-grid", un_grid, "dyadic:<min>:<max>");
    un->add_option("--min-N", un_min_n, "drop horizons below this before fitting");
    un->add_option("--seed", un_seed, "RNG seed");
    un->add_option("--streams", un_streams, "RNG substream count")->check(CLI::PositiveNumber);
    un->add_option("--threads", un_threads, "worker threads (0 = auto)");
    add_output_flags(un, un_out);

    // reproduce
    std::string re_name;
    bool re_list = false;
    auto* re = app.add_subcommand("reproduce", "run a canned acceptance scenario");
    re->add_option("name", re_name, "scenario name");
    re->add_flag("--list", re_list, "list scenario names");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(mc))
            return run_survival_mc(mc_sigma, mc_dist, mc_barrier, mc_n, mc_grid, mc_paths,
                                   mc_seed, mc_streams, mc_threads, mc_out);
        if (app.got_subcommand(ex))
            return run_survival_exact(ex_kappa, ex_barrier, ex_n, ex_grid, ex_nodes, ex_trunc,
                                      ex_out);
        if (app.got_subcommand(la))
            return run_lambda(la_beta, la_grid, la_tol, la_max_iter, la_nodes, la_trunc, la_out);
        if (app.got_subcommand(bo)) return run_bounds(bo_beta, bo_grid, bo_out);
        if (app.got_subcommand(fi)) return run_fit(fi_in, fi_kind, fi_alpha, fi_min_n, fi_out);
        if (app.got_subcommand(un))
            return run_universality(un_p, un_paths, un_grid, un_min_n, un_seed, un_streams,
                                    un_threads, un_out);
        if (app.got_subcommand(re)) {
            if (re_name.empty() && !re_list)
                throw std::invalid_argument("reproduce needs a scenario name or --list");
            return run_reproduce(re_name, re_list);
        }
    } catch (const fredholm::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace wrw::cli
