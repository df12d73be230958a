#include "wrw/fredholm.hpp"

#include <cmath>

#include "wrw/exact.hpp"
#include "wrw/model.hpp"

namespace wrw::fredholm {

double Ar1Kernel::row_mass(std::size_t j) const {
    const std::size_t n = size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += rule.weights[i] * matrix[i * n + j] / rule.weights[j];
    return acc;
}

Ar1Kernel build_kernel(double beta, double trunc_L, int nodes) {
    if (!(trunc_L > 0.0)) throw std::invalid_argument("build_kernel requires L > 0");
    if (nodes < 16) throw std::invalid_argument("build_kernel requires nodes >= 16");
    const auto params = model::ar1_params(beta);

    Ar1Kernel kernel;
    kernel.beta = beta;
    kernel.rho = params.rho;
    kernel.noise_sigma = params.noise_sigma;
    kernel.rule = exact::make_graded_rule(-trunc_L, 0.0, nodes,
                                          std::min(0.01, params.noise_sigma / 4.0));

    const auto& y = kernel.rule.nodes;
    const auto& w = kernel.rule.weights;
    const std::size_t n = y.size();
    kernel.matrix.resize(n * n);
    const double inv_sigma = 1.0 / params.noise_sigma;
    for (std::size_t i = 0; i < n; ++i) {
        double* row = kernel.matrix.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double t = (y[i] - params.rho * y[j]) * inv_sigma;
            row[j] = w[j] * inv_sigma * exact::norm_pdf(t);
        }
    }
    return kernel;
}

PowerIterResult lambda_beta(double beta, const FredholmOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("lambda_beta requires tol > 0");
    const Ar1Kernel kernel = build_kernel(beta, opts.trunc_L, opts.nodes);
    const auto& rule = kernel.rule;
    const std::size_t n = kernel.size();

    // g0 = half-normal density (law of X_0 given X_0 <= 0) on [-L, 0]
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = 2.0 * exact::norm_pdf(rule.nodes[i]);
    double mass = exact::grid_mass(rule, g);
    for (double& v : g) v /= mass;

    PowerIterResult result;
    result.beta = beta;
    result.tol = opts.tol;

    std::vector<double> h(n);
    double prev_ratio = -1.0;
    for (std::uint64_t it = 1; it <= opts.max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = kernel.matrix.data() + i * n;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += row[j] * g[j];
            h[i] = acc;
        }
        const double ratio = exact::grid_mass(rule, h);
        result.mass_ratios.push_back(ratio);
        result.iterations = it;
        for (std::size_t i = 0; i < n; ++i) g[i] = h[i] / ratio;
        if (prev_ratio >= 0.0 && std::abs(ratio - prev_ratio) < opts.tol) {
            result.lambda_hat = -std::log(ratio);
            result.eigenfunction.rule = rule;
            result.eigenfunction.values = g;
            result.eigenfunction.mass = 1.0;
            // residual of the eigen equation at the reported rate
            double res = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double* row = kernel.matrix.data() + i * n;
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += row[j] * g[j];
                res += rule.weights[i] * std::abs(ratio * g[i] - acc);
            }
            result.residual_l1 = res;
            return result;
        }
        prev_ratio = ratio;
    }
    throw ConvergenceError("lambda_beta did not converge within max_iter; last ratio " +
                               std::to_string(prev_ratio) + " after " +
                               std::to_string(opts.max_iter) + " iterations",
                           prev_ratio, opts.max_iter);
}

FredholmDiagnostics verify_fredholm(const PowerIterResult& result) {
    FredholmDiagnostics diag;
    diag.residual_l1 = result.residual_l1;
    double margin = 0.0;
    bool have = false;
    for (std::size_t i = 1; i < result.mass_ratios.size(); ++i) {
        const double inc = result.mass_ratios[i] - result.mass_ratios[i - 1];
        if (!have || inc < margin) margin = inc, have = true;
    }
    diag.monotonicity_margin = margin;
    diag.pass = diag.residual_l1 < 10.0 * result.tol && margin >= -1e-10;
    return diag;
}

}  // namespace wrw::fredholm
