#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wrw/quadrature.hpp"

namespace wrw::fredholm {

/// Discretized AR(1) transition operator restricted to [-L, 0]:
/// matrix[i*n + j] = p(y_j, u_i) w_j, so (Tf)_i = sum_j matrix[i*n+j] f_j.
struct Ar1Kernel {
    double beta = 0.0;
    double rho = 0.0;          // e^{-beta/2}
    double noise_sigma = 0.0;  // sqrt(1 - e^{-beta})
    exact::QuadratureRule rule;
    std::vector<double> matrix;

    std::size_t size() const { return rule.nodes.size(); }
    /// Sub-Markov mass leaving source node y_j: sum_i w_i p(y_j, u_i) <= 1.
    double row_mass(std::size_t j) const;
};

Ar1Kernel build_kernel(double beta, double trunc_L, int nodes);

struct PowerIterResult {
    double beta = 0.0;
    double lambda_hat = 0.0;              // -log(final mass ratio)
    std::vector<double> mass_ratios;      // F_n(0), nondecreasing up to discretization
    exact::DensityGrid eigenfunction;     // phi, normalized to mass 1
    std::uint64_t iterations = 0;
    double residual_l1 = 0.0;             // ||e^{-lambda} phi - T phi||_1
    double tol = 0.0;
};

struct FredholmOptions {
    double tol = 1e-10;
    std::uint64_t max_iter = 100000;
    double trunc_L = 12.0;
    int nodes = 600;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_ratio_, std::uint64_t iterations_)
        : std::runtime_error(what), last_ratio(last_ratio_), iterations(iterations_) {}
    double last_ratio;
    std::uint64_t iterations;
};

/// Power iteration for lambda_beta, started from the half-normal so the mass
/// ratios equal the conditional survival sequence F_n(0).
PowerIterResult lambda_beta(double beta, const FredholmOptions& opts = {});

struct FredholmDiagnostics {
    double residual_l1 = 0.0;
    double monotonicity_margin = 0.0;  // min consecutive increment of mass_ratios
    bool pass = false;
};

FredholmDiagnostics verify_fredholm(const PowerIterResult& result);

}  // namespace wrw::fredholm
