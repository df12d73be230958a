#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wrw/model.hpp"
#include "wrw/quadrature.hpp"

namespace wrw::exact {

double norm_pdf(double x);
double norm_cdf(double x);

/// P(B_s <= 0, B_t <= 0) = 1/4 + arctan(sqrt(s/(t-s)))/(2 pi), 0 < s < t.
double pair_orthant_prob(double s, double t);

/// P(sup_{t in [0,T]} U_t <= 0) = arcsin(e^{-T/2})/pi for the stationary OU process.
double ou_survival_continuous(double T);

/// P(sup_{t in [0,1]} B_t > u) = P(|B_1| > u) = 2(1 - Phi(u)); bounded by e^{-u^2/2}.
double bm_sup_tail(double u);

/// (1/2)(1/2 + arcsin(e^{-beta/2})/pi)^N, a lower bound for
/// P(sup_{n=0..N} B(e^{beta n}) <= 0).
double exp_case_lower_bound(double beta, std::uint64_t n);

/// Upper bound for the same probability: (1/2)exp(-(log 2 - c(beta)) N) for
/// beta > beta0, and the m-rescaled form for beta <= beta0 (requires N > m).
double exp_case_upper_bound(double beta, std::uint64_t n);

struct ExactOptions {
    double trunc_L = 12.0;  // truncation depth in conditional standard deviations
    int nodes = 800;        // quadrature resolution target
};

struct ExactPoint {
    std::uint64_t horizon = 0;
    double p = 0.0;
};

/// P(B_{kappa(1)} <= c, ..., B_{kappa(N)} <= c) by propagating the
/// conditioned sub-probability density through the Gaussian step kernels in
/// self-similar coordinates u = x/sqrt(kappa(n)), where each step is
/// Normal(rho_n u, 1 - rho_n^2) with rho_n = sqrt(kappa(n)/kappa(n+1)).
double discrete_gaussian_survival(const model::TimeChange& tc, std::uint64_t horizon,
                                  double barrier, const ExactOptions& opts = {});

/// One propagation pass recording the survival probability at each horizon.
std::vector<ExactPoint> exact_survival_curve(const model::TimeChange& tc,
                                             std::span<const std::uint64_t> horizons,
                                             double barrier, const ExactOptions& opts = {});

}  // namespace wrw::exact
