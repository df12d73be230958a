#pragma once

#include <span>
#include <string_view>

namespace wrw::analysis {

enum class FitKind { PolynomialExponent, ExponentialRate, SubexpRate };

std::string_view fit_kind_name(FitKind kind);

struct CurvePoint {
    double n = 0.0;        // horizon
    double p = 0.0;        // survival probability
    double std_err = 0.0;  // 0 for exact curves
};

struct FitResult {
    FitKind kind = FitKind::PolynomialExponent;
    double value = 0.0;      // theta, lambda, or the N^alpha rate (= -slope)
    double intercept = 0.0;
    double std_err = 0.0;    // standard error of the slope
    double r_squared = 0.0;
    int points_used = 0;
};

struct FitOptions {
    double min_n = 8.0;          // drop horizons below this (small-N corrections)
    double min_survivors = 25.0; // drop MC points with fewer implied survivors
};

struct FitDiagnostics {
    int dropped_nonpositive = 0;
    int dropped_small_n = 0;
    int dropped_low_count = 0;
};

/// Weighted least squares of log p against log N; value = -slope.
FitResult fit_polynomial_exponent(std::span<const CurvePoint> curve, const FitOptions& opts = {},
                                  FitDiagnostics* diag = nullptr);

/// Weighted least squares of log p against N; value = -slope.
FitResult fit_exponential_rate(std::span<const CurvePoint> curve, const FitOptions& opts = {},
                               FitDiagnostics* diag = nullptr);

/// Weighted least squares of log p against N^alpha; value = -slope (nu/2).
FitResult fit_subexp_rate(std::span<const CurvePoint> curve, double alpha,
                          const FitOptions& opts = {}, FitDiagnostics* diag = nullptr);

/// c(x) = e^{-x/2}/(1 - e^{-x/2}) = 1/(e^{x/2} - 1); strictly decreasing.
double c_of(double x);

/// beta0 = 2 log(1 + 1/log 2); c(beta0) = log 2.
double beta0();

/// Unique root of beta/2 = log 2 - log(1 + (2/pi) arcsin(e^{-beta/2})).
double beta1();

struct BoundsReport {
    double beta = 0.0;
    double c_beta = 0.0;
    double beta0 = 0.0;
    double beta1 = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// Lower/upper bounds on lambda_beta; the lower bound is floored at 0.
BoundsReport lambda_bounds(double beta);

}  // namespace wrw::analysis
