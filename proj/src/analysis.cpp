#include "wrw/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wrw::analysis {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kLog2 = 0.69314718055994530941723212145818;

struct FitPoint {
    double x, y, w;
};

FitResult weighted_fit(FitKind kind, std::span<const CurvePoint> curve,
                       double (*transform)(double, double), double aux, bool require_span,
                       const FitOptions& opts, FitDiagnostics* diag) {
    FitDiagnostics local;
    FitDiagnostics& d = diag ? *diag : local;

    bool any_exact = false;
    for (const auto& pt : curve)
        if (pt.std_err <= 0.0) any_exact = true;

    std::vector<FitPoint> pts;
    pts.reserve(curve.size());
    double n_min = 0.0, n_max = 0.0;
    for (const auto& pt : curve) {
        if (!(pt.p > 0.0)) {
            ++d.dropped_nonpositive;
            continue;
        }
        if (pt.n < opts.min_n) {
            ++d.dropped_small_n;
            continue;
        }
        if (pt.std_err > 0.0 && pt.p < 1.0) {
            // binomial identity: survivors = p^2 (1-p) / std_err^2
            const double survivors = pt.p * pt.p * (1.0 - pt.p) / (pt.std_err * pt.std_err);
            if (survivors < opts.min_survivors) {
                ++d.dropped_low_count;
                continue;
            }
        }
        double w = 1.0;
        if (!any_exact) {
            const double rel = pt.std_err / pt.p;
            w = 1.0 / (rel * rel);
        }
        if (pts.empty()) {
            n_min = n_max = pt.n;
        } else {
            n_min = std::min(n_min, pt.n);
            n_max = std::max(n_max, pt.n);
        }
        pts.push_back({transform(pt.n, aux), std::log(pt.p), w});
    }

    if (pts.size() < 3)
        throw std::invalid_argument("fit requires at least 3 usable points");
    if (require_span && !(n_max >= 4.0 * n_min * (1.0 - 1e-12)))
        throw std::invalid_argument("fit requires horizons spanning at least 2 octaves");

    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (const auto& pt : pts) {
        sw += pt.w;
        sx += pt.w * pt.x;
        sy += pt.w * pt.y;
    }
    const double xbar = sx / sw, ybar = sy / sw;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& pt : pts) {
        const double dx = pt.x - xbar, dy = pt.y - ybar;
        sxx += pt.w * dx * dx;
        sxy += pt.w * dx * dy;
        syy += pt.w * dy * dy;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit abscissae are degenerate");

    const double slope = sxy / sxx;
    const double intercept = ybar - slope * xbar;
    double ssr = 0.0;
    for (const auto& pt : pts) {
        const double r = pt.y - (intercept + slope * pt.x);
        ssr += pt.w * r * r;
    }

    FitResult res;
    res.kind = kind;
    res.value = -slope;
    res.intercept = intercept;
    res.points_used = static_cast<int>(pts.size());
    res.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ssr / syy) : 1.0;
    res.std_err =
        pts.size() > 2 ? std::sqrt(std::max(0.0, ssr / (static_cast<double>(pts.size()) - 2.0)) / sxx)
                       : 0.0;
    return res;
}

}  // namespace

std::string_view fit_kind_name(FitKind kind) {
    switch (kind) {
        case FitKind::PolynomialExponent: return "polynomial_exponent";
        case FitKind::ExponentialRate: return "exponential_rate";
        case FitKind::SubexpRate: return "subexp_rate";
    }
    return "?";
}

FitResult fit_polynomial_exponent(std::span<const CurvePoint> curve, const FitOptions& opts,
                                  FitDiagnostics* diag) {
    return weighted_fit(
        FitKind::PolynomialExponent, curve, [](double n, double) { return std::log(n); }, 0.0,
        /*require_span=*/true, opts, diag);
}

FitResult fit_exponential_rate(std::span<const CurvePoint> curve, const FitOptions& opts,
                               FitDiagnostics* diag) {
    return weighted_fit(
        FitKind::ExponentialRate, curve, [](double n, double) { return n; }, 0.0,
        /*require_span=*/false, opts, diag);
}

FitResult fit_subexp_rate(std::span<const CurvePoint> curve, double alpha, const FitOptions& opts,
                          FitDiagnostics* diag) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("fit_subexp_rate requires alpha in (0,1)");
    return weighted_fit(
        FitKind::SubexpRate, curve, [](double n, double a) { return std::pow(n, a); }, alpha,
        /*require_span=*/false, opts, diag);
}

double c_of(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("c_of requires x > 0");
    return 1.0 / std::expm1(x / 2.0);
}

double beta0() { return 2.0 * std::log1p(1.0 / kLog2); }

namespace {

// beta/2 - log 2 + log(1 + (2/pi) arcsin(e^{-beta/2})); negative below the
// crossing, positive above it.
double branch_gap(double beta) {
    return beta / 2.0 - kLog2 + std::log1p((2.0 / kPi) * std::asin(std::exp(-beta / 2.0)));
}

}  // namespace

double beta1() {
    static const double value = [] {
        double lo = 0.01, hi = beta0();
        if (!(branch_gap(lo) < 0.0) || !(branch_gap(hi) > 0.0))
            throw std::logic_error("beta1 bracket failure; check the bound formulas");
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            (branch_gap(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return value;
}

BoundsReport lambda_bounds(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("lambda_bounds requires beta > 0");
    BoundsReport rep;
    rep.beta = beta;
    rep.c_beta = c_of(beta);
    rep.beta0 = beta0();
    rep.beta1 = beta1();
    if (beta > rep.beta0) {
        rep.lower = kLog2 - c_of(beta);
    } else {
        const double m = std::ceil(rep.beta0 / beta);
        rep.lower = std::max(0.0, (kLog2 - c_of(beta * m)) / m);
    }
    rep.upper = beta <= rep.beta1
                    ? beta / 2.0
                    : kLog2 - std::log1p((2.0 / kPi) * std::asin(std::exp(-beta / 2.0)));
    return rep;
}

}  // namespace wrw::analysis
