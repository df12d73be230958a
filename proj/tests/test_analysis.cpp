#include <cmath>
#include <vector>

#include "doctest.h"
#include "wrw/analysis.hpp"
#include "wrw/grids.hpp"
#include "wrw/model.hpp"
#include "wrw/simulate.hpp"

using namespace wrw;
using analysis::CurvePoint;

namespace {
const double kPi = 3.14159265358979323846;
const double kLog2 = std::log(2.0);
}  // namespace

TEST_CASE("exact synthetic curves are recovered with zero residual") {
    std::vector<CurvePoint> poly;
    for (std::uint64_t n = 16; n <= 1024; n *= 2)
        poly.push_back({(double)n, 2.0 * std::pow((double)n, -1.5), 0.0});
    const auto pf = analysis::fit_polynomial_exponent(poly);
    CHECK(pf.value == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(pf.intercept == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(pf.r_squared >= 1.0 - 1e-12);
    CHECK(pf.std_err < 1e-10);
    CHECK(pf.points_used == 7);

    std::vector<CurvePoint> expo;
    for (std::uint64_t n = 1; n <= 20; ++n)
        expo.push_back({(double)n, std::pow(2.0, -(double)n), 0.0});
    const auto ef = analysis::fit_exponential_rate(expo);
    CHECK(ef.value == doctest::Approx(kLog2).epsilon(1e-12));
    CHECK(ef.r_squared >= 1.0 - 1e-12);
    CHECK(ef.points_used == 13);  // min_n = 8 drops N < 8

    std::vector<CurvePoint> stretched;
    for (std::uint64_t n = 8; n <= 10000; n *= 3)
        stretched.push_back({(double)n, std::exp(-0.5 * std::pow((double)n, 0.2)), 0.0});
    const auto sf = analysis::fit_subexp_rate(stretched, 0.2);
    CHECK(sf.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sf.r_squared >= 1.0 - 1e-12);
}

TEST_CASE("weighted fits use inverse relative variance") {
    // points on an exact line with varying claimed precision still recover it
    std::vector<CurvePoint> curve;
    for (std::uint64_t n = 8; n <= 512; n *= 2) {
        const double p = 0.8 * std::pow((double)n, -0.5);
        curve.push_back({(double)n, p, p * (n % 3 ? 0.01 : 0.05)});
    }
    const auto fit = analysis::fit_polynomial_exponent(curve);
    CHECK(fit.value == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("filters: zero probabilities, small horizons, low counts") {
    std::vector<CurvePoint> curve;
    curve.push_back({2.0, 0.5, 0.0});    // below min_n
    curve.push_back({64.0, 0.0, 0.0});   // zero probability
    for (std::uint64_t n = 8; n <= 256; n *= 2)
        curve.push_back({(double)n, std::pow((double)n, -0.5), 0.0});
    analysis::FitDiagnostics diag;
    const auto fit = analysis::fit_polynomial_exponent(curve, {}, &diag);
    CHECK(diag.dropped_nonpositive == 1);
    CHECK(diag.dropped_small_n == 1);
    CHECK(fit.points_used == 6);
    CHECK(fit.value == doctest::Approx(0.5).epsilon(1e-12));

    // a noisy MC point with ~10 implied survivors is excluded
    std::vector<CurvePoint> noisy;
    for (std::uint64_t n = 8; n <= 128; n *= 2) {
        const double p = std::pow((double)n, -1.0);
        noisy.push_back({(double)n, p, p / std::sqrt(1e6 * p)});
    }
    const double p_tail = 1e-5;
    noisy.push_back({256.0, p_tail, p_tail / std::sqrt(10.0)});
    analysis::FitDiagnostics diag2;
    const auto fit2 = analysis::fit_exponential_rate(noisy, {}, &diag2);
    CHECK(diag2.dropped_low_count == 1);
    CHECK(fit2.points_used == 5);
}

TEST_CASE("fit preconditions") {
    std::vector<CurvePoint> two = {{8.0, 0.5, 0.0}, {16.0, 0.25, 0.0}};
    CHECK_THROWS_AS(analysis::fit_exponential_rate(two), std::invalid_argument);

    // three points spanning less than two octaves
    std::vector<CurvePoint> narrow = {{8.0, 0.5, 0.0}, {16.0, 0.4, 0.0}, {24.0, 0.3, 0.0}};
    CHECK_THROWS_AS(analysis::fit_polynomial_exponent(narrow), std::invalid_argument);
    CHECK_NOTHROW(analysis::fit_exponential_rate(narrow));

    std::vector<CurvePoint> fine = {{8.0, 0.5, 0.0}, {16.0, 0.4, 0.0}, {32.0, 0.3, 0.0}};
    CHECK_NOTHROW(analysis::fit_polynomial_exponent(fine));
    CHECK_THROWS_AS(analysis::fit_subexp_rate(fine, 1.5), std::invalid_argument);
}

TEST_CASE("c(x) and the named constants") {
    CHECK(analysis::c_of(analysis::beta0()) == doctest::Approx(kLog2).epsilon(1e-13));
    CHECK(analysis::c_of(2.0 * kLog2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(analysis::c_of(1e-8) > 1e7);
    CHECK_THROWS_AS(analysis::c_of(0.0), std::invalid_argument);
    CHECK_THROWS_AS(analysis::c_of(-2.0), std::invalid_argument);

    double prev = analysis::c_of(0.05);
    for (double x = 0.1; x <= 10.0; x += 0.05) {
        const double c = analysis::c_of(x);
        CHECK(c < prev);
        prev = c;
    }

    CHECK(std::abs(analysis::beta0() - 1.786) <= 5e-4);
    CHECK(analysis::beta0() ==
          doctest::Approx(2.0 * std::log(1.0 + 1.0 / kLog2)).epsilon(1e-15));
    CHECK(std::abs(analysis::beta1() - 0.472) <= 1e-3);
    CHECK(analysis::beta0() > 2.0 * analysis::beta1());

    // beta1 is the root of the branch-crossing equation
    const double b1 = analysis::beta1();
    const double rhs = kLog2 - std::log1p((2.0 / kPi) * std::asin(std::exp(-b1 / 2.0)));
    CHECK(std::abs(b1 / 2.0 - rhs) < 1e-8);
}

TEST_CASE("lambda bound report") {
    const auto r4 = analysis::lambda_bounds(4.0);
    CHECK(std::abs(r4.lower - 0.536617) < 1e-4);  // log 2 - c(4)
    CHECK(std::abs(r4.upper - 0.610274) < 1e-4);
    CHECK(r4.c_beta == doctest::Approx(analysis::c_of(4.0)).epsilon(1e-15));

    const auto r03 = analysis::lambda_bounds(0.3);  // m = 6
    CHECK(r03.lower == doctest::Approx((kLog2 - analysis::c_of(1.8)) / 6.0).epsilon(1e-13));
    CHECK(std::abs(r03.lower - 0.00132) < 5e-5);
    CHECK(r03.upper == doctest::Approx(0.15).epsilon(1e-14));

    for (double beta : linear_grid(0.05, 10.0, 100)) {
        const auto rep = analysis::lambda_bounds(beta);
        CHECK(rep.lower <= rep.upper);
        CHECK(rep.lower >= 0.0);
        CHECK(rep.beta0 > rep.beta1);
    }

    // upper bound is nondecreasing through the branch crossing at beta1
    double prev_upper = 0.0;
    for (double beta : linear_grid(0.05, 10.0, 200)) {
        const auto rep = analysis::lambda_bounds(beta);
        CHECK(rep.upper >= prev_upper - 1e-12);
        prev_upper = rep.upper;
    }
    const double b1 = analysis::beta1();
    CHECK(std::abs(analysis::lambda_bounds(b1 - 1e-9).upper -
                   analysis::lambda_bounds(b1 + 1e-9).upper) < 1e-8);
    // the arcsin branch stays strictly below log 2
    CHECK(analysis::lambda_bounds(10.0).upper < kLog2);
}

TEST_CASE("rademacher MC rate recovers log 2 for the exponential weight") {
    // one independent estimate per horizon so the joint slope error is the
    // plain weighted-least-squares propagation of the point errors
    model::WalkSpec spec;
    spec.weight = model::WeightFunction::exponential(kLog2);
    spec.dist = {model::IncrementDistribution::Kind::Rademacher};
    std::vector<CurvePoint> pts;
    for (std::uint64_t n = 8; n <= 14; ++n) {
        spec.horizon = n;
        const auto est = sim::simulate_survival(spec, 1000000, {900 + n, 64});
        pts.push_back({(double)n, est.p_hat, est.std_err});
    }
    const auto fit = analysis::fit_exponential_rate(pts);

    double sw = 0.0, sx = 0.0;
    for (const auto& pt : pts) {
        const double w = (pt.p / pt.std_err) * (pt.p / pt.std_err);
        sw += w;
        sx += w * pt.n;
    }
    const double xbar = sx / sw;
    double sxx = 0.0;
    for (const auto& pt : pts) {
        const double w = (pt.p / pt.std_err) * (pt.p / pt.std_err);
        sxx += w * (pt.n - xbar) * (pt.n - xbar);
    }
    const double joint_se = 1.0 / std::sqrt(sxx);
    CHECK(std::abs(fit.value - kLog2) <= 3.0 * joint_se);
}

TEST_CASE("exponent universality across increments at p = 1") {
    const auto horizons = dyadic_horizons(8, 512);
    std::vector<double> exponents;
    for (auto kind : {model::IncrementDistribution::Kind::Gaussian,
                      model::IncrementDistribution::Kind::Rademacher,
                      model::IncrementDistribution::Kind::Laplace,
                      model::IncrementDistribution::Kind::Uniform}) {
        model::WalkSpec spec;
        spec.weight = model::WeightFunction::polynomial(1.0);
        spec.dist = {kind};
        const auto curve = sim::survival_curve(spec, horizons, 4000000, {404, 64});
        std::vector<CurvePoint> pts;
        for (const auto& est : curve)
            pts.push_back({(double)est.horizon, est.p_hat, est.std_err});
        exponents.push_back(analysis::fit_polynomial_exponent(pts).value);
    }
    for (std::size_t a = 0; a < exponents.size(); ++a)
        for (std::size_t b = a + 1; b < exponents.size(); ++b)
            CHECK(std::abs(exponents[a] - exponents[b]) <= 0.1);
}
