#include <cmath>
#include <vector>

#include "doctest.h"
#include "wrw/quadrature.hpp"

using namespace wrw::exact;

TEST_CASE("gauss-legendre reference rules") {
    for (int order : {4, 8, 12}) {
        const auto& [x, w] = gauss_legendre(order);
        REQUIRE(x.size() == static_cast<std::size_t>(order));
        double sum = 0.0;
        for (double wi : w) sum += wi;
        CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
        // exact for polynomials up to degree 2*order - 1
        for (int k = 0; k + 1 <= 2 * order - 1; k += 2) {
            double acc = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * std::pow(x[i], k);
            CHECK(acc == doctest::Approx(2.0 / (k + 1)).epsilon(1e-12));
        }
        for (std::size_t i = 1; i < x.size(); ++i) CHECK(x[i] > x[i - 1]);
    }
}

TEST_CASE("probabilists gauss-hermite matches normal moments") {
    const auto& [z, w] = gauss_hermite_prob(24);
    double m0 = 0.0, m2 = 0.0, m4 = 0.0, m6 = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        m0 += w[i];
        m2 += w[i] * z[i] * z[i];
        m4 += w[i] * std::pow(z[i], 4);
        m6 += w[i] * std::pow(z[i], 6);
    }
    CHECK(m0 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m6 == doctest::Approx(15.0).epsilon(1e-12));
    // E cos(Z) = e^{-1/2}
    double mc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) mc += w[i] * std::cos(z[i]);
    CHECK(mc == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
}

TEST_CASE("graded rule invariants") {
    const auto rule = make_graded_rule(-12.0, 0.0, 800, 1e-3);
    CHECK(rule.edges.front() == -12.0);
    CHECK(rule.edges.back() == 0.0);
    for (std::size_t i = 1; i < rule.nodes.size(); ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    CHECK(std::abs(sum - rule.length()) < 1e-12);
    CHECK(rule.nodes.front() > rule.lo);
    CHECK(rule.nodes.back() < rule.hi);
    // finest panel near the hi end resolves the requested width
    const double last_width = rule.edges.back() - rule.edges[rule.edges.size() - 2];
    CHECK(last_width <= 1e-3 * 1.0001);

    CHECK_THROWS(make_graded_rule(0.0, 0.0, 800, 1e-3));
    CHECK_THROWS(make_graded_rule(-1.0, 0.0, 8, 1e-3));
}

TEST_CASE("rule integrates smooth functions to near machine precision") {
    const auto rule = make_graded_rule(-12.0, 0.0, 800, 1e-3);
    std::vector<double> vals(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) vals[i] = std::exp(rule.nodes[i]);
    // integral of e^x over [-12, 0] = 1 - e^{-12}
    CHECK(grid_mass(rule, vals) == doctest::Approx(1.0 - std::exp(-12.0)).epsilon(1e-14));
}

TEST_CASE("panel interpolation of a smooth density") {
    const auto rule = make_graded_rule(-12.0, 0.0, 640, 1e-2);
    auto f = [](double x) { return std::exp(-0.5 * (x + 1.0) * (x + 1.0)) * std::cos(0.7 * x); };
    std::vector<double> vals(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) vals[i] = f(rule.nodes[i]);
    const PanelInterpolant interp(rule, vals);
    double worst = 0.0;
    for (int k = 0; k <= 2000; ++k) {
        const double x = -12.0 + 12.0 * (k + 0.31) / 2001.0;
        if (x >= 0.0) break;
        worst = std::max(worst, std::abs(interp(x) - f(x)));
    }
    CHECK(worst < 1e-9);
    CHECK(interp(0.5) == 0.0);
    CHECK(interp(-13.0) == 0.0);
    // hitting a node exactly returns the stored value
    CHECK(interp(rule.nodes[100]) == vals[100]);
}
