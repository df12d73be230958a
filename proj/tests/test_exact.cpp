#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "wrw/analysis.hpp"
#include "wrw/exact.hpp"
#include "wrw/grids.hpp"
#include "wrw/model.hpp"
#include "wrw/rng.hpp"
#include "wrw/simulate.hpp"

using namespace wrw;
using model::TimeChange;

namespace {

const double kPi = 3.14159265358979323846;
const double kLog2 = std::log(2.0);

// orthant oracle for three Brownian times t1 < t2 < t3:
// 1/8 + (arcsin r12 + arcsin r13 + arcsin r23) / (4 pi), r_ij = sqrt(t_i/t_j)
double trivariate_orthant(double t1, double t2, double t3) {
    const double r12 = std::sqrt(t1 / t2), r13 = std::sqrt(t1 / t3), r23 = std::sqrt(t2 / t3);
    return 0.125 + (std::asin(r12) + std::asin(r13) + std::asin(r23)) / (4.0 * kPi);
}

// ballot oracle: for exchangeable continuous symmetric increments (kappa(n)=n),
// P(B_1 <= 0, ..., B_N <= 0) = C(2N, N) / 4^N
double ballot_survival(int n) {
    double value = 1.0;
    for (int k = 1; k <= n; ++k)
        value *= static_cast<double>(n + k) / (4.0 * static_cast<double>(k));
    return value;
}

}  // namespace

TEST_CASE("pair orthant closed form") {
    CHECK(exact::pair_orthant_prob(1.0, 2.0) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(exact::pair_orthant_prob(1e-12, 1.0) == doctest::Approx(0.25).epsilon(1e-5));
    CHECK(exact::pair_orthant_prob(1.0, 1.0 + 1e-12) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK_THROWS_AS(exact::pair_orthant_prob(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(exact::pair_orthant_prob(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("OU supremum closed form") {
    CHECK(exact::ou_survival_continuous(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(exact::ou_survival_continuous(2.0 * kLog2) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(exact::ou_survival_continuous(80.0) < 2e-17 * 1e3);
    CHECK_THROWS_AS(exact::ou_survival_continuous(-0.1), std::invalid_argument);
}

TEST_CASE("Brownian supremum tail and its Gaussian bound") {
    CHECK(exact::bm_sup_tail(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(exact::bm_sup_tail(1.0) == doctest::Approx(0.31731050786291415).epsilon(1e-12));
    for (double u : {0.0, 0.5, 1.0, 2.0, 3.0, 5.0})
        CHECK(exact::bm_sup_tail(u) <= std::exp(-u * u / 2.0) * (1.0 + 1e-15));
    CHECK_THROWS_AS(exact::bm_sup_tail(-1.0), std::invalid_argument);
}

TEST_CASE("exponential-case bound formulas") {
    CHECK(exact::exp_case_lower_bound(3.0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(exact::exp_case_lower_bound(2.0 * kLog2, 1) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    for (std::uint64_t n : {1ull, 5ull, 20ull})
        for (double beta : {0.5, 1.0, 4.0})
            CHECK(exact::exp_case_lower_bound(beta, n) >=
                  0.5 * std::ldexp(1.0, -static_cast<int>(n)));

    const double c4 = std::exp(-2.0) / (1.0 - std::exp(-2.0));
    CHECK(c4 == doctest::Approx(0.15651764274966565).epsilon(1e-14));
    CHECK(exact::exp_case_upper_bound(4.0, 10) ==
          doctest::Approx(0.5 * std::exp(-10.0 * (kLog2 - c4))).epsilon(1e-14));
    CHECK(exact::exp_case_upper_bound(4.0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    // beta = 0.3 puts m = ceil(beta0/0.3) = 6; the bound needs N > m
    CHECK_THROWS_AS(exact::exp_case_upper_bound(0.3, 6), std::invalid_argument);
    CHECK(exact::exp_case_upper_bound(0.3, 7) ==
          doctest::Approx(std::exp(-((kLog2 - analysis::c_of(1.8)) / 6.0) * 7.0 -
                                   analysis::c_of(1.8)))
              .epsilon(1e-14));
}

TEST_CASE("propagation reproduces the small-horizon orthant oracles") {
    const auto clock = TimeChange::power(1.0);
    CHECK(exact::discrete_gaussian_survival(clock, 1, 0.0) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(exact::discrete_gaussian_survival(clock, 2, 0.0) ==
          doctest::Approx(0.375).epsilon(1e-9));
    CHECK(exact::discrete_gaussian_survival(clock, 3, 0.0) ==
          doctest::Approx(0.3125).epsilon(1e-9));
    CHECK(std::abs(exact::discrete_gaussian_survival(clock, 3, 0.0) -
                   trivariate_orthant(1.0, 2.0, 3.0)) < 1e-9);

    // non-uniform spacings against the trivariate oracle
    const auto fast = TimeChange::power(3.0);
    CHECK(std::abs(exact::discrete_gaussian_survival(fast, 3, 0.0) -
                   trivariate_orthant(1.0, 8.0, 27.0)) < 1e-9);
    const auto slow = TimeChange::subexp(0.7, 0.4);
    CHECK(std::abs(exact::discrete_gaussian_survival(slow, 3, 0.0) -
                   trivariate_orthant(slow.kappa(1), slow.kappa(2), slow.kappa(3))) < 1e-9);
}

TEST_CASE("propagation matches the ballot oracle for kappa(n) = n") {
    const auto clock = TimeChange::power(1.0);
    const auto horizons = range_horizons(1, 12);
    const auto curve = exact::exact_survival_curve(clock, horizons, 0.0, {});
    for (const auto& pt : curve)
        CHECK(pt.p ==
              doctest::Approx(ballot_survival(static_cast<int>(pt.horizon))).epsilon(1e-11));

    // deep-horizon version through lgamma: validates thousands of propagation
    // steps including the thin boundary layers
    const double n = 4096.0;
    const double log_oracle =
        std::lgamma(2.0 * n + 1.0) - 2.0 * std::lgamma(n + 1.0) - n * std::log(4.0);
    const double p = exact::discrete_gaussian_survival(clock, 4096, 0.0);
    CHECK(std::abs(std::log(p) - log_oracle) < 1e-7);
}

TEST_CASE("survival is nonincreasing in the horizon") {
    const TimeChange clocks[] = {TimeChange::power(2.0), TimeChange::exponential(1.0),
                                 TimeChange::subexp(1.0, 0.2), TimeChange::piecewise_exp(2.0)};
    for (const auto& clock : clocks) {
        const auto horizons = range_horizons(1, 40);
        const auto curve = exact::exact_survival_curve(clock, horizons, 0.0, {});
        for (std::size_t i = 1; i < curve.size(); ++i)
            CHECK(curve[i].p <= curve[i - 1].p * (1.0 + 1e-12));
    }
}

TEST_CASE("universal 2^-N floor at barrier 0") {
    const auto horizons = range_horizons(1, 30);
    const auto curve =
        exact::exact_survival_curve(TimeChange::exponential(4.0), horizons, 0.0, {});
    for (const auto& pt : curve)
        CHECK(pt.p >= std::ldexp(1.0, -static_cast<int>(pt.horizon)));
}

TEST_CASE("discrete sampling dominates the continuous OU supremum") {
    // the discrete points are a subset of the continuous window, so
    // p(N) >= P(sup_{t <= beta (N-1)} U_t <= 0) = arcsin(e^{-beta(N-1)/2})/pi
    for (double beta : {0.5, 2.0}) {
        const auto clock = TimeChange::exponential(beta);
        for (std::uint64_t n : {5ull, 20ull, 50ull}) {
            const double p = exact::discrete_gaussian_survival(clock, n, 0.0);
            CHECK(p >= exact::ou_survival_continuous(beta * static_cast<double>(n - 1)));
        }
    }
}

TEST_CASE("exponential-case sandwich across both engines") {
    // kappa(n) = e^{beta n} over n = 1..N carries N points, i.e. the paper's
    // p(N-1); the lemma bounds therefore apply at index N-1
    for (double beta : {2.5, 4.0}) {
        const auto clock = TimeChange::exponential(beta);
        const auto horizons = range_horizons(2, 12);
        const auto curve = exact::exact_survival_curve(clock, horizons, 0.0, {});
        for (const auto& pt : curve) {
            const auto idx = pt.horizon - 1;
            CHECK(pt.p >= exact::exp_case_lower_bound(beta, idx) * (1.0 - 1e-9));
            CHECK(pt.p <= exact::exp_case_upper_bound(beta, idx) * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("piecewise-exponential remark at small scale") {
    const auto clock = TimeChange::piecewise_exp(2.0);
    for (std::uint64_t n : {10ull, 11ull, 50ull, 100ull, 1000ull}) {
        const double p = exact::discrete_gaussian_survival(clock, n, 0.0);
        CHECK(p >= std::pow(static_cast<double>(n), -kLog2));
    }
    // within a block the probability is flat: kappa ties are skipped
    CHECK(exact::discrete_gaussian_survival(clock, 9, 0.0) ==
          doctest::Approx(exact::discrete_gaussian_survival(clock, 20, 0.0)).epsilon(1e-12));
}

TEST_CASE("subexponential clock decays at rate nu/2 in N^alpha") {
    const auto clock = TimeChange::subexp(1.0, 0.2);
    auto horizons = dyadic_horizons(8, 8192);
    horizons.push_back(10000);
    const auto curve = exact::exact_survival_curve(clock, horizons, 0.0, {});
    std::vector<analysis::CurvePoint> pts;
    for (const auto& pt : curve)
        pts.push_back({static_cast<double>(pt.horizon), pt.p, 0.0});
    const auto fit = analysis::fit_subexp_rate(pts, 0.2);
    CHECK(fit.value >= 0.40);
    CHECK(fit.value <= 0.60);

    // pointwise consistency with the exp(-(nu/2) N^alpha) lower bound: the
    // normalized ratio never decays below its small-N level
    const double r0 =
        curve.front().p * std::exp(0.5 * std::pow((double)curve.front().horizon, 0.2));
    for (const auto& pt : curve) {
        const double r = pt.p * std::exp(0.5 * std::pow((double)pt.horizon, 0.2));
        CHECK(r >= 0.5 * r0);
    }
}

TEST_CASE("barrier shifts the level, not the exponent") {
    const auto clock = TimeChange::power(2.0);
    const auto horizons = dyadic_horizons(32, 16384);
    analysis::FitResult fits[2];
    int slot = 0;
    for (double barrier : {0.0, 1.0}) {
        const auto curve = exact::exact_survival_curve(clock, horizons, barrier, {});
        std::vector<analysis::CurvePoint> pts;
        for (const auto& pt : curve)
            pts.push_back({static_cast<double>(pt.horizon), pt.p, 0.0});
        fits[slot++] = analysis::fit_polynomial_exponent(pts);
    }
    CHECK(std::abs(fits[0].value - fits[1].value) < 0.05);
}

TEST_CASE("negative barrier lowers the level") {
    const auto clock = TimeChange::power(1.0);
    const double at_zero = exact::discrete_gaussian_survival(clock, 8, 0.0);
    const double below = exact::discrete_gaussian_survival(clock, 8, -1.0);
    const double above = exact::discrete_gaussian_survival(clock, 8, 1.0);
    CHECK(below < at_zero);
    CHECK(at_zero < above);
    CHECK(below > 0.0);
}

TEST_CASE("grid refinement stability") {
    const exact::ExactOptions fine{16.0, 1600};
    for (double q : {1.0, 3.0}) {
        const auto clock = TimeChange::power(q);
        const double a = exact::discrete_gaussian_survival(clock, 4096, 0.0);
        const double b = exact::discrete_gaussian_survival(clock, 4096, 0.0, fine);
        CHECK(std::abs(a - b) < 1e-8);
    }
    const auto exp_clock = TimeChange::exponential(2.0);
    const double a = exact::discrete_gaussian_survival(exp_clock, 40, 0.0);
    const double b = exact::discrete_gaussian_survival(exp_clock, 40, 0.0, fine);
    CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("agreement with Monte Carlo on randomized configurations") {
    sim::StreamRng rng(2026, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const double p = 0.3 + 1.2 * rng.next_open01();
        const std::uint64_t horizon = 5 + (rng.next_u64() % 56);
        const double barrier = (trial % 3 == 0) ? 0.0 : (rng.next_open01() - 0.5);

        model::WalkSpec spec;
        spec.weight = model::WeightFunction::polynomial(p);
        spec.dist = {model::IncrementDistribution::Kind::Gaussian};
        spec.barrier = barrier;
        spec.horizon = horizon;

        const double exact_p = exact::discrete_gaussian_survival(
            TimeChange::from_sigma(spec.weight), horizon, barrier);
        const auto est =
            sim::simulate_survival(spec, 400000, {1000 + static_cast<std::uint64_t>(trial), 64});
        CHECK(std::abs(est.p_hat - exact_p) <= 3.0 * est.std_err);
    }
}

TEST_CASE("engine validation") {
    CHECK_THROWS_AS(exact::discrete_gaussian_survival(TimeChange::power(1.0), 0, 0.0),
                    std::invalid_argument);
    const std::vector<std::uint64_t> empty;
    CHECK_THROWS_AS(exact::exact_survival_curve(TimeChange::power(1.0), empty, 0.0, {}),
                    std::invalid_argument);
    const std::uint64_t bad[] = {3, 2};
    CHECK_THROWS_AS(exact::exact_survival_curve(TimeChange::power(1.0), bad, 0.0, {}),
                    std::invalid_argument);
    // barrier too deep for the truncation window
    CHECK_THROWS_AS(exact::discrete_gaussian_survival(TimeChange::power(1.0), 3, 30.0),
                    std::invalid_argument);
    // prefix-sum clock of exponential weights overflows past ~350/(2 beta)
    const auto hot = TimeChange::from_sigma(model::WeightFunction::exponential(2.0));
    CHECK_THROWS_AS(exact::discrete_gaussian_survival(hot, 200, 0.0), std::invalid_argument);
    CHECK_NOTHROW(exact::discrete_gaussian_survival(hot, 40, 0.0));
}
