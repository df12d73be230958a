#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wrw::model {

/// Deterministic weight sequence sigma(n) > 0, n >= 1.
class WeightFunction {
public:
    enum class Kind { Polynomial, Exponential, Constant, Table };

    static WeightFunction polynomial(double p);      // sigma(n) = n^p, p > 0
    static WeightFunction exponential(double beta);  // sigma(n) = e^{beta n}, beta > 0
    static WeightFunction constant();                // sigma(n) = 1
    static WeightFunction table(std::vector<double> values);

    Kind kind() const { return kind_; }
    double p() const { return p_; }
    double beta() const { return beta_; }
    const std::vector<double>& values() const { return values_; }

    /// sigma(n) for n >= 1. Table kind throws std::out_of_range past its length.
    double sigma(std::uint64_t n) const;

private:
    WeightFunction() = default;
    Kind kind_ = Kind::Constant;
    double p_ = 0.0;
    double beta_ = 0.0;
    std::vector<double> values_;
};

/// Variance clock kappa(n) of the walk. Immutable after construction and
/// safe to share across threads; the from_sigma prefix-sum cache is guarded
/// internally and shared between copies.
class TimeChange {
public:
    enum class Kind { FromSigma, Power, Subexp, Exponential, PiecewiseExp };

    static TimeChange from_sigma(WeightFunction w);     // kappa(n) = sum sigma(k)^2
    static TimeChange power(double q);                  // kappa(n) = n^q
    static TimeChange subexp(double nu, double alpha);  // kappa(n) = exp(nu n^alpha)
    static TimeChange exponential(double beta);         // kappa(n) = e^{beta n}
    static TimeChange piecewise_exp(double q);          // kappa(n) = e^{qk}, e^k <= n < e^{k+1}

    Kind kind() const { return kind_; }
    double q() const { return q_; }
    double nu() const { return nu_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    double kappa(std::uint64_t n) const;  // n >= 1
    /// log kappa(n), exact for the parametric kinds (no overflow for large
    /// exponential arguments); falls back to log(kappa(n)) for from_sigma.
    double log_kappa(std::uint64_t n) const;

    /// floor(log n) nudged against the e^k block boundaries.
    static int block_index(std::uint64_t n);

private:
    TimeChange() = default;
    struct PrefixCache;

    Kind kind_ = Kind::Power;
    WeightFunction sigma_ = WeightFunction::constant();
    double q_ = 1.0, nu_ = 0.0, alpha_ = 0.0, beta_ = 0.0;
    std::shared_ptr<PrefixCache> cache_;
};

/// Law of the i.i.d. increments, normalized to mean 0 and variance 1.
struct IncrementDistribution {
    enum class Kind { Gaussian, Rademacher, Laplace, Uniform };
    Kind kind = Kind::Gaussian;

    bool symmetric() const { return true; }
    bool finite_support() const { return kind == Kind::Rademacher; }
    bool has_exponential_moment() const { return true; }

    /// Atoms (value, probability) for finite-support kinds; empty otherwise.
    std::vector<std::pair<double, double>> atoms() const;

    std::string_view name() const;
    static IncrementDistribution parse(std::string_view name);
};

/// One survival-probability problem instance: P(sup_{n<=horizon} Z_n <= barrier).
struct WalkSpec {
    WeightFunction weight = WeightFunction::constant();
    IncrementDistribution dist;
    double barrier = 0.0;
    std::uint64_t horizon = 1;
};

struct Ar1Params {
    double rho;          // e^{-beta/2}
    double noise_sigma;  // sqrt(1 - e^{-beta})
};

/// AR(1) representation parameters of the stationary discrete OU chain.
Ar1Params ar1_params(double beta);

/// CLI specification strings: "poly:p=<f>", "exp:beta=<f>", "const", "table:@<file>".
WeightFunction parse_weight(const std::string& spec);

/// "power:q=<f>", "subexp:nu=<f>,alpha=<f>", "exp:beta=<f>", "pwexp:q=<f>",
/// or "sigma:<weight-spec>" for the prefix-sum clock of a weight function.
TimeChange parse_time_change(const std::string& spec);

}  // namespace wrw::model
