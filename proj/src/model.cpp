#include "wrw/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace wrw::model {

WeightFunction WeightFunction::polynomial(double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("polynomial weight requires p > 0");
    WeightFunction w;
    w.kind_ = Kind::Polynomial;
    w.p_ = p;
    return w;
}

WeightFunction WeightFunction::exponential(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("exponential weight requires beta > 0");
    WeightFunction w;
    w.kind_ = Kind::Exponential;
    w.beta_ = beta;
    return w;
}

WeightFunction WeightFunction::constant() {
    WeightFunction w;
    w.kind_ = Kind::Constant;
    return w;
}

WeightFunction WeightFunction::table(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("table weight requires at least one value");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("table weight values must be positive and finite");
    WeightFunction w;
    w.kind_ = Kind::Table;
    w.values_ = std::move(values);
    return w;
}

double WeightFunction::sigma(std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("sigma(n) requires n >= 1");
    switch (kind_) {
        case Kind::Polynomial: return std::pow(static_cast<double>(n), p_);
        case Kind::Exponential: return std::exp(beta_ * static_cast<double>(n));
        case Kind::Constant: return 1.0;
        case Kind::Table:
            if (n > values_.size())
                throw std::out_of_range("table weight index past end of table");
            return values_[n - 1];
    }
    throw std::logic_error("unreachable weight kind");
}

struct TimeChange::PrefixCache {
    std::mutex mutex;
    std::vector<double> prefix;  // prefix[i] = kappa(i + 1)
    double sum = 0.0;
    double comp = 0.0;  // Kahan carry
};

TimeChange TimeChange::from_sigma(WeightFunction w) {
    TimeChange t;
    t.kind_ = Kind::FromSigma;
    t.sigma_ = std::move(w);
    t.cache_ = std::make_shared<PrefixCache>();
    return t;
}

TimeChange TimeChange::power(double q) {
    if (!(q > 0.0) || !std::isfinite(q))
        throw std::invalid_argument("power time change requires q > 0");
    TimeChange t;
    t.kind_ = Kind::Power;
    t.q_ = q;
    return t;
}

TimeChange TimeChange::subexp(double nu, double alpha) {
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw std::invalid_argument("subexp time change requires nu > 0");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("subexp time change requires alpha in (0,1)");
    TimeChange t;
    t.kind_ = Kind::Subexp;
    t.nu_ = nu;
    t.alpha_ = alpha;
    return t;
}

TimeChange TimeChange::exponential(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("exponential time change requires beta > 0");
    TimeChange t;
    t.kind_ = Kind::Exponential;
    t.beta_ = beta;
    return t;
}

TimeChange TimeChange::piecewise_exp(double q) {
    if (!(q > 0.0) || !std::isfinite(q))
        throw std::invalid_argument("piecewise_exp time change requires q > 0");
    TimeChange t;
    t.kind_ = Kind::PiecewiseExp;
    t.q_ = q;
    return t;
}

int TimeChange::block_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("block_index requires n >= 1");
    // e^k is irrational for k >= 1, so the comparisons below are sharp; the
    // extended-precision nudge guards against logl() landing on the wrong
    // side of an integer for n adjacent to a block boundary.
    int k = static_cast<int>(std::floor(static_cast<double>(
        logl(static_cast<long double>(n)))));
    if (k < 0) k = 0;
    while (k > 0 && expl(static_cast<long double>(k)) > static_cast<long double>(n)) --k;
    while (expl(static_cast<long double>(k + 1)) <= static_cast<long double>(n)) ++k;
    return k;
}

double TimeChange::kappa(std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("kappa(n) requires n >= 1");
    switch (kind_) {
        case Kind::Power:
            return std::pow(static_cast<double>(n), q_);
        case Kind::Subexp:
            return std::exp(nu_ * std::pow(static_cast<double>(n), alpha_));
        case Kind::Exponential:
            return std::exp(beta_ * static_cast<double>(n));
        case Kind::PiecewiseExp:
            // blocks are indexed from k = 1: the sampled times are exactly
            // {e^{qk}, k >= 1}, with n < e^2 mapped to the first block
            return std::exp(q_ * std::max(1, block_index(n)));
        case Kind::FromSigma: {
            std::lock_guard<std::mutex> lock(cache_->mutex);
            auto& c = *cache_;
            while (c.prefix.size() < n) {
                const double s = sigma_.sigma(c.prefix.size() + 1);
                const double term = s * s - c.comp;
                const double next = c.sum + term;
                c.comp = (next - c.sum) - term;
                c.sum = next;
                c.prefix.push_back(c.sum);
            }
            return c.prefix[n - 1];
        }
    }
    throw std::logic_error("unreachable time change kind");
}

double TimeChange::log_kappa(std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("log_kappa(n) requires n >= 1");
    switch (kind_) {
        case Kind::Power: return q_ * std::log(static_cast<double>(n));
        case Kind::Subexp: return nu_ * std::pow(static_cast<double>(n), alpha_);
        case Kind::Exponential: return beta_ * static_cast<double>(n);
        case Kind::PiecewiseExp: return q_ * std::max(1, block_index(n));
        case Kind::FromSigma: return std::log(kappa(n));
    }
    throw std::logic_error("unreachable time change kind");
}

std::vector<std::pair<double, double>> IncrementDistribution::atoms() const {
    if (kind == Kind::Rademacher) return {{-1.0, 0.5}, {1.0, 0.5}};
    return {};
}

std::string_view IncrementDistribution::name() const {
    switch (kind) {
        case Kind::Gaussian: return "gaussian";
        case Kind::Rademacher: return "rademacher";
        case Kind::Laplace: return "laplace";
        case Kind::Uniform: return "uniform";
    }
    return "?";
}

IncrementDistribution IncrementDistribution::parse(std::string_view name) {
    if (name == "gaussian") return {Kind::Gaussian};
    if (name == "rademacher") return {Kind::Rademacher};
    if (name == "laplace") return {Kind::Laplace};
    if (name == "uniform") return {Kind::Uniform};
    throw std::invalid_argument("unknown increment distribution: " + std::string(name));
}

Ar1Params ar1_params(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("ar1_params requires beta > 0");
    // rho^2 + noise_sigma^2 = 1 exactly in real arithmetic
    return {std::exp(-beta / 2.0), std::sqrt(-std::expm1(-beta))};
}

namespace {

double parse_value(const std::string& spec, const std::string& key, std::size_t pos) {
    const std::string want = key + "=";
    if (spec.compare(pos, want.size(), want) != 0)
        throw std::invalid_argument("expected '" + want + "' in spec string: " + spec);
    std::size_t start = pos + want.size();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(spec.substr(start), &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric value in spec string: " + spec);
    }
    std::size_t end = start + used;
    if (end != spec.size() && spec[end] != ',')
        throw std::invalid_argument("trailing garbage in spec string: " + spec);
    return v;
}

std::vector<double> read_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open weight table file: " + path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double v = 0.0;
        if (!(ss >> v))
            throw std::invalid_argument("bad line in weight table file " + path + ": " + line);
        values.push_back(v);
    }
    return values;
}

}  // namespace

WeightFunction parse_weight(const std::string& spec) {
    if (spec == "const") return WeightFunction::constant();
    if (spec.rfind("poly:", 0) == 0)
        return WeightFunction::polynomial(parse_value(spec, "p", 5));
    if (spec.rfind("exp:", 0) == 0)
        return WeightFunction::exponential(parse_value(spec, "beta", 4));
    if (spec.rfind("table:@", 0) == 0)
        return WeightFunction::table(read_table_file(spec.substr(7)));
    throw std::invalid_argument("unknown weight spec: " + spec);
}

TimeChange parse_time_change(const std::string& spec) {
    if (spec.rfind("power:", 0) == 0)
        return TimeChange::power(parse_value(spec, "q", 6));
    if (spec.rfind("subexp:", 0) == 0) {
        double nu = parse_value(spec, "nu", 7);
        std::size_t comma = spec.find(',', 7);
        if (comma == std::string::npos)
            throw std::invalid_argument("subexp spec needs nu and alpha: " + spec);
        double alpha = parse_value(spec, "alpha", comma + 1);
        return TimeChange::subexp(nu, alpha);
    }
    if (spec.rfind("exp:", 0) == 0)
        return TimeChange::exponential(parse_value(spec, "beta", 4));
    if (spec.rfind("pwexp:", 0) == 0)
        return TimeChange::piecewise_exp(parse_value(spec, "q", 6));
    if (spec.rfind("sigma:", 0) == 0)
        return TimeChange::from_sigma(parse_weight(spec.substr(6)));
    throw std::invalid_argument("unknown time change spec: " + spec);
}

}  // namespace wrw::model
