#include "wrw/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wrw/analysis.hpp"

namespace wrw::exact {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438187;
}  // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

double pair_orthant_prob(double s, double t) {
    if (!(s > 0.0) || !(t > s)) throw std::invalid_argument("pair_orthant_prob needs 0 < s < t");
    return 0.25 + std::atan(std::sqrt(s / (t - s))) / (2.0 * kPi);
}

double ou_survival_continuous(double T) {
    if (!(T >= 0.0)) throw std::invalid_argument("ou_survival_continuous needs T >= 0");
    return std::asin(std::exp(-T / 2.0)) / kPi;
}

double bm_sup_tail(double u) {
    if (!(u >= 0.0)) throw std::invalid_argument("bm_sup_tail needs u >= 0");
    return std::erfc(u * 0.70710678118654752440);
}

double exp_case_lower_bound(double beta, std::uint64_t n) {
    if (!(beta > 0.0)) throw std::invalid_argument("exp_case_lower_bound needs beta > 0");
    const double factor = 0.5 + std::asin(std::exp(-beta / 2.0)) / kPi;
    return 0.5 * std::pow(factor, static_cast<double>(n));
}

double exp_case_upper_bound(double beta, std::uint64_t n) {
    if (!(beta > 0.0)) throw std::invalid_argument("exp_case_upper_bound needs beta > 0");
    const double log2 = 0.69314718055994530941723212145818;
    const double b0 = analysis::beta0();
    if (beta > b0)
        return 0.5 * std::exp(-(log2 - analysis::c_of(beta)) * static_cast<double>(n));
    const double m = std::ceil(b0 / beta);
    if (!(static_cast<double>(n) > m))
        throw std::invalid_argument("exp_case_upper_bound with beta <= beta0 needs N > ceil(beta0/beta)");
    const double cbm = analysis::c_of(beta * m);
    return std::exp(-((log2 - cbm) / m) * static_cast<double>(n) - cbm);
}

namespace {

// One propagation step in barrier-relative self-similar coordinates: the
// domain is always [-L, 0] and the kernel is Normal(rho y, s^2) restricted
// to the negative half-line, rho^2 + s^2 = 1.
//
// Wide kernels (s >= kDirectSwitch) integrate directly against the global
// rule. Narrow kernels use the smoothing form
//     (Tf)(u) = (1/rho) Integral phi(z) f((u - s z)/rho) dz
// with Gauss-Hermite quadrature for interior targets; targets within reach
// of the boundary kink at z = u/s integrate the one-sided smooth piece with
// local Gauss-Legendre panels instead.
constexpr double kDirectSwitch = 0.35;
constexpr double kBandSigmas = 10.0;

class Propagator {
public:
    Propagator(QuadratureRule rule) : rule_(std::move(rule)), scratch_(rule_.size()) {}

    const QuadratureRule& rule() const { return rule_; }

    void step(std::vector<double>& f, double rho, double s) {
        if (s >= kDirectSwitch)
            step_direct(f, rho, s);
        else
            step_narrow(f, rho, s);
        for (double& v : scratch_)
            if (v < 0.0) v = 0.0;
        f.swap(scratch_);
    }

private:
    void step_direct(const std::vector<double>& f, double rho, double s) {
        if (rho == cached_rho_) {
            if (!matrix_built_) build_matrix(rho, s);
            const std::size_t n = rule_.size();
            for (std::size_t i = 0; i < n; ++i) {
                const double* row = matrix_.data() + i * n;
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += row[j] * f[j];
                scratch_[i] = acc;
            }
            return;
        }
        cached_rho_ = rho;
        matrix_built_ = false;
        const auto& nodes = rule_.nodes;
        const auto& weights = rule_.weights;
        const double inv_s = 1.0 / s;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double u = nodes[i];
            const double ylo = (u - kBandSigmas * s) / rho;
            const double yhi = (u + kBandSigmas * s) / rho;
            const auto jlo = std::lower_bound(nodes.begin(), nodes.end(), ylo) - nodes.begin();
            const auto jhi = std::upper_bound(nodes.begin(), nodes.end(), yhi) - nodes.begin();
            double acc = 0.0;
            for (auto j = jlo; j < jhi; ++j) {
                const double t = (u - rho * nodes[j]) * inv_s;
                acc += weights[j] * f[j] * std::exp(-0.5 * t * t);
            }
            scratch_[i] = acc * kInvSqrt2Pi * inv_s;
        }
    }

    void build_matrix(double rho, double s) {
        const auto& nodes = rule_.nodes;
        const auto& weights = rule_.weights;
        const std::size_t n = nodes.size();
        matrix_.assign(n * n, 0.0);
        const double inv_s = 1.0 / s;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = nodes[i];
            double* row = matrix_.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                const double t = (u - rho * nodes[j]) * inv_s;
                row[j] = weights[j] * kInvSqrt2Pi * inv_s * std::exp(-0.5 * t * t);
            }
        }
        matrix_built_ = true;
    }

    void step_narrow(const std::vector<double>& f, double rho, double s) {
        const PanelInterpolant interp(rule_, f);
        const auto& [ghz, ghw] = gauss_hermite_prob(24);
        const double z_reach = ghz.back() + 0.75;
        const double inv_rho = 1.0 / rho;
        const auto& nodes = rule_.nodes;

        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double u = nodes[i];
            if (u <= -z_reach * s) {
                double acc = 0.0;
                for (std::size_t k = 0; k < ghz.size(); ++k)
                    acc += ghw[k] * interp((u - s * ghz[k]) * inv_rho);
                scratch_[i] = acc * inv_rho;
            } else {
                scratch_[i] = boundary_target(interp, u, rho, s);
            }
        }
    }

    // Integrates phi(z) f((u - s z)/rho) over z >= u/s (the argument is
    // negative there); the integrand is smooth on that side of the kink.
    double boundary_target(const PanelInterpolant& interp, double u, double rho, double s) const {
        const double z0 = u / s;
        const double z1 = std::max(z0 + 16.0, 9.0);
        const auto& [glt, glw] = gauss_legendre(12);
        const int panels = static_cast<int>(std::ceil((z1 - z0) / 1.5));
        const double width = (z1 - z0) / panels;
        const double inv_rho = 1.0 / rho;
        double acc = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double a = z0 + p * width;
            const double mid = a + 0.5 * width, half = 0.5 * width;
            for (std::size_t j = 0; j < glt.size(); ++j) {
                const double z = mid + half * glt[j];
                acc += half * glw[j] * norm_pdf(z) * interp((u - s * z) * inv_rho);
            }
        }
        return acc * inv_rho;
    }

    QuadratureRule rule_;
    std::vector<double> scratch_;
    std::vector<double> matrix_;
    double cached_rho_ = -1.0;
    bool matrix_built_ = false;
};

}  // namespace

std::vector<ExactPoint> exact_survival_curve(const model::TimeChange& tc,
                                             std::span<const std::uint64_t> horizons,
                                             double barrier, const ExactOptions& opts) {
    if (horizons.empty()) throw std::invalid_argument("exact_survival_curve needs horizons");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] == 0) throw std::invalid_argument("horizons must be >= 1");
        if (i && horizons[i] <= horizons[i - 1])
            throw std::invalid_argument("horizons must be strictly increasing");
    }
    if (!(opts.trunc_L > 0.0)) throw std::invalid_argument("trunc_L must be positive");

    const std::uint64_t max_n = horizons.back();

    // Step widths s_n fix how thin the boundary layer of the conditioned
    // density gets; grade the mesh so the finest panels resolve it.
    double min_s2 = 1.0;
    double prev_log = tc.log_kappa(1);
    if (!std::isfinite(prev_log))
        throw std::invalid_argument("kappa(1) is not finite");
    for (std::uint64_t n = 2; n <= max_n; ++n) {
        const double cur_log = tc.log_kappa(n);
        if (!std::isfinite(cur_log))
            throw std::invalid_argument(
                "kappa overflows the double range over this horizon; use a parametric "
                "time-change kind evaluated in log space");
        const double dlog = cur_log - prev_log;
        if (dlog < -1e-12)
            throw std::invalid_argument("time change must be nondecreasing");
        if (dlog > 0.0) min_s2 = std::min(min_s2, -std::expm1(-dlog));
        prev_log = cur_log;
    }
    const double finest =
        std::min(0.01, 0.25 * std::sqrt(min_s2)) * (800.0 / static_cast<double>(opts.nodes));

    Propagator prop(make_graded_rule(-opts.trunc_L, 0.0, opts.nodes, finest));
    const auto& rule = prop.rule();

    const double kappa1 = tc.kappa(1);
    const double c1 = barrier / std::sqrt(kappa1);
    if (std::abs(c1) + 8.0 > opts.trunc_L)
        throw std::invalid_argument(
            "trunc_L too small for this barrier; increase it past |c/sqrt(kappa(1))| + 8");

    std::vector<double> f(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) f[i] = norm_pdf(rule.nodes[i] + c1);
    double mass = grid_mass(rule, f);
    double log_mass = std::log(mass);
    for (double& v : f) v /= mass;

    std::vector<ExactPoint> out;
    out.reserve(horizons.size());
    std::size_t next = 0;
    if (horizons[next] == 1) out.push_back({1, std::exp(log_mass)}), ++next;

    prev_log = tc.log_kappa(1);
    for (std::uint64_t n = 2; n <= max_n && next < horizons.size(); ++n) {
        const double cur_log = tc.log_kappa(n);
        const double dlog = std::max(0.0, cur_log - prev_log);
        prev_log = cur_log;
        if (dlog > 0.0) {
            const double rho = std::exp(-0.5 * dlog);
            const double s = std::sqrt(-std::expm1(-dlog));
            prop.step(f, rho, s);
            const double ratio = grid_mass(rule, f);
            if (!(ratio > 0.0)) {
                log_mass = -std::numeric_limits<double>::infinity();
            } else {
                log_mass += std::log(ratio);
                for (double& v : f) v /= ratio;
            }
        }
        if (horizons[next] == n) out.push_back({n, std::exp(log_mass)}), ++next;
    }
    return out;
}

double discrete_gaussian_survival(const model::TimeChange& tc, std::uint64_t horizon,
                                  double barrier, const ExactOptions& opts) {
    if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
    const std::uint64_t hs[1] = {horizon};
    return exact_survival_curve(tc, hs, barrier, opts).front().p;
}

}  // namespace wrw::exact
