#include "wrw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wrw::exact {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::pair<std::vector<double>, std::vector<double>> compute_gauss_legendre(int n) {
    // Newton iteration on the Legendre recurrence, roots filled in symmetric pairs.
    std::vector<double> x(n), w(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    return {std::move(x), std::move(w)};
}

std::pair<std::vector<double>, std::vector<double>> compute_gauss_hermite_prob(int n) {
    // Physicists' Hermite-Gauss roots by Newton with the standard initial
    // guesses, then rescaled to the probabilists' convention
    // (z = sqrt(2) x, weights normalized to sum 1).
    std::vector<double> x(n), w(n);
    const int m = (n + 1) / 2;
    const double pim4 = 0.7511255444649424828587030047762276930510;  // pi^{-1/4}
    double z = 0.0, z_prev = 0.0, z_prev2 = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * z_prev2;
        else if (i == 3)
            z = 1.91 * z - 0.91 * z_prev2;
        else
            z = 2.0 * z - z_prev2;
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-14) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
        z_prev2 = z_prev;
        z_prev = z;
    }
    // convert: nodes ascending, E f(Z) = sum (w_i / sqrt(pi)) f(sqrt(2) x_i)
    std::vector<double> nodes(n), weights(n);
    const double inv_sqrt_pi = 0.5641895835477562869480794515607725858;
    for (int i = 0; i < n; ++i) {
        nodes[i] = std::sqrt(2.0) * x[n - 1 - i];
        weights[i] = w[n - 1 - i] * inv_sqrt_pi;
    }
    return {std::move(nodes), std::move(weights)};
}

std::vector<double> compute_barycentric_weights(const std::vector<double>& nodes) {
    const std::size_t n = nodes.size();
    std::vector<double> lam(n, 1.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) lam[j] /= (nodes[j] - nodes[k]);
    return lam;
}

std::mutex gl_mutex, gh_mutex, bary_mutex;
std::map<int, std::pair<std::vector<double>, std::vector<double>>> gl_cache, gh_cache;
std::map<int, std::vector<double>> bary_cache;

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order) {
    if (order < 1 || order > 128) throw std::invalid_argument("gauss_legendre order out of range");
    std::lock_guard<std::mutex> lock(gl_mutex);
    auto it = gl_cache.find(order);
    if (it == gl_cache.end()) it = gl_cache.emplace(order, compute_gauss_legendre(order)).first;
    return it->second;
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_hermite_prob(int order) {
    if (order < 1 || order > 128)
        throw std::invalid_argument("gauss_hermite_prob order out of range");
    std::lock_guard<std::mutex> lock(gh_mutex);
    auto it = gh_cache.find(order);
    if (it == gh_cache.end())
        it = gh_cache.emplace(order, compute_gauss_hermite_prob(order)).first;
    return it->second;
}

namespace {

const std::vector<double>& barycentric_for(int order) {
    std::lock_guard<std::mutex> lock(bary_mutex);
    auto it = bary_cache.find(order);
    if (it == bary_cache.end())
        it = bary_cache.emplace(order, compute_barycentric_weights(gauss_legendre(order).first))
                 .first;
    return it->second;
}

}  // namespace

QuadratureRule make_graded_rule(double lo, double hi, int target_nodes, double finest_width) {
    if (!(hi > lo)) throw std::invalid_argument("quadrature domain must have hi > lo");
    if (target_nodes < 16) throw std::invalid_argument("quadrature rule needs >= 16 nodes");

    QuadratureRule rule;
    rule.lo = lo;
    rule.hi = hi;
    rule.points_per_panel = 8;

    const double length = hi - lo;
    const int target_panels = std::max(4, target_nodes / rule.points_per_panel);
    const double width_max = 2.0 * length / target_panels;
    double width = std::clamp(finest_width, 1e-9, width_max);

    // panel widths from the hi end downward, geometric until capped
    std::vector<double> widths;
    double covered = 0.0;
    while (covered < length * (1.0 - 1e-14)) {
        const double w = std::min({width, width_max, length - covered});
        widths.push_back(w);
        covered += w;
        width *= 1.6;
    }

    rule.edges.resize(widths.size() + 1);
    rule.edges.back() = hi;
    double edge = hi;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        edge -= widths[i];
        rule.edges[widths.size() - 1 - i] = edge;
    }
    rule.edges.front() = lo;  // kill accumulated rounding at the far end

    const auto& [t, tw] = gauss_legendre(rule.points_per_panel);
    rule.nodes.reserve(widths.size() * t.size());
    rule.weights.reserve(widths.size() * t.size());
    for (std::size_t p = 0; p + 1 < rule.edges.size(); ++p) {
        const double a = rule.edges[p], b = rule.edges[p + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t j = 0; j < t.size(); ++j) {
            rule.nodes.push_back(mid + half * t[j]);
            rule.weights.push_back(half * tw[j]);
        }
    }
    return rule;
}

double grid_mass(const QuadratureRule& rule, std::span<const double> values) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double term = rule.weights[i] * values[i] - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    return sum;
}

PanelInterpolant::PanelInterpolant(const QuadratureRule& rule, std::span<const double> values)
    : rule_(&rule),
      values_(values),
      ref_nodes_(&gauss_legendre(rule.points_per_panel).first),
      bary_weights_(&barycentric_for(rule.points_per_panel)) {
    if (values.size() != rule.nodes.size())
        throw std::invalid_argument("interpolant values do not match rule nodes");
}

double PanelInterpolant::operator()(double x) const {
    if (x <= rule_->lo || x >= rule_->hi) return 0.0;
    const auto& edges = rule_->edges;
    std::size_t panel = std::upper_bound(edges.begin(), edges.end(), x) - edges.begin();
    if (panel == 0) return 0.0;
    --panel;
    if (panel + 1 >= edges.size()) panel = edges.size() - 2;

    const double a = edges[panel], b = edges[panel + 1];
    const double t = (2.0 * x - a - b) / (b - a);
    const std::size_t ppp = ref_nodes_->size();
    const double* vals = values_.data() + panel * ppp;

    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < ppp; ++j) {
        const double d = t - (*ref_nodes_)[j];
        if (std::abs(d) < 1e-14) return vals[j];
        const double c = (*bary_weights_)[j] / d;
        num += c * vals[j];
        den += c;
    }
    return num / den;
}

}  // namespace wrw::exact
