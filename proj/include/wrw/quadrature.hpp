#pragma once

#include <span>
#include <utility>
#include <vector>

namespace wrw::exact {

/// Composite Gauss-Legendre rule on [lo, hi]. Panels are graded
/// geometrically toward hi so that densities with a thin layer at the
/// restriction boundary stay resolved.
struct QuadratureRule {
    double lo = 0.0;
    double hi = 0.0;
    int points_per_panel = 8;
    std::vector<double> edges;    // ascending panel edges, size = panel count + 1
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;  // positive, sum = hi - lo

    double length() const { return hi - lo; }
    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes/weights on [-1,1]; cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order);

/// Probabilists' Gauss-Hermite rule: sum w_i f(z_i) approximates E f(Z) for
/// standard normal Z; weights sum to 1. Cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_hermite_prob(int order);

QuadratureRule make_graded_rule(double lo, double hi, int target_nodes, double finest_width);

double grid_mass(const QuadratureRule& rule, std::span<const double> values);

/// Panel-local barycentric Lagrange evaluation of grid values; 0 outside
/// [lo, hi]. Holds references only; the rule and values must outlive it.
class PanelInterpolant {
public:
    PanelInterpolant(const QuadratureRule& rule, std::span<const double> values);
    double operator()(double x) const;

private:
    const QuadratureRule* rule_;
    std::span<const double> values_;
    const std::vector<double>* ref_nodes_;
    const std::vector<double>* bary_weights_;
};

/// Sub-probability density carried by a quadrature rule.
struct DensityGrid {
    QuadratureRule rule;
    std::vector<double> values;
    double mass = 0.0;
};

}  // namespace wrw::exact
