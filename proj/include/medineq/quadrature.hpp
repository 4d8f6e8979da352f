#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace medineq {

/// Composite Gauss-Legendre settings: `panels` equal subintervals, each
/// integrated with a `nodes`-point rule. All nodes are interior, so the
/// integrand is never evaluated at the endpoints.
struct QuadratureConfig {
    std::size_t panels = 512;
    std::size_t nodes = 8;
};

void validate(const QuadratureConfig& config);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendreRule gauss_legendre_rule(std::size_t n);

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& config = {});

}  // namespace medineq
