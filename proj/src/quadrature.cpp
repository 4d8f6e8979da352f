#include "medineq/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "medineq/errors.hpp"

namespace medineq {

void validate(const QuadratureConfig& config) {
    if (config.panels < 1) {
        throw ValidationError("quadrature: panels must be >= 1");
    }
    if (config.nodes < 2) {
        throw ValidationError("quadrature: nodes per panel must be >= 2");
    }
}

GaussLegendreRule gauss_legendre_rule(std::size_t n) {
    if (n < 1) {
        throw ValidationError("gauss_legendre_rule: order must be >= 1");
    }
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    // Roots are symmetric; find the upper half by Newton iteration on P_n.
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double derivative = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            derivative = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / derivative;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged root.
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        derivative = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);

        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& config) {
    validate(config);
    const auto rule = gauss_legendre_rule(config.nodes);
    const double width = (b - a) / static_cast<double>(config.panels);
    const double half = 0.5 * width;

    double total = 0.0;
    for (std::size_t panel = 0; panel < config.panels; ++panel) {
        const double mid = a + (static_cast<double>(panel) + 0.5) * width;
        double panel_sum = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            panel_sum += rule.weights[j] * f(mid + half * rule.nodes[j]);
        }
        total += panel_sum * half;
    }
    return total;
}

}  // namespace medineq
