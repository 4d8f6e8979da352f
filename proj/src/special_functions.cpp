#include "medineq/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "medineq/errors.hpp"

namespace medineq {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
constexpr int kMaxInversionIterations = 200;

void require_open_unit(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << what << ": probability " << p << " outside (0, 1)";
        throw ValidationError(msg.str());
    }
}

// Rational approximation for the lower half (p <= 1/2), relative error
// about 1e-9 before refinement.
double lower_half_normal_guess(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double tail = 0.02425;

    if (p < tail) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double lower_half_inverse_normal(double p) {
    double x = lower_half_normal_guess(p);
    if (x == 0.0) {
        return x;
    }
    // Halley step on Phi(x) - p.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    if (std::isfinite(u)) {
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double log_gamma_density(double alpha, double x) {
    return (alpha - 1.0) * std::log(x) - x - std::lgamma(alpha);
}

// Power series for P(alpha, x); converges quickly for x < alpha + 1.
double lower_gamma_series(double alpha, double x) {
    double term = 1.0 / alpha;
    double sum = term;
    double ap = alpha;
    for (int n = 0; n < 100000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEpsilon) {
            break;
        }
    }
    return sum * std::exp(alpha * std::log(x) - x - std::lgamma(alpha));
}

// Modified Lentz continued fraction for Q(alpha, x); used for x >= alpha + 1.
double upper_gamma_fraction(double alpha, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
    double b = x + 1.0 - alpha;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - alpha);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon) {
            break;
        }
    }
    return std::exp(alpha * std::log(x) - x - std::lgamma(alpha)) * h;
}

double initial_gamma_guess(double alpha, double p) {
    if (alpha > 1.0) {
        // Wilson-Hilferty.
        const double z = inverse_normal_cdf(p);
        const double s = 1.0 / (9.0 * alpha);
        const double w = 1.0 - s + z * std::sqrt(s);
        return std::max(1e-3 * alpha, alpha * w * w * w);
    }
    const double t = 1.0 - alpha * (0.253 + alpha * 0.12);
    if (p < t) {
        return std::pow(p / t, 1.0 / alpha);
    }
    return 1.0 - std::log1p(-(p - t) / (1.0 - t));
}

}  // namespace

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double inverse_normal_cdf(double p) {
    require_open_unit(p, "inverse_normal_cdf");
    if (p > 0.5) {
        return -lower_half_inverse_normal(1.0 - p);
    }
    return lower_half_inverse_normal(p);
}

double regularized_lower_gamma(double alpha, double x) {
    if (!(alpha > 0.0)) {
        throw ValidationError("regularized_lower_gamma: shape must be positive");
    }
    if (x <= 0.0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    if (x < alpha + 1.0) {
        return lower_gamma_series(alpha, x);
    }
    return 1.0 - upper_gamma_fraction(alpha, x);
}

double regularized_upper_gamma(double alpha, double x) {
    if (!(alpha > 0.0)) {
        throw ValidationError("regularized_upper_gamma: shape must be positive");
    }
    if (x <= 0.0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    if (x < alpha + 1.0) {
        return 1.0 - lower_gamma_series(alpha, x);
    }
    return upper_gamma_fraction(alpha, x);
}

double inverse_regularized_gamma(double alpha, double p) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ValidationError("inverse_regularized_gamma: shape must be positive and finite");
    }
    require_open_unit(p, "inverse_regularized_gamma");

    // residual(x) is increasing in x and vanishes at the root.
    const bool upper = p > 0.5;
    const double q = 1.0 - p;
    auto residual = [&](double x) {
        return upper ? q - regularized_upper_gamma(alpha, x)
                     : regularized_lower_gamma(alpha, x) - p;
    };

    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double x = initial_gamma_guess(alpha, p);
    if (!(x > 0.0) || !std::isfinite(x)) {
        x = alpha;
    }

    for (int iter = 0; iter < kMaxInversionIterations; ++iter) {
        const double f = residual(x);
        if (f == 0.0) {
            return x;
        }
        if (f > 0.0) {
            hi = x;
        } else {
            lo = x;
        }

        // Halley correction on top of the Newton step.
        const double density = std::exp(log_gamma_density(alpha, x));
        double next = x;
        bool usable = density > 0.0 && std::isfinite(density);
        if (usable) {
            const double t = f / density;
            double curvature = t * ((alpha - 1.0) / x - 1.0);
            if (std::abs(curvature) > 1.0) {
                curvature = 0.0;  // plain Newton far from the root
            }
            next = x - t / (1.0 - 0.5 * curvature);
            usable = std::isfinite(next) && next > lo && next < hi;
        }
        if (!usable) {
            next = std::isinf(hi) ? 2.0 * x : 0.5 * (lo + hi);
        }

        const double step = std::abs(next - x);
        x = next;
        const bool bracketed = std::isfinite(hi) && (hi - lo) <= 4.0 * kEpsilon * hi;
        if (step <= 4.0 * kEpsilon * x || bracketed) {
            if (std::abs(residual(x)) <= 1e-10) {
                return x;
            }
        }
    }
    std::ostringstream msg;
    msg << "inverse_regularized_gamma: no convergence after " << kMaxInversionIterations
        << " iterations (alpha=" << alpha << ", p=" << p << ")";
    throw ComputationError(msg.str());
}

}  // namespace medineq
