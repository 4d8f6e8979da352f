#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace medineq {

enum class Family {
    Uniform,
    Exponential,
    Gamma,
    Weibull,
    Lognormal,
    LogCauchy,
    ParetoII,
    ParetoIII,
    ParetoIV,
};

std::string_view family_name(Family family);

/// Parameter names a family accepts, in canonical order.
///
///   Uniform      theta               Q(p) = theta p
///   Exponential  theta               Q(p) = -theta log(1 - p)
///   Gamma        theta, alpha        Q(p) = theta Q0(p), Q0 the standard gamma quantile
///   Weibull      theta, tau          Q(p) = theta (-log(1 - p))^(1/tau)
///   Lognormal    mu, sigma           Q(p) = exp(mu + sigma Phi^-1(p))
///   LogCauchy    mu, sigma           Q(p) = exp(mu + sigma tan(pi (p - 1/2)))
///   ParetoII     sigma, alpha        Q(p) = sigma ((1 - p)^(-1/alpha) - 1)
///   ParetoIII    sigma, gamma        Q(p) = sigma ((1 - p)^(-1) - 1)^gamma
///   ParetoIV     sigma, alpha, gamma Q(p) = sigma ((1 - p)^(-1/alpha) - 1)^gamma
std::vector<std::string_view> family_parameters(Family family);

struct Parameter {
    std::string name;
    double value;
};

/// A validated parametric income distribution, represented by its quantile
/// function. Parameters are kept exactly as supplied (no reparametrization).
class QuantileModel {
public:
    Family family() const { return family_; }
    const std::vector<Parameter>& parameters() const { return params_; }

    /// Value of a named parameter; throws ValidationError if absent.
    double parameter(std::string_view name) const;

    /// Q(p) for p in the open interval (0, 1).
    double quantile(double p) const;

    /// e.g. "ParetoIV(sigma=1, alpha=2, gamma=2)"
    std::string label() const;

private:
    friend QuantileModel make_model(Family, std::vector<Parameter>);
    QuantileModel(Family family, std::vector<Parameter> params);

    Family family_;
    std::vector<Parameter> params_;
    // Resolved numeric slots so evaluation does not search by name.
    double scale_ = 1.0;     // theta or sigma (Pareto)
    double location_ = 0.0;  // mu
    double spread_ = 1.0;    // sigma (Lognormal, LogCauchy)
    double shape_ = 1.0;     // alpha or tau
    double power_ = 1.0;     // gamma (Pareto III/IV)
};

/// Validates the parameter set for a family: every required name present
/// exactly once, no extras, scale and shape strictly positive and finite,
/// log-locations finite.
QuantileModel make_model(Family family, std::vector<Parameter> params);

/// Free-function form of QuantileModel::quantile.
double quantile(const QuantileModel& model, double p);

/// Family name lookup: case-insensitive, '-' and '_' ignored
/// ("paretoIV", "Pareto-IV" and "PARETO_IV" all match).
Family parse_family(std::string_view text);

/// Parses "family:name=value,name=value", e.g. "paretoIV:sigma=1,alpha=2,gamma=2".
/// Parameter names are case-insensitive. Throws ValidationError with a
/// one-line message on any malformed input.
QuantileModel parse_model_spec(std::string_view spec);

}  // namespace medineq
