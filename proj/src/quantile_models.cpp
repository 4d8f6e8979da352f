#include "medineq/quantile_models.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "medineq/errors.hpp"
#include "medineq/special_functions.hpp"

namespace medineq {

namespace {

constexpr Family kAllFamilies[] = {
    Family::Uniform,   Family::Exponential, Family::Gamma,
    Family::Weibull,   Family::Lognormal,   Family::LogCauchy,
    Family::ParetoII,  Family::ParetoIII,   Family::ParetoIV,
};

std::string normalize_token(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char ch : text) {
        if (ch == '-' || ch == '_' || ch == ' ') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

bool is_location(std::string_view name) { return name == "mu"; }

// (1 - p)^(-1/alpha) - 1 without cancellation for small p.
double pareto_core(double p, double alpha) {
    return std::expm1(-std::log1p(-p) / alpha);
}

}  // namespace

std::string_view family_name(Family family) {
    switch (family) {
        case Family::Uniform: return "Uniform";
        case Family::Exponential: return "Exponential";
        case Family::Gamma: return "Gamma";
        case Family::Weibull: return "Weibull";
        case Family::Lognormal: return "Lognormal";
        case Family::LogCauchy: return "LogCauchy";
        case Family::ParetoII: return "ParetoII";
        case Family::ParetoIII: return "ParetoIII";
        case Family::ParetoIV: return "ParetoIV";
    }
    return "?";
}

std::vector<std::string_view> family_parameters(Family family) {
    switch (family) {
        case Family::Uniform:
        case Family::Exponential: return {"theta"};
        case Family::Gamma: return {"theta", "alpha"};
        case Family::Weibull: return {"theta", "tau"};
        case Family::Lognormal:
        case Family::LogCauchy: return {"mu", "sigma"};
        case Family::ParetoII: return {"sigma", "alpha"};
        case Family::ParetoIII: return {"sigma", "gamma"};
        case Family::ParetoIV: return {"sigma", "alpha", "gamma"};
    }
    return {};
}

QuantileModel::QuantileModel(Family family, std::vector<Parameter> params)
    : family_(family), params_(std::move(params)) {
    switch (family_) {
        case Family::Uniform:
        case Family::Exponential: scale_ = parameter("theta"); break;
        case Family::Gamma:
            scale_ = parameter("theta");
            shape_ = parameter("alpha");
            break;
        case Family::Weibull:
            scale_ = parameter("theta");
            shape_ = parameter("tau");
            break;
        case Family::Lognormal:
        case Family::LogCauchy:
            location_ = parameter("mu");
            spread_ = parameter("sigma");
            break;
        case Family::ParetoII:
            scale_ = parameter("sigma");
            shape_ = parameter("alpha");
            break;
        case Family::ParetoIII:
            scale_ = parameter("sigma");
            power_ = parameter("gamma");
            break;
        case Family::ParetoIV:
            scale_ = parameter("sigma");
            shape_ = parameter("alpha");
            power_ = parameter("gamma");
            break;
    }
}

double QuantileModel::parameter(std::string_view name) const {
    for (const auto& p : params_) {
        if (p.name == name) return p.value;
    }
    throw ValidationError("model " + std::string(family_name(family_)) +
                          " has no parameter '" + std::string(name) + "'");
}

double QuantileModel::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << "quantile: probability " << p << " outside (0, 1)";
        throw ValidationError(msg.str());
    }
    switch (family_) {
        case Family::Uniform: return scale_ * p;
        case Family::Exponential: return -scale_ * std::log1p(-p);
        case Family::Gamma: return scale_ * inverse_regularized_gamma(shape_, p);
        case Family::Weibull: return scale_ * std::pow(-std::log1p(-p), 1.0 / shape_);
        case Family::Lognormal:
            return std::exp(location_ + spread_ * inverse_normal_cdf(p));
        case Family::LogCauchy:
            return std::exp(location_ + spread_ * std::tan(std::numbers::pi * (p - 0.5)));
        case Family::ParetoII: return scale_ * pareto_core(p, shape_);
        case Family::ParetoIII: return scale_ * std::pow(pareto_core(p, 1.0), power_);
        case Family::ParetoIV: return scale_ * std::pow(pareto_core(p, shape_), power_);
    }
    return 0.0;
}

std::string QuantileModel::label() const {
    std::ostringstream out;
    out << family_name(family_) << '(';
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (i) out << ", ";
        out << params_[i].name << '=' << params_[i].value;
    }
    out << ')';
    return out.str();
}

QuantileModel make_model(Family family, std::vector<Parameter> params) {
    const auto expected = family_parameters(family);
    const std::string fam(family_name(family));

    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& name = params[i].name;
        if (std::find(expected.begin(), expected.end(), name) == expected.end()) {
            throw ValidationError("unexpected parameter '" + name + "' for family " + fam);
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (params[j].name == name) {
                throw ValidationError("duplicate parameter '" + name + "' for family " + fam);
            }
        }
        const double v = params[i].value;
        if (!std::isfinite(v)) {
            throw ValidationError("parameter '" + name + "' must be finite");
        }
        if (!is_location(name) && !(v > 0.0)) {
            throw ValidationError("parameter '" + name + "' must be positive for family " + fam);
        }
    }
    for (auto name : expected) {
        auto it = std::find_if(params.begin(), params.end(),
                               [&](const Parameter& p) { return p.name == name; });
        if (it == params.end()) {
            throw ValidationError("missing parameter '" + std::string(name) + "' for family " +
                                  fam);
        }
    }
    return QuantileModel(family, std::move(params));
}

double quantile(const QuantileModel& model, double p) { return model.quantile(p); }

Family parse_family(std::string_view text) {
    const auto key = normalize_token(text);
    for (Family f : kAllFamilies) {
        if (normalize_token(family_name(f)) == key) return f;
    }
    throw ValidationError("unknown family '" + std::string(text) + "'");
}

QuantileModel parse_model_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    const auto family = parse_family(trim(spec.substr(0, colon)));

    std::vector<Parameter> params;
    if (colon != std::string_view::npos) {
        std::string_view rest = spec.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const auto item = trim(rest.substr(0, comma));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);

            const auto eq = item.find('=');
            if (eq == std::string_view::npos) {
                throw ValidationError("malformed parameter '" + std::string(item) +
                                      "' (expected name=value)");
            }
            const auto name = normalize_token(trim(item.substr(0, eq)));
            const auto value_text = trim(item.substr(eq + 1));
            double value = 0.0;
            const auto* end = value_text.data() + value_text.size();
            auto [ptr, ec] = std::from_chars(value_text.data(), end, value);
            if (ec != std::errc{} || ptr != end || value_text.empty()) {
                throw ValidationError("invalid value '" + std::string(value_text) +
                                      "' for parameter '" + name + "'");
            }
            params.push_back({name, value});
        }
    }
    return make_model(family, std::move(params));
}

}  // namespace medineq
