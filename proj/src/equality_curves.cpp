#include "medineq/equality_curves.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "medineq/errors.hpp"

namespace medineq {

Strategy strategy_from_number(int k) {
    if (k < 1 || k > 3) {
        throw ValidationError("strategy must be 1, 2 or 3 (got " + std::to_string(k) + ")");
    }
    return static_cast<Strategy>(k);
}

double psi(const QuantileModel& model, Strategy k, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << "psi: probability " << p << " outside (0, 1)";
        throw ValidationError(msg.str());
    }
    const double half = 0.5 * p;
    double upper = 0.5;
    switch (k) {
        case Strategy::PoorVsAll: upper = 0.5; break;
        case Strategy::PoorVsNonpoor: upper = 0.5 + half; break;
        case Strategy::PoorVsRich: upper = 1.0 - half; break;
    }
    const double numerator = model.quantile(half);
    if (numerator == 0.0) {
        return 0.0;
    }
    const double denominator = model.quantile(upper);
    if (!(denominator > 0.0)) {
        std::ostringstream msg;
        msg << "psi: Q(" << upper << ") = 0 for " << model.label();
        throw ComputationError(msg.str());
    }
    return numerator / denominator;
}

namespace {

// Beyond this distance from 0 or 1 the half-probabilities round away; since
// 0 <= psi <= 1 the dropped mass is at most twice this.
constexpr double kTailCut = 1e-15;

}  // namespace

double psi_index(const QuantileModel& model, Strategy k, const QuadratureConfig& quad) {
    // p = t^3 / (t^3 + (1-t)^3) flattens the endpoint singularities (sqrt and
    // log type) so the composite rule converges at its full order.
    auto integrand = [&](double t) {
        const double a = t * t * t;
        const double u = 1.0 - t;
        const double b = u * u * u;
        const double s = a + b;
        const double p = a / s;
        if (!(p > kTailCut && p < 1.0 - kTailCut)) {
            return 0.0;
        }
        const double jacobian = 3.0 * t * t * u * u / (s * s);
        return psi(model, k, p) * jacobian;
    };
    return 1.0 - integrate(integrand, 0.0, 1.0, quad);
}

CurveSamples curve_samples(const QuantileModel& model, Strategy k, std::size_t n_points) {
    if (n_points < 2) {
        throw ValidationError("curve_samples: need at least 2 points");
    }
    CurveSamples curve{k, {}, psi_index(model, k), model.label()};
    curve.points.reserve(n_points);
    const double denom = static_cast<double>(n_points + 1);
    for (std::size_t i = 1; i <= n_points; ++i) {
        const double p = static_cast<double>(i) / denom;
        curve.points.emplace_back(p, psi(model, k, p));
    }
    return curve;
}

void write_curve_csv(std::ostream& out, const CurveSamples& curve, int precision) {
    std::ostringstream index;
    index.setf(std::ios::fixed);
    index.precision(precision);
    index << curve.index_value;

    out << "# strategy=" << strategy_number(curve.strategy) << " index=" << index.str()
        << " model=" << curve.model_label << '\n';
    out << "p,psi\n";
    // Grid points keep enough digits to re-integrate the curve.
    std::ostringstream row;
    row.precision(12);
    for (const auto& [p, value] : curve.points) {
        row.str({});
        row << p << ',' << value << '\n';
        out << row.str();
    }
}

void write_curve_json(std::ostream& out, const CurveSamples& curve) {
    nlohmann::json doc;
    doc["strategy"] = strategy_number(curve.strategy);
    doc["model"] = curve.model_label;
    doc["index"] = curve.index_value;
    auto points = nlohmann::json::array();
    for (const auto& [p, value] : curve.points) {
        points.push_back({p, value});
    }
    doc["points"] = std::move(points);
    out << doc.dump() << '\n';
}

std::string RankedEntry::rank_text() const {
    if (rank_low == rank_high) return std::to_string(rank_low);
    return std::to_string(rank_low) + "-" + std::to_string(rank_high);
}

std::vector<RankedEntry> rank_values(const std::vector<std::pair<std::string, double>>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a].second < values[b].second;
    });

    std::vector<RankedEntry> ranked(values.size());
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        const double anchor = values[order[start]].second;
        while (end < order.size() && values[order[end]].second - anchor <= kRankTieTolerance) {
            ++end;
        }
        for (std::size_t j = start; j < end; ++j) {
            const auto& [label, value] = values[order[j]];
            ranked[order[j]] = RankedEntry{label, value, static_cast<int>(start) + 1,
                                           static_cast<int>(end)};
        }
        start = end;
    }
    return ranked;
}

std::vector<RankedEntry> rank_models(const std::vector<LabeledModel>& entries, Strategy k,
                                     const QuadratureConfig& quad) {
    if (entries.empty()) {
        throw ValidationError("rank_models: no entries");
    }
    std::vector<std::pair<std::string, double>> values;
    values.reserve(entries.size());
    for (const auto& e : entries) {
        values.emplace_back(e.label, psi_index(e.model, k, quad));
    }
    return rank_values(values);
}

std::vector<LabeledModel> catalog_models() {
    auto m = [](Family f, std::vector<Parameter> params) { return make_model(f, std::move(params)); };
    return {
        {"Uniform(0, theta)", m(Family::Uniform, {{"theta", 1.0}})},
        {"Exponential(0, theta)", m(Family::Exponential, {{"theta", 1.0}})},
        {"Gamma(theta, alpha=0.5)", m(Family::Gamma, {{"theta", 1.0}, {"alpha", 0.5}})},
        {"Gamma(theta, alpha=2)", m(Family::Gamma, {{"theta", 1.0}, {"alpha", 2.0}})},
        {"Weibull(theta, tau=0.5)", m(Family::Weibull, {{"theta", 1.0}, {"tau", 0.5}})},
        {"Weibull(theta, tau=2)", m(Family::Weibull, {{"theta", 1.0}, {"tau", 2.0}})},
        {"Lognormal(mu, sigma=1)", m(Family::Lognormal, {{"mu", 0.0}, {"sigma", 1.0}})},
        {"Lognormal(mu, sigma=2)", m(Family::Lognormal, {{"mu", 0.0}, {"sigma", 2.0}})},
        {"Log-Cauchy(mu, sigma=1)", m(Family::LogCauchy, {{"mu", 0.0}, {"sigma", 1.0}})},
        {"Log-Cauchy(mu, sigma=2)", m(Family::LogCauchy, {{"mu", 0.0}, {"sigma", 2.0}})},
        {"Pareto-II(sigma, alpha=1)", m(Family::ParetoII, {{"sigma", 1.0}, {"alpha", 1.0}})},
        {"Pareto-II(sigma, alpha=2)", m(Family::ParetoII, {{"sigma", 1.0}, {"alpha", 2.0}})},
        {"Pareto-III(sigma, gamma=0.5)", m(Family::ParetoIII, {{"sigma", 1.0}, {"gamma", 0.5}})},
        {"Pareto-III(sigma, gamma=2)", m(Family::ParetoIII, {{"sigma", 1.0}, {"gamma", 2.0}})},
        {"Pareto-IV(sigma, alpha=0.5, gamma=0.5)",
         m(Family::ParetoIV, {{"sigma", 1.0}, {"alpha", 0.5}, {"gamma", 0.5}})},
        {"Pareto-IV(sigma, alpha=2, gamma=2)",
         m(Family::ParetoIV, {{"sigma", 1.0}, {"alpha", 2.0}, {"gamma", 2.0}})},
    };
}

std::vector<CatalogRow> catalog_table(const QuadratureConfig& quad) {
    const auto models = catalog_models();
    std::vector<CatalogRow> rows(models.size());
    for (std::size_t i = 0; i < models.size(); ++i) {
        rows[i].label = models[i].label;
    }
    for (Strategy k : kAllStrategies) {
        const int col = strategy_number(k) - 1;
        std::vector<std::pair<std::string, double>> values;
        for (std::size_t i = 0; i < models.size(); ++i) {
            rows[i].index[col] = psi_index(models[i].model, k, quad);
            values.emplace_back(models[i].label, rows[i].index[col]);
        }
        const auto ranked = rank_values(values);
        for (std::size_t i = 0; i < models.size(); ++i) {
            rows[i].rank[col] = ranked[i].rank_text();
        }
    }
    return rows;
}

}  // namespace medineq
