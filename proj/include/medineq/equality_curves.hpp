#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "medineq/quadrature.hpp"
#include "medineq/quantile_models.hpp"

namespace medineq {

/// Which median the median income of the poorest p*100% is compared with.
enum class Strategy : int {
    PoorVsAll = 1,      // psi_1(p) = Q(p/2) / Q(1/2)
    PoorVsNonpoor = 2,  // psi_2(p) = Q(p/2) / Q(1/2 + p/2)
    PoorVsRich = 3,     // psi_3(p) = Q(p/2) / Q(1 - p/2)
};

constexpr std::array<Strategy, 3> kAllStrategies = {Strategy::PoorVsAll, Strategy::PoorVsNonpoor,
                                                    Strategy::PoorVsRich};

constexpr int strategy_number(Strategy k) { return static_cast<int>(k); }

/// Maps 1, 2, 3 to a Strategy; anything else is a ValidationError.
Strategy strategy_from_number(int k);

/// Equality curve psi_k(p) for 0 < p < 1. A zero numerator quantile yields
/// 0; a zero denominator quantile is a ComputationError.
double psi(const QuantileModel& model, Strategy k, double p);

/// Inequality index Psi_k = 1 - integral_0^1 psi_k(p) dp.
double psi_index(const QuantileModel& model, Strategy k, const QuadratureConfig& quad = {});

struct CurveSamples {
    Strategy strategy;
    std::vector<std::pair<double, double>> points;  // (p, psi_k(p)), p increasing
    double index_value;
    std::string model_label;
};

/// Samples psi_k at p = i / (n_points + 1), i = 1..n_points.
CurveSamples curve_samples(const QuantileModel& model, Strategy k, std::size_t n_points);

/// CSV with a leading "# strategy=k index=<value> model=<label>" line and a
/// "p,psi" header.
void write_curve_csv(std::ostream& out, const CurveSamples& curve, int precision = 4);
void write_curve_json(std::ostream& out, const CurveSamples& curve);

struct LabeledModel {
    std::string label;
    QuantileModel model;
};

struct RankedEntry {
    std::string label;
    double index_value;
    int rank_low;
    int rank_high;  // equal to rank_low unless tied

    /// "3" or "3-4".
    std::string rank_text() const;
};

/// Index values closer than this share a rank range.
inline constexpr double kRankTieTolerance = 1e-4;

/// Ranks entries by Psi_k ascending (rank 1 = least inequality). Entries
/// within kRankTieTolerance of the first member of a run share the rank
/// range of that run. Output keeps the input order.
std::vector<RankedEntry> rank_models(const std::vector<LabeledModel>& entries, Strategy k,
                                     const QuadratureConfig& quad = {});

/// Same ranking rule applied to precomputed index values.
std::vector<RankedEntry> rank_values(const std::vector<std::pair<std::string, double>>& values);

/// The sixteen parametrized distributions of the reference catalog, in
/// display order.
std::vector<LabeledModel> catalog_models();

struct CatalogRow {
    std::string label;
    std::array<double, 3> index;
    std::array<std::string, 3> rank;
};

/// Psi_1..Psi_3 and their rank columns for every catalog model.
std::vector<CatalogRow> catalog_table(const QuadratureConfig& quad = {});

}  // namespace medineq
