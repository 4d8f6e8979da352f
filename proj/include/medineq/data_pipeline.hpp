#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medineq/empirical_indices.hpp"
#include "medineq/equality_curves.hpp"

namespace medineq {

/// One household (analysis unit) from a survey extract. Capital income is
/// the sum of rental income, capital-investment income and private pensions,
/// already aggregated to household level by the extract.
struct HouseholdRecord {
    std::string group;
    double rental_income = 0.0;
    double capital_investment_income = 0.0;
    double private_pension_income = 0.0;
    int adults = 1;
    int children_under_14 = 0;
    std::string currency;
};

/// Modified OECD equivalence scale.
struct OecdWeights {
    double head = 1.0;
    double other_adult = 0.5;
    double child = 0.3;
};

/// Input CSV column names for each record field.
struct ColumnMapping {
    std::string group = "group";
    std::string rental_income = "rental_income";
    std::string capital_investment_income = "capital_investment_income";
    std::string private_pension_income = "private_pension_income";
    std::string adults = "adults";
    std::string children_under_14 = "children_under_14";
    std::string currency = "currency";
};

struct PipelineConfig {
    ColumnMapping columns;
    /// Multiplier converting one unit of a currency into reference units.
    std::map<std::string, double> exchange_rates;
    /// Currency that converts at rate 1 without an explicit entry.
    std::string reference_currency;
    OecdWeights weights;
    bool positive_income_filter = true;
};

void validate(const PipelineConfig& cfg);

/// Reads an INI-style configuration:
///
///   [columns]         field = csv column name (any subset)
///   [exchange_rates]  CODE = multiplier to the reference currency
///   [oecd_weights]    head / other_adult / child
///   [options]         reference_currency, positive_income_filter
PipelineConfig parse_pipeline_config(std::istream& in);
PipelineConfig load_pipeline_config(const std::string& path);

/// Parses a header-first CSV using `columns`. Throws ValidationError naming
/// the missing column or the offending line.
std::vector<HouseholdRecord> read_household_csv(std::istream& in, const ColumnMapping& columns);

double equivalence_scale(const HouseholdRecord& r, const OecdWeights& weights);

/// Capital income converted to reference currency, divided by the household's
/// equivalence scale.
double equivalized_income(const HouseholdRecord& r, const PipelineConfig& cfg);

struct Cohort {
    std::optional<Sample> sample;  // empty when no record passed the filter
    std::size_t n_total = 0;
    std::string diagnostic;
};

/// Groups records by label; n_T counts every record of the group, the
/// sample holds the strictly positive equivalized incomes (all of them when
/// the filter is off).
std::map<std::string, Cohort> build_cohorts(const std::vector<HouseholdRecord>& records,
                                            const PipelineConfig& cfg);

struct CohortRow {
    std::string label;
    std::size_t n_total = 0;
    std::size_t n_positive = 0;
    std::optional<IndexReport> report;  // empty if indices are undefined
    std::string diagnostic;
    std::array<std::optional<int>, 3> rank;  // by Psi_1..Psi_3 when requested
};

struct CohortTable {
    std::vector<Strategy> ranked_by;
    std::vector<CohortRow> rows;  // sorted by label
};

/// One report per group plus ordinal ranks (1 = lowest index) for each
/// requested strategy. Exactly equal values are ordered by label. Groups
/// whose indices fail are kept with a diagnostic and left unranked.
CohortTable cohort_reports(const std::map<std::string, Cohort>& cohorts,
                           const std::vector<Strategy>& ranked_by);

/// Report CSV plus one rank column per requested strategy; undefined
/// values print as NA.
void write_cohort_csv(std::ostream& out, const CohortTable& table, int precision = 4);
void write_cohort_json(std::ostream& out, const CohortTable& table);

}  // namespace medineq
