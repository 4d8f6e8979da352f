#include "medineq/data_pipeline.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "medineq/errors.hpp"

namespace medineq {
namespace {

const std::string kData = MEDINEQ_TEST_DATA_DIR;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<HouseholdRecord> read_fixture(const std::string& name, const PipelineConfig& cfg) {
    std::ifstream in(kData + "/" + name);
    return read_household_csv(in, cfg.columns);
}

PipelineConfig euro_config() {
    PipelineConfig cfg;
    cfg.exchange_rates = {{"EUR", 1.0}, {"GBP", 1.15}};
    cfg.reference_currency = "EUR";
    return cfg;
}

TEST(EquivalenceScale, ModifiedOecdWeights) {
    const OecdWeights w;
    EXPECT_DOUBLE_EQ(equivalence_scale({"A", 0, 0, 0, 2, 1, "EUR"}, w), 1.8);
    EXPECT_DOUBLE_EQ(equivalence_scale({"A", 0, 0, 0, 1, 0, "EUR"}, w), 1.0);
    EXPECT_DOUBLE_EQ(equivalence_scale({"A", 0, 0, 0, 3, 2, "EUR"}, w), 2.6);
}

TEST(EquivalizedIncome, SumsComponentsAndConverts) {
    const auto cfg = euro_config();
    EXPECT_DOUBLE_EQ(equivalized_income({"A", 1000, 500, 300, 2, 1, "EUR"}, cfg), 1000.0);
    EXPECT_DOUBLE_EQ(equivalized_income({"A", 200, 0, 0, 1, 0, "GBP"}, cfg), 230.0);
    try {
        equivalized_income({"AT", 1, 0, 0, 1, 0, "XYZ"}, cfg);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_STREQ(e.what(), "unknown currency code 'XYZ' (group AT)");
    }
}

TEST(EquivalizedIncome, ReferenceCurrencyNeedsNoEntry) {
    PipelineConfig cfg;
    cfg.reference_currency = "EUR";
    EXPECT_DOUBLE_EQ(equivalized_income({"A", 50, 0, 0, 1, 0, "EUR"}, cfg), 50.0);
}

TEST(Config, ParsesAllSections) {
    std::istringstream in(
        "[columns]\ngroup = country\n"
        "[exchange_rates]\nEUR = 1\nCZK = 0.04\n"
        "[oecd_weights]\nchild = 0.25\n"
        "[options]\nreference_currency = EUR\npositive_income_filter = false\n");
    const auto cfg = parse_pipeline_config(in);
    EXPECT_EQ(cfg.columns.group, "country");
    EXPECT_EQ(cfg.columns.adults, "adults");
    EXPECT_EQ(cfg.exchange_rates.at("CZK"), 0.04);
    EXPECT_EQ(cfg.weights.child, 0.25);
    EXPECT_EQ(cfg.weights.other_adult, 0.5);
    EXPECT_FALSE(cfg.positive_income_filter);
    EXPECT_EQ(cfg.reference_currency, "EUR");
}

TEST(Config, RejectsUnknownOrInvalidEntries) {
    auto parse = [](const char* text) {
        std::istringstream in(text);
        return parse_pipeline_config(in);
    };
    EXPECT_THROW(parse("[colums]\ngroup = g\n"), ValidationError);
    EXPECT_THROW(parse("[columns]\nincome = x\n"), ValidationError);
    EXPECT_THROW(parse("[exchange_rates]\nEUR = -1\n"), ValidationError);
    EXPECT_THROW(parse("[exchange_rates]\nEUR = abc\n"), ValidationError);
    EXPECT_THROW(parse("[options]\npositive_income_filter = maybe\n"), ValidationError);
    EXPECT_THROW(load_pipeline_config(kData + "/missing.ini"), ValidationError);
}

TEST(ReadCsv, MapsColumnsAndQuotedFields) {
    std::istringstream in(
        "\xEF\xBB\xBFgroup,currency,rental_income,capital_investment_income,"
        "private_pension_income,adults,children_under_14\n"
        "\"North, East\",EUR,100,20.5,0,2,1\n"
        "South,EUR,0,0,0,1,0\n");
    const auto rows = read_household_csv(in, ColumnMapping{});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].group, "North, East");
    EXPECT_EQ(rows[0].capital_investment_income, 20.5);
    EXPECT_EQ(rows[0].children_under_14, 1);
    EXPECT_EQ(rows[1].adults, 1);
}

TEST(ReadCsv, DiagnosesBadInput) {
    auto message = [](const char* text) {
        std::istringstream in(text);
        try {
            read_household_csv(in, ColumnMapping{});
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_EQ(message("group,rental_income\nA,1\n"),
              "data: missing column 'capital_investment_income'");
    const char* header =
        "group,rental_income,capital_investment_income,private_pension_income,adults,"
        "children_under_14,currency\n";
    EXPECT_EQ(message((std::string(header) + "A,1,2,3,1,0\n").c_str()),
              "data line 2: expected 7 fields, found 6");
    EXPECT_EQ(message((std::string(header) + "A,1,x,3,1,0,EUR\n").c_str()),
              "data line 2: invalid number 'x'");
    EXPECT_EQ(message((std::string(header) + "A,-1,0,3,1,0,EUR\n").c_str()),
              "data line 2: income components must be finite and >= 0");
    EXPECT_EQ(message((std::string(header) + "A,1,0,3,0,0,EUR\n").c_str()),
              "data line 2: household needs at least one adult");
    EXPECT_EQ(message(""), "data: missing header row");
}

TEST(Cohorts, CountsAndFilter) {
    const auto cfg = load_pipeline_config(kData + "/households.ini");
    const auto cohorts = build_cohorts(read_fixture("households.csv", cfg), cfg);
    ASSERT_EQ(cohorts.size(), 3u);
    EXPECT_EQ(cohorts.at("AT").n_total, 10u);
    EXPECT_EQ(cohorts.at("AT").sample->size(), 8u);
    EXPECT_EQ(cohorts.at("CZ").n_total, 9u);
    EXPECT_EQ(cohorts.at("GB").sample->size(), 8u);

    auto keep_all = cfg;
    keep_all.positive_income_filter = false;
    const auto unfiltered = build_cohorts(read_fixture("households.csv", keep_all), keep_all);
    EXPECT_EQ(unfiltered.at("AT").sample->size(), 10u);
}

TEST(Cohorts, ReportMatchesIndependentOracle) {
    const auto cfg = load_pipeline_config(kData + "/households.ini");
    const auto table = cohort_reports(build_cohorts(read_fixture("households.csv", cfg), cfg),
                                      {kAllStrategies.begin(), kAllStrategies.end()});
    std::ostringstream out;
    write_cohort_csv(out, table, 4);
    EXPECT_EQ(out.str(), slurp(kData + "/households_expected.csv"));
}

TEST(Cohorts, EmptyGroupIsKeptAndUnranked) {
    const auto cfg = load_pipeline_config(kData + "/households.ini");
    const auto table =
        cohort_reports(build_cohorts(read_fixture("households_with_empty.csv", cfg), cfg),
                       {kAllStrategies.begin(), kAllStrategies.end()});
    ASSERT_EQ(table.rows.size(), 4u);
    const auto& pt = table.rows.back();
    EXPECT_EQ(pt.label, "PT");
    EXPECT_FALSE(pt.report.has_value());
    EXPECT_FALSE(pt.rank[0].has_value());
    EXPECT_NE(pt.diagnostic.find("no positive incomes"), std::string::npos);
    std::ostringstream out;
    write_cohort_csv(out, table, 4);
    EXPECT_EQ(out.str(), slurp(kData + "/households_with_empty_expected.csv"));
}

TEST(Cohorts, CurrencyRescalingLeavesIndicesAndRanks) {
    const auto base_cfg = load_pipeline_config(kData + "/households.ini");
    const auto scaled_cfg = load_pipeline_config(kData + "/households_rescaled.ini");
    const std::vector<Strategy> all(kAllStrategies.begin(), kAllStrategies.end());
    const auto base =
        cohort_reports(build_cohorts(read_fixture("households.csv", base_cfg), base_cfg), all);
    const auto scaled =
        cohort_reports(build_cohorts(read_fixture("households.csv", scaled_cfg), scaled_cfg), all);
    ASSERT_EQ(base.rows.size(), scaled.rows.size());
    for (std::size_t i = 0; i < base.rows.size(); ++i) {
        const auto& a = *base.rows[i].report;
        const auto& b = *scaled.rows[i].report;
        EXPECT_NEAR(a.psi1, b.psi1, 1e-12);
        EXPECT_NEAR(a.psi2, b.psi2, 1e-12);
        EXPECT_NEAR(a.psi3, b.psi3, 1e-12);
        EXPECT_NEAR(a.gini, b.gini, 1e-12);
        EXPECT_NEAR(a.zenga, b.zenga, 1e-12);
        EXPECT_NEAR(a.dg, b.dg, 1e-12);
        EXPECT_NEAR(a.g2, b.g2, 1e-12);
        EXPECT_NEAR(b.mean, 3.0 * a.mean, 1e-9 * b.mean);
        EXPECT_EQ(base.rows[i].rank, scaled.rows[i].rank);
    }
}

TEST(Cohorts, EqualValuesRankByLabel) {
    std::map<std::string, Cohort> cohorts;
    cohorts["B"] = Cohort{make_sample({1, 2, 3}), 3, ""};
    cohorts["A"] = Cohort{make_sample({2, 4, 6}), 3, ""};
    cohorts["C"] = Cohort{make_sample({1, 1, 1}), 3, ""};
    const auto table = cohort_reports(cohorts, {Strategy::PoorVsNonpoor});
    EXPECT_EQ(table.rows[0].rank[1], 2);  // A ties B and sorts first
    EXPECT_EQ(table.rows[1].rank[1], 3);
    EXPECT_EQ(table.rows[2].rank[1], 1);
    EXPECT_FALSE(table.rows[0].rank[0].has_value());
    std::ostringstream out;
    write_cohort_csv(out, table, 2);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
              "label,mean,median,n_T,n_P,G,Z,D,G2,Psi1,Psi2,Psi3,rank2");
}

TEST(Cohorts, JsonCarriesDiagnostics) {
    const auto cfg = load_pipeline_config(kData + "/households.ini");
    const auto table =
        cohort_reports(build_cohorts(read_fixture("households_with_empty.csv", cfg), cfg),
                       {Strategy::PoorVsAll});
    std::ostringstream out;
    write_cohort_json(out, table);
    EXPECT_NE(out.str().find("\"label\": \"PT\""), std::string::npos) << out.str();
    EXPECT_NE(out.str().find("no positive incomes"), std::string::npos);
}

}  // namespace
}  // namespace medineq
