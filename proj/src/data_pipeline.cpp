#include "medineq/data_pipeline.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/tokenizer.hpp>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "medineq/errors.hpp"

namespace medineq {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& text, const std::string& where) {
    const auto t = trim(text);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ValidationError(where + ": invalid number '" + text + "'");
    }
    return value;
}

int parse_count(const std::string& text, const std::string& where) {
    const auto t = trim(text);
    int value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ValidationError(where + ": invalid count '" + text + "'");
    }
    return value;
}

bool parse_bool(const std::string& text, const std::string& where) {
    std::string t = trim(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
    if (t == "false" || t == "no" || t == "0" || t == "off") return false;
    throw ValidationError(where + ": invalid boolean '" + text + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    using Separator = boost::escaped_list_separator<char>;
    boost::tokenizer<Separator> tokens(line, Separator('\\', ',', '"'));
    return {tokens.begin(), tokens.end()};
}

}  // namespace

void validate(const PipelineConfig& cfg) {
    for (const auto& [code, rate] : cfg.exchange_rates) {
        if (!(rate > 0.0) || !std::isfinite(rate)) {
            throw ValidationError("exchange rate for " + code + " must be positive");
        }
    }
    const auto& w = cfg.weights;
    if (!(w.head > 0.0 && w.other_adult > 0.0 && w.child > 0.0)) {
        throw ValidationError("equivalence-scale weights must be positive");
    }
}

PipelineConfig parse_pipeline_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError("config: " + std::string(e.message()) + " at line " +
                              std::to_string(e.line()));
    }

    PipelineConfig cfg;
    for (const auto& [section, body] : tree) {
        if (section == "columns") {
            for (const auto& [key, node] : body) {
                const auto value = trim(node.data());
                auto& c = cfg.columns;
                if (key == "group") c.group = value;
                else if (key == "rental_income") c.rental_income = value;
                else if (key == "capital_investment_income") c.capital_investment_income = value;
                else if (key == "private_pension_income") c.private_pension_income = value;
                else if (key == "adults") c.adults = value;
                else if (key == "children_under_14") c.children_under_14 = value;
                else if (key == "currency") c.currency = value;
                else throw ValidationError("config: unknown column field '" + key + "'");
            }
        } else if (section == "exchange_rates") {
            for (const auto& [key, node] : body) {
                cfg.exchange_rates[key] = parse_number(node.data(), "config exchange_rates." + key);
            }
        } else if (section == "oecd_weights") {
            for (const auto& [key, node] : body) {
                const double v = parse_number(node.data(), "config oecd_weights." + key);
                if (key == "head") cfg.weights.head = v;
                else if (key == "other_adult") cfg.weights.other_adult = v;
                else if (key == "child") cfg.weights.child = v;
                else throw ValidationError("config: unknown weight '" + key + "'");
            }
        } else if (section == "options") {
            for (const auto& [key, node] : body) {
                if (key == "reference_currency") {
                    cfg.reference_currency = trim(node.data());
                } else if (key == "positive_income_filter") {
                    cfg.positive_income_filter =
                        parse_bool(node.data(), "config options.positive_income_filter");
                } else {
                    throw ValidationError("config: unknown option '" + key + "'");
                }
            }
        } else {
            throw ValidationError("config: unknown section '" + section + "'");
        }
    }
    validate(cfg);
    return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open config file '" + path + "'");
    }
    return parse_pipeline_config(in);
}

std::vector<HouseholdRecord> read_household_csv(std::istream& in, const ColumnMapping& columns) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("data: missing header row");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    auto header = split_csv_line(line);
    for (auto& h : header) h = trim(h);

    auto locate = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw ValidationError("data: missing column '" + name + "'");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c_group = locate(columns.group);
    const std::size_t c_rental = locate(columns.rental_income);
    const std::size_t c_capital = locate(columns.capital_investment_income);
    const std::size_t c_pension = locate(columns.private_pension_income);
    const std::size_t c_adults = locate(columns.adults);
    const std::size_t c_children = locate(columns.children_under_14);
    const std::size_t c_currency = locate(columns.currency);

    std::vector<HouseholdRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string where = "data line " + std::to_string(line_no);
        std::vector<std::string> fields;
        try {
            fields = split_csv_line(line);
        } catch (const boost::escaped_list_error& e) {
            throw ValidationError(where + ": " + e.what());
        }
        if (fields.size() != header.size()) {
            throw ValidationError(where + ": expected " + std::to_string(header.size()) +
                                  " fields, found " + std::to_string(fields.size()));
        }

        HouseholdRecord r;
        r.group = trim(fields[c_group]);
        r.rental_income = parse_number(fields[c_rental], where);
        r.capital_investment_income = parse_number(fields[c_capital], where);
        r.private_pension_income = parse_number(fields[c_pension], where);
        r.adults = parse_count(fields[c_adults], where);
        r.children_under_14 = parse_count(fields[c_children], where);
        r.currency = trim(fields[c_currency]);

        for (double v : {r.rental_income, r.capital_investment_income, r.private_pension_income}) {
            if (!std::isfinite(v) || v < 0.0) {
                throw ValidationError(where + ": income components must be finite and >= 0");
            }
        }
        if (r.adults < 1) {
            throw ValidationError(where + ": household needs at least one adult");
        }
        if (r.children_under_14 < 0) {
            throw ValidationError(where + ": negative number of children");
        }
        if (r.group.empty()) {
            throw ValidationError(where + ": empty group label");
        }
        records.push_back(std::move(r));
    }
    return records;
}

double equivalence_scale(const HouseholdRecord& r, const OecdWeights& weights) {
    return weights.head + weights.other_adult * static_cast<double>(r.adults - 1) +
           weights.child * static_cast<double>(r.children_under_14);
}

double equivalized_income(const HouseholdRecord& r, const PipelineConfig& cfg) {
    double rate = 1.0;
    if (auto it = cfg.exchange_rates.find(r.currency); it != cfg.exchange_rates.end()) {
        rate = it->second;
    } else if (r.currency != cfg.reference_currency) {
        throw ValidationError("unknown currency code '" + r.currency + "' (group " + r.group +
                              ")");
    }
    const double income =
        r.rental_income + r.capital_investment_income + r.private_pension_income;
    return income * rate / equivalence_scale(r, cfg.weights);
}

std::map<std::string, Cohort> build_cohorts(const std::vector<HouseholdRecord>& records,
                                            const PipelineConfig& cfg) {
    if (records.empty()) {
        throw ValidationError("no records");
    }
    std::map<std::string, std::vector<double>> incomes;
    std::map<std::string, Cohort> cohorts;
    for (const auto& r : records) {
        auto& cohort = cohorts[r.group];
        ++cohort.n_total;
        auto& bucket = incomes[r.group];
        const double income = equivalized_income(r, cfg);
        if (!cfg.positive_income_filter || income > 0.0) {
            bucket.push_back(income);
        }
    }
    for (auto& [label, cohort] : cohorts) {
        auto& bucket = incomes[label];
        if (bucket.empty()) {
            cohort.diagnostic = "group " + label + ": no positive incomes, indices undefined";
        } else {
            cohort.sample.emplace(std::move(bucket));
        }
    }
    return cohorts;
}

CohortTable cohort_reports(const std::map<std::string, Cohort>& cohorts,
                           const std::vector<Strategy>& ranked_by) {
    if (cohorts.empty()) {
        throw ValidationError("no cohorts to report");
    }
    CohortTable table;
    table.ranked_by = ranked_by;
    for (const auto& [label, cohort] : cohorts) {
        CohortRow row;
        row.label = label;
        row.n_total = cohort.n_total;
        row.n_positive = cohort.sample ? cohort.sample->size() : 0;
        row.diagnostic = cohort.diagnostic;
        if (cohort.sample) {
            try {
                row.report = full_report(*cohort.sample, cohort.n_total);
            } catch (const ComputationError& e) {
                row.diagnostic = "group " + label + ": " + e.what();
            }
        }
        table.rows.push_back(std::move(row));
    }

    for (Strategy k : ranked_by) {
        const int col = strategy_number(k) - 1;
        auto value = [col](const IndexReport& r) {
            return col == 0 ? r.psi1 : col == 1 ? r.psi2 : r.psi3;
        };
        std::vector<CohortRow*> ranked;
        for (auto& row : table.rows) {
            if (row.report) ranked.push_back(&row);
        }
        // Rows are already label-sorted, so a stable sort breaks ties by label.
        std::stable_sort(ranked.begin(), ranked.end(), [&](const CohortRow* a, const CohortRow* b) {
            return value(*a->report) < value(*b->report);
        });
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            ranked[i]->rank[col] = static_cast<int>(i) + 1;
        }
    }
    return table;
}

void write_cohort_csv(std::ostream& out, const CohortTable& table, int precision) {
    out << report_csv_header();
    for (Strategy k : table.ranked_by) {
        out << ",rank" << strategy_number(k);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.report) {
            write_report_csv_row(out, row.label, *row.report, precision);
        } else {
            out << row.label << ",NA,NA," << row.n_total << ',' << row.n_positive
                << ",NA,NA,NA,NA,NA,NA,NA";
        }
        for (Strategy k : table.ranked_by) {
            const auto& r = row.rank[strategy_number(k) - 1];
            out << ',';
            if (r) out << *r;
            else out << "NA";
        }
        out << '\n';
    }
}

void write_cohort_json(std::ostream& out, const CohortTable& table) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json item;
        item["label"] = row.label;
        item["n_T"] = row.n_total;
        item["n_P"] = row.n_positive;
        if (row.report) {
            const auto& r = *row.report;
            item["mean"] = r.mean;
            item["median"] = r.median;
            item["G"] = r.gini;
            item["Z"] = r.zenga;
            item["D"] = r.dg;
            item["G2"] = r.g2;
            item["Psi1"] = r.psi1;
            item["Psi2"] = r.psi2;
            item["Psi3"] = r.psi3;
        } else {
            item["undefined"] = row.diagnostic;
        }
        for (Strategy k : table.ranked_by) {
            const auto& r = row.rank[strategy_number(k) - 1];
            const std::string key = "rank" + std::to_string(strategy_number(k));
            if (r) item[key] = *r;
            else item[key] = nullptr;
        }
        rows.push_back(std::move(item));
    }
    out << rows.dump(2) << '\n';
}

}  // namespace medineq
