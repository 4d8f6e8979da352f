#include "medineq/cli.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "medineq/data_pipeline.hpp"
#include "medineq/empirical_indices.hpp"
#include "medineq/equality_curves.hpp"
#include "medineq/errors.hpp"
#include "medineq/transfers.hpp"

namespace medineq {

namespace {

struct CommonOptions {
    std::string format = "text";
    int precision = 4;
    std::string output;
};

struct Options {
    CommonOptions common;  // bound to the subcommand that was invoked
    std::size_t panels = QuadratureConfig{}.panels;
    std::size_t nodes = QuadratureConfig{}.nodes;

    std::string model_spec;
    int strategy = 1;
    std::size_t points = 200;

    std::vector<double> values;
    std::string values_file;
    std::string label = "sample";
    std::optional<std::size_t> n_total;

    std::string plan_file;
    bool directions = false;

    std::string data_file;
    std::string config_file;
    std::vector<int> rank_by = {1, 2, 3};
};

std::string fixed(double value, int precision) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(precision);
    out << value;
    return out.str();
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + '"';
}

// Output sink: the --output file when given, the caller's stream otherwise.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw ValidationError("cannot open output file '" + path + "'");
            }
            stream_ = file_.get();
        }
    }
    std::ostream& stream() { return *stream_; }
    bool to_file() const { return file_ != nullptr; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

std::vector<double> read_values_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open values file '" + path + "'");
    }
    std::vector<double> values;
    std::string token;
    std::size_t line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (char& ch : line) {
            if (ch == ',' || ch == ';' || ch == '\t' || ch == '\r') ch = ' ';
        }
        std::istringstream fields(line);
        while (fields >> token) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
            if (ec != std::errc{} || ptr != token.data() + token.size()) {
                throw ValidationError(path + ":" + std::to_string(line_no) + ": invalid value '" +
                                      token + "'");
            }
            values.push_back(v);
        }
    }
    return values;
}

Sample load_sample(const Options& opt) {
    std::vector<double> values = opt.values;
    if (!opt.values_file.empty()) {
        auto more = read_values_file(opt.values_file);
        values.insert(values.end(), more.begin(), more.end());
    }
    if (values.empty()) {
        throw ValidationError("no income values given (pass them as arguments or via --file)");
    }
    return Sample(std::move(values));
}

QuadratureConfig quadrature_from(const Options& opt) {
    QuadratureConfig quad{opt.panels, opt.nodes};
    validate(quad);
    return quad;
}

int cmd_table1(const Options& opt, std::ostream& out) {
    const auto rows = catalog_table(quadrature_from(opt));
    const int prec = opt.common.precision;
    Sink sink(opt.common.output, out);
    auto& os = sink.stream();

    if (opt.common.format == "csv") {
        os << "distribution,Psi1,Psi2,Psi3,rank1,rank2,rank3\n";
        for (const auto& r : rows) {
            os << csv_field(r.label);
            for (double v : r.index) os << ',' << fixed(v, prec);
            for (const auto& rank : r.rank) os << ',' << rank;
            os << '\n';
        }
    } else if (opt.common.format == "json") {
        auto doc = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            doc.push_back({{"distribution", r.label},
                           {"Psi1", r.index[0]},
                           {"Psi2", r.index[1]},
                           {"Psi3", r.index[2]},
                           {"rank1", r.rank[0]},
                           {"rank2", r.rank[1]},
                           {"rank3", r.rank[2]}});
        }
        os << doc.dump(2) << '\n';
    } else {
        const int value_width = prec + 4;
        os << std::left << std::setw(40) << "Distribution" << std::right;
        for (const char* h : {"Psi1", "Psi2", "Psi3"}) os << std::setw(value_width) << h;
        for (const char* h : {"rank1", "rank2", "rank3"}) os << std::setw(7) << h;
        os << '\n';
        for (const auto& r : rows) {
            os << std::left << std::setw(40) << r.label << std::right;
            for (double v : r.index) os << std::setw(value_width) << fixed(v, prec);
            for (const auto& rank : r.rank) os << std::setw(7) << rank;
            os << '\n';
        }
    }
    return kExitOk;
}

int cmd_curve(const Options& opt, std::ostream& out) {
    const auto model = parse_model_spec(opt.model_spec);
    const auto k = strategy_from_number(opt.strategy);
    const auto curve = curve_samples(model, k, opt.points);

    Sink sink(opt.common.output, out);
    if (opt.common.format == "json") {
        write_curve_json(sink.stream(), curve);
    } else {
        write_curve_csv(sink.stream(), curve, opt.common.precision);
    }
    if (sink.to_file()) {
        out << "Psi" << opt.strategy << " = " << fixed(curve.index_value, opt.common.precision)
            << '\n';
    }
    return kExitOk;
}

int cmd_indices(const Options& opt, std::ostream& out) {
    const Sample sample = load_sample(opt);
    const auto report = full_report(sample, opt.n_total.value_or(sample.size()));
    const int prec = opt.common.precision;

    Sink sink(opt.common.output, out);
    auto& os = sink.stream();
    if (opt.common.format == "csv") {
        os << report_csv_header() << '\n';
        write_report_csv_row(os, csv_field(opt.label), report, prec);
        os << '\n';
    } else if (opt.common.format == "json") {
        write_report_json(os, opt.label, report);
        os << '\n';
    } else {
        auto line = [&](const char* name, const std::string& value) {
            os << std::left << std::setw(8) << name << value << '\n';
        };
        line("n", std::to_string(report.n_positive));
        line("mean", fixed(report.mean, prec));
        line("median", fixed(report.median, prec));
        line("G", fixed(report.gini, prec));
        line("Z", fixed(report.zenga, prec));
        line("D", fixed(report.dg, prec));
        line("G2", fixed(report.g2, prec));
        line("Psi1", fixed(report.psi1, prec));
        line("Psi2", fixed(report.psi2, prec));
        line("Psi3", fixed(report.psi3, prec));
    }
    return kExitOk;
}

int cmd_transfer(const Options& opt, std::ostream& out, std::ostream& err) {
    const Sample sample = load_sample(opt);
    std::ifstream plan_in(opt.plan_file);
    if (!plan_in) {
        throw ValidationError("cannot open plan file '" + opt.plan_file + "'");
    }
    const auto plan = parse_plan(plan_in);
    const auto steps = run_plan(sample, plan);

    Sink sink(opt.common.output, out);
    write_trajectory_csv(sink.stream(), steps, opt.common.precision, opt.directions);

    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& st = steps[i];
        if (st.prediction_holds()) continue;
        for (std::size_t k = 0; k < 3; ++k) {
            if ((*st.predicted)[k] != st.observed[k]) {
                err << "medineq: error: step " << (i + 1) << ": Psi" << (k + 1) << " predicted "
                    << to_string((*st.predicted)[k]) << " but observed "
                    << to_string(st.observed[k]) << '\n';
                return kExitComputation;
            }
        }
    }
    return kExitOk;
}

int cmd_cohorts(const Options& opt, std::ostream& out, std::ostream& err) {
    const auto cfg = load_pipeline_config(opt.config_file);
    std::ifstream data(opt.data_file);
    if (!data) {
        throw ValidationError("cannot open data file '" + opt.data_file + "'");
    }
    const auto records = read_household_csv(data, cfg.columns);
    const auto cohorts = build_cohorts(records, cfg);

    std::vector<Strategy> ranked_by;
    for (int k : opt.rank_by) ranked_by.push_back(strategy_from_number(k));
    const auto table = cohort_reports(cohorts, ranked_by);

    for (const auto& row : table.rows) {
        if (!row.report) {
            err << "medineq: warning: " << row.diagnostic << '\n';
        }
    }

    Sink sink(opt.common.output, out);
    if (opt.common.format == "json") {
        write_cohort_json(sink.stream(), table);
    } else {
        write_cohort_csv(sink.stream(), table, opt.common.precision);
    }
    return kExitOk;
}

void add_common(CLI::App* cmd, CommonOptions& common, std::vector<std::string> formats) {
    common.format = formats.front();
    cmd->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
    cmd->add_option("--precision", common.precision, "Decimal places in printed values")
        ->check(CLI::Range(0, 17))
        ->capture_default_str();
    cmd->add_option("--output", common.output, "Write output to this file");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CommonOptions table1_io, curve_io, indices_io, transfer_io, cohorts_io;
    CLI::App app{"Median-based income inequality indices"};
    app.name(args.empty() ? "medineq" : args.front());
    app.require_subcommand(1);

    auto* table1 = app.add_subcommand("table1", "Indices and ranks of the built-in distribution catalog");
    add_common(table1, table1_io, {"text", "csv", "json"});
    table1->add_option("--panels", opt.panels, "Quadrature panels")->capture_default_str();
    table1->add_option("--nodes", opt.nodes, "Gauss-Legendre nodes per panel")->capture_default_str();

    auto* curve = app.add_subcommand("curve", "Sample an equality curve of a parametric model");
    add_common(curve, curve_io, {"csv", "json"});
    curve->add_option("model", opt.model_spec, "Model, e.g. paretoIV:sigma=1,alpha=2,gamma=2")
        ->required();
    curve->add_option("-k,--k", opt.strategy, "Strategy 1, 2 or 3")->required();
    curve->add_option("--points", opt.points, "Number of grid points")->capture_default_str();

    auto* indices = app.add_subcommand("indices", "Empirical indices of an income sample");
    add_common(indices, indices_io, {"text", "csv", "json"});
    indices->add_option("values", opt.values, "Incomes");
    indices->add_option("--file", opt.values_file, "File with incomes");
    indices->add_option("--label", opt.label, "Row label for csv/json output");
    indices->add_option("--n-total", opt.n_total, "Cohort size before filtering (n_T)");

    auto* transfer = app.add_subcommand("transfer", "Replay a transfer plan on an income sample");
    add_common(transfer, transfer_io, {"csv"});
    transfer->add_option("values", opt.values, "Incomes");
    transfer->add_option("--file", opt.values_file, "File with incomes");
    transfer->add_option("--plan", opt.plan_file, "Plan file with 'L H c' lines")->required();
    transfer->add_flag("--directions", opt.directions,
                       "Append predicted and observed directions to each row");

    auto* cohorts = app.add_subcommand("cohorts", "Per-group index report from survey records");
    add_common(cohorts, cohorts_io, {"csv", "json"});
    cohorts->add_option("--data", opt.data_file, "Household CSV")->required();
    cohorts->add_option("--config", opt.config_file, "Pipeline configuration (INI)")->required();
    cohorts->add_option("--rank", opt.rank_by, "Strategies to rank by")
        ->delimiter(',')
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "medineq: error: " << e.what() << '\n';
        return kExitValidation;
    }

    for (auto [cmd, io] : {std::pair{table1, &table1_io}, std::pair{curve, &curve_io},
                           std::pair{indices, &indices_io}, std::pair{transfer, &transfer_io},
                           std::pair{cohorts, &cohorts_io}}) {
        if (cmd->parsed()) opt.common = *io;
    }

    try {
        if (table1->parsed()) return cmd_table1(opt, out);
        if (curve->parsed()) return cmd_curve(opt, out);
        if (indices->parsed()) return cmd_indices(opt, out);
        if (transfer->parsed()) return cmd_transfer(opt, out, err);
        if (cohorts->parsed()) return cmd_cohorts(opt, out, err);
    } catch (const ValidationError& e) {
        err << "medineq: error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ComputationError& e) {
        err << "medineq: error: " << e.what() << '\n';
        return kExitComputation;
    }
    return kExitValidation;
}

}  // namespace medineq
