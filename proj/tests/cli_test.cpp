#include "medineq/cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace medineq {
namespace {

const std::string kData = MEDINEQ_TEST_DATA_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "medineq");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> result;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) result.push_back(line);
    return result;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("medineq_cli_" + name);
    std::ofstream(path) << content;
    return path;
}

TEST(CliTable1, CsvHasSixteenRows) {
    const auto r = run({"table1", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 17u);
    EXPECT_EQ(rows[0], "distribution,Psi1,Psi2,Psi3,rank1,rank2,rank3");
    EXPECT_EQ(rows[5], "\"Weibull(theta, tau=0.5)\",0.7227,0.9681,0.8348,13,13,13");
    EXPECT_NE(rows[1].find(",3-4"), std::string::npos);
}

TEST(CliTable1, CoarseQuadratureStillInRange) {
    const auto r = run({"table1", "--format", "json", "--panels", "1", "--nodes", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\"Psi1\""), std::string::npos);
    EXPECT_EQ(run({"table1", "--nodes", "1"}).code, kExitValidation);
}

TEST(CliTable1, TextIsTheDefault) {
    const auto r = run({"table1"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("Uniform(0, theta)"), std::string::npos);
    EXPECT_EQ(r.out.find("\"Uniform"), std::string::npos);
}

TEST(CliCurve, IdentityLineForUniform) {
    const auto r = run({"curve", "uniform:theta=1", "--k", "1", "--points", "9"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 11u);
    EXPECT_EQ(rows[0], "# strategy=1 index=0.5000 model=Uniform(theta=1)");
    EXPECT_EQ(rows[1], "p,psi");
    EXPECT_EQ(rows[2], "0.1,0.1");
}

TEST(CliCurve, CoincidingCurvesPrintTheSamePoints) {
    auto points = [](const std::string& text) {
        auto rows = lines(text);
        return std::vector<std::string>(rows.begin() + 2, rows.end());
    };
    const auto a = run({"curve", "paretoII:sigma=1,alpha=1", "-k", "3", "--points", "50"});
    const auto b = run({"curve", "paretoIII:sigma=1,gamma=2", "-k", "1", "--points", "50"});
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    const auto pa = points(a.out);
    const auto pb = points(b.out);
    ASSERT_EQ(pa.size(), pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double va = std::stod(pa[i].substr(pa[i].find(',') + 1));
        const double vb = std::stod(pb[i].substr(pb[i].find(',') + 1));
        EXPECT_NEAR(va, vb, 1e-11) << i;
    }
}

TEST(CliCurve, TrapezoidOfExportedPointsApproachesIndex) {
    const auto r = run({"curve", "lognormal:mu=0,sigma=1", "-k", "2", "--points", "10000"});
    ASSERT_EQ(r.code, 0);
    const auto rows = lines(r.out);
    const double index = std::stod(rows[0].substr(rows[0].find("index=") + 6));
    double area = 0.0;
    double prev_p = 0.0;
    double prev_v = 0.0;  // psi_2 tends to 0 as p -> 0
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const double p = std::stod(rows[i]);
        const double v = std::stod(rows[i].substr(rows[i].find(',') + 1));
        area += 0.5 * (p - prev_p) * (v + prev_v);
        prev_p = p;
        prev_v = v;
    }
    area += 0.5 * (1.0 - prev_p) * prev_v;  // psi_2(1-) = Q(1/2)/Q(1) = 0
    EXPECT_NEAR(1.0 - area, index, 1e-3);
}

TEST(CliCurve, JsonAndOutputFile) {
    const auto path = std::filesystem::temp_directory_path() / "medineq_cli_curve.json";
    const auto r = run({"curve", "exponential:theta=2", "-k", "1", "--points", "4", "--format",
                        "json", "--output", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "Psi1 = 0.5573\n");
    EXPECT_NE(slurp(path.string()).find("\"strategy\":1"), std::string::npos);
}

TEST(CliCurve, Errors) {
    const auto unknown = run({"curve", "dagum:a=1", "-k", "1"});
    EXPECT_EQ(unknown.code, kExitValidation);
    EXPECT_EQ(unknown.err, "medineq: error: unknown family 'dagum'\n");
    EXPECT_EQ(run({"curve", "uniform:theta=1", "-k", "4"}).code, kExitValidation);
    EXPECT_EQ(run({"curve", "uniform:theta=1"}).code, kExitValidation);
    EXPECT_EQ(run({"curve", "uniform:theta=1", "-k", "1", "--points", "1"}).code,
              kExitValidation);
}

TEST(CliIndices, CsvFromArgumentsAndFile) {
    const auto r = run({"indices", "1", "3", "5", "7", "10", "20", "24", "--format", "csv",
                        "--label", "ex", "--n-total", "10"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out,
              "label,mean,median,n_T,n_P,G,Z,D,G2,Psi1,Psi2,Psi3\n"
              "ex,10.0000,7.0000,10,7,0.4408,0.8267,0.6254,0.4257,0.5714,0.8472,0.7694\n");
    const auto f = run({"indices", "--file", kData + "/worked_incomes.txt", "--format", "json"});
    ASSERT_EQ(f.code, 0) << f.err;
    EXPECT_NE(f.out.find("\"Psi2\":0.8472222222222222"), std::string::npos) << f.out;
}

TEST(CliIndices, ErrorsMapToExitCodes) {
    EXPECT_EQ(run({"indices"}).code, kExitValidation);
    EXPECT_EQ(run({"indices", "1", "-2"}).code, kExitValidation);
    EXPECT_EQ(run({"indices", "1", "abc"}).code, kExitValidation);
    const auto degenerate = run({"indices", "0", "0", "0"});
    EXPECT_EQ(degenerate.code, kExitComputation);
    EXPECT_EQ(degenerate.err.rfind("medineq: error: ", 0), 0u);
}

TEST(CliTransfer, SixStepTrajectory) {
    const auto r = run({"transfer", "--file", kData + "/worked_incomes.txt", "--plan",
                        kData + "/six_step.plan"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 7u);
    EXPECT_EQ(rows[0], "step,L,H,c,psi1,psi2,psi3");
    EXPECT_EQ(rows[1], "1,5,6,3,0.5714,0.8461,0.7991");
    EXPECT_EQ(rows[6], "6,1,5,3,0.2857,0.6640,0.6217");
}

TEST(CliTransfer, InadmissibleStep) {
    const auto plan = temp_file("bad.plan", "5 6 6\n");
    const auto r = run({"transfer", "1", "3", "5", "7", "10", "20", "24", "--plan", plan.string()});
    EXPECT_EQ(r.code, kExitValidation);
    EXPECT_EQ(r.err,
              "medineq: error: step 1: inadmissible transfer L=5 H=6 c=6: amount must lie in (0, "
              "5)\n");
    EXPECT_EQ(run({"transfer", "1", "2", "3", "--plan", "/nonexistent.plan"}).code,
              kExitValidation);
}

TEST(CliTransfer, DirectionsColumns) {
    const auto plan = temp_file("dir.plan", "5 6 2\n");
    const auto r = run({"transfer", "1", "3", "5", "7", "10", "20", "24", "--plan", plan.string(),
                        "--directions"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("unchanged,unchanged,increase,unchanged,unchanged,increase"),
              std::string::npos)
        << r.out;
}

TEST(CliCohorts, FixtureByteForByte) {
    const auto r = run({"cohorts", "--data", kData + "/households.csv", "--config",
                        kData + "/households.ini"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, slurp(kData + "/households_expected.csv"));
    EXPECT_TRUE(r.err.empty());
    // Deterministic across runs.
    EXPECT_EQ(run({"cohorts", "--data", kData + "/households.csv", "--config",
                   kData + "/households.ini"})
                  .out,
              r.out);
}

TEST(CliCohorts, EmptyGroupWarns) {
    const auto r = run({"cohorts", "--data", kData + "/households_with_empty.csv", "--config",
                        kData + "/households.ini"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, slurp(kData + "/households_with_empty_expected.csv"));
    EXPECT_EQ(r.err, "medineq: warning: group PT: no positive incomes, indices undefined\n");
}

TEST(CliCohorts, RankSelectionAndJson) {
    const auto r = run({"cohorts", "--data", kData + "/households.csv", "--config",
                        kData + "/households.ini", "--rank", "2", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\"label\": \"AT\""), std::string::npos) << r.out;
    EXPECT_EQ(run({"cohorts", "--data", kData + "/households.csv", "--config",
                   kData + "/households.ini", "--rank", "5"})
                  .code,
              kExitValidation);
}

TEST(CliCohorts, MissingColumnIsAValidationError) {
    const auto data = temp_file("nocol.csv", "country,rent\nAT,1\n");
    const auto r = run({"cohorts", "--data", data.string(), "--config", kData + "/households.ini"});
    EXPECT_EQ(r.code, kExitValidation);
    EXPECT_EQ(r.err, "medineq: error: data: missing column 'capital'\n");
}

TEST(Cli, UnknownSubcommandAndHelp) {
    EXPECT_EQ(run({"frobnicate"}).code, kExitValidation);
    EXPECT_EQ(run({}).code, kExitValidation);
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

}  // namespace
}  // namespace medineq
