#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "qclass/experiment_cli.hpp"

namespace qclass::cli {
namespace {

const char* kPlanar = R"({"problem": {"r0": [0.8, 0, 0], "s0": [0, 0.6, 0], "pi0": 0.5}})";

double metric(const std::vector<ResultRow>& rows, const std::string& name) {
    for (const auto& r : rows)
        if (r.metric == name) return std::get<double>(r.value);
    ADD_FAILURE() << "no metric " << name;
    return 0.0;
}

TEST(ParseConfig, FullDocument) {
    const auto cfg = parse_config_text(R"({
        "problem": {"r0": [0.8, 0, 0], "s0": [0, 0.6, 0], "pi0": 0.5},
        "seed": 42, "trials": 1000, "threads": 2, "format": "json", "out": "x.json",
        "gaussian": {"strategies": ["optimal-joint", "heterodyne-plugin"], "u": [0, 0, 0], "v": [1, 0, 0], "delta": 0.5},
        "qubit": {"n_list": [100, 200], "label_mode": "fixed-counts", "known_priors": true, "localize": false},
        "sweep": {"r0_length": [1], "s0_length": [1], "angle": [3.14], "pi0": [0.5]}
    })");
    ASSERT_TRUE(cfg.problem);
    EXPECT_EQ(cfg.problem->r0, (Vec3{0.8, 0, 0}));
    EXPECT_EQ(*cfg.seed, 42u);
    EXPECT_EQ(*cfg.threads, 2u);
    EXPECT_EQ(*cfg.format, OutputFormat::Json);
    EXPECT_EQ(cfg.gaussian->strategies.size(), 2u);
    EXPECT_EQ(cfg.gaussian->delta, 0.5);
    EXPECT_EQ(cfg.qubit->label_mode, LabelMode::FixedCounts);
    EXPECT_TRUE(cfg.qubit->known_priors);
    EXPECT_EQ(cfg.sweep->angle.size(), 1u);
}

TEST(ParseConfig, Errors) {
    EXPECT_THROW(parse_config_text("{"), ConfigError);
    EXPECT_THROW(parse_config_text(R"({"bogus": 1})"), ConfigError);
    EXPECT_THROW(parse_config_text(R"({"problem": {"r0": [0, 0, 1], "s0": [0, 0, -1]}})"), ConfigError);
    EXPECT_THROW(parse_config_text(R"({"problem": {"r0": [0, 1], "s0": [0, 0, -1], "pi0": 0.5}})"), ConfigError);
    EXPECT_THROW(parse_config_text(R"({"seed": -1})"), ConfigError);
    EXPECT_THROW(parse_config_text(R"({"format": "xml"})"), ConfigError);
    EXPECT_THROW(parse_config_text(R"({"gaussian": {"strategies": ["nope"], "u": [0,0,0], "v": [0,0,0], "delta": 0}})"),
                 ConfigError);
    EXPECT_THROW(parse_config_text(
                     R"({"qubit": {"n_list": [10], "label_mode": "sometimes", "known_priors": true, "localize": false}})"),
                 ConfigError);
}

TEST(Report, PlanarConfiguration) {
    const auto rows = cmd_report(parse_config_text(kPlanar));
    EXPECT_EQ(std::get<std::string>(rows.front().value), "Nontrivial");
    EXPECT_NEAR(metric(rows, "optimal_risk"), 1.0248, 1e-12);
    EXPECT_NEAR(metric(rows, "plugin_risk"), 1.4168, 1e-12);
    EXPECT_NEAR(metric(rows, "gap"), 0.392, 1e-12);
    EXPECT_NEAR(metric(rows, "helstrom_risk"), 0.25, 1e-12);
}

TEST(Report, TrivialConfigurationHasNoAsymptotics) {
    const auto rows = cmd_report(parse_config_text(R"({"problem": {"r0": [0, 0, 0.1], "s0": [0, 0, 0.5], "pi0": 0.9}})"));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(std::get<std::string>(rows[0].value), "TrivialGuessRho");
}

TEST(Report, Antipodal) {
    const auto rows = cmd_report(parse_config_text(R"({"problem": {"r0": [0, 0, 1], "s0": [0, 0, -1], "pi0": 0.5}})"));
    EXPECT_NEAR(metric(rows, "gap"), 0.5, 1e-12);
}

TEST(Report, InvalidInputs) {
    EXPECT_THROW(cmd_report(parse_config_text(R"({"problem": {"r0": [1, 1, 0], "s0": [0, 0, -1], "pi0": 0.5}})")),
                 InvalidStateError);
    EXPECT_THROW(cmd_report(parse_config_text(R"({"problem": {"r0": [0, 0, 1], "s0": [0, 0, -1], "pi0": 1.0}})")),
                 PreconditionError);
    EXPECT_THROW(cmd_report(parse_config_text("{}")), ConfigError);
}

TEST(Output, CsvLayout) {
    const auto rows = cmd_report(parse_config_text(kPlanar));
    std::ostringstream os;
    write_csv(os, rows);
    std::istringstream is(os.str());
    std::string header, first;
    std::getline(is, header);
    std::getline(is, first);
    EXPECT_EQ(header, "param.r0_x,param.r0_y,param.r0_z,param.s0_x,param.s0_y,param.s0_z,param.pi0,"
                      "metric,value,stderr,n,reference");
    EXPECT_EQ(first, "0.80000000000000004,0,0,0,0.59999999999999998,0,0.5,verdict,Nontrivial,,,");
}

TEST(Output, JsonRoundTrip) {
    const auto rows = cmd_report(parse_config_text(kPlanar));
    std::ostringstream os;
    write_json(os, rows);
    const auto j = Json::parse(os.str());
    ASSERT_EQ(j.size(), rows.size());
    EXPECT_EQ(j[0]["metric"], "verdict");
    EXPECT_EQ(j[0]["param.pi0"], 0.5);
    EXPECT_TRUE(j[0]["stderr"].is_null());
    EXPECT_EQ(j[5]["metric"], "optimal_risk");
    EXPECT_NEAR(j[5]["value"].get<double>(), 1.0248, 1e-12);
}

TEST(Output, FormatDoubleRoundTrips) {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 12345.678}) EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(GaussianSim, RowsCarryClosedForm) {
    auto cfg = parse_config_text(kPlanar);
    cfg.seed = 3;
    cfg.trials = 20000;
    cfg.threads = 1;
    cfg.gaussian = GaussianSimConfig{{StrategyKind::OptimalJoint, StrategyKind::HeterodynePlugin}, {}, {}, 0.0};
    const auto rows = cmd_gaussian_sim(cfg);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(*rows[0].reference, 1.0248, 1e-12);
    EXPECT_NEAR(*rows[1].reference, 1.4168, 1e-12);
    for (const auto& r : rows) EXPECT_NEAR(std::get<double>(r.value), *r.reference, 4 * *r.std_error);
}

TEST(GaussianSim, NeedsNontrivialProblem) {
    auto cfg = parse_config_text(R"({"problem": {"r0": [0, 0, 0.1], "s0": [0, 0, 0.5], "pi0": 0.9}})");
    cfg.seed = 1;
    cfg.trials = 10;
    cfg.gaussian = GaussianSimConfig{{StrategyKind::OptimalJoint}, {}, {}, 0.0};
    EXPECT_THROW(cmd_gaussian_sim(cfg), PreconditionError);
}

TEST(QubitSim, RowsPerSize) {
    auto cfg = parse_config_text(kPlanar);
    cfg.seed = 4;
    cfg.trials = 500;
    cfg.qubit = QubitSimConfig{{100, 400}, LabelMode::FixedCounts, true, false};
    const auto rows = cmd_qubit_sim(cfg);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].metric, "mean_rescaled_excess");
    EXPECT_EQ(*rows[3].n, 400u);
    EXPECT_NEAR(*rows[0].reference, 2.6544, 1e-12);

    cfg.qubit->n_list = {4};
    EXPECT_THROW(cmd_qubit_sim(cfg), PreconditionError);
    cfg.qubit->n_list = {400, 100};
    EXPECT_THROW(cmd_qubit_sim(cfg), ConfigError);
}

TEST(Sweep, GridOrder) {
    const auto rows = cmd_sweep(parse_config_text(R"({"sweep": {"r0_length": [0.5, 1.0], "s0_length": [1.0],
        "angle": [1.5, 3.141592653589793], "pi0": [0.3, 0.5]}})"));
    std::vector<std::vector<double>> points;
    for (const auto& r : rows)
        if (r.metric == "verdict") {
            std::vector<double> p;
            for (const auto& [_, v] : r.params) p.push_back(v.get<double>());
            points.push_back(p);
        }
    ASSERT_EQ(points.size(), 8u);
    EXPECT_EQ(points[0], (std::vector<double>{0.5, 1.0, 1.5, 0.3}));
    EXPECT_EQ(points[1], (std::vector<double>{0.5, 1.0, 1.5, 0.5}));
    EXPECT_EQ(points[2], (std::vector<double>{0.5, 1.0, 3.141592653589793, 0.3}));
    EXPECT_EQ(points[7], (std::vector<double>{1.0, 1.0, 3.141592653589793, 0.5}));
}

TEST(Sweep, AntipodalPointGap) {
    const auto rows = cmd_sweep(parse_config_text(
        R"({"sweep": {"r0_length": [1.0], "s0_length": [1.0], "angle": [3.141592653589793], "pi0": [0.5]}})"));
    EXPECT_NEAR(metric(rows, "gap"), 0.5, 1e-12);
}

TEST(Sweep, ParallelPointHasZeroGap) {
    const auto rows = cmd_sweep(parse_config_text(
        R"({"sweep": {"r0_length": [0.9], "s0_length": [0.3], "angle": [0.0], "pi0": [0.5]}})"));
    EXPECT_NEAR(metric(rows, "gap"), 0.0, 1e-12);
}

TEST(Sweep, Errors) {
    EXPECT_THROW(cmd_sweep(parse_config_text(R"({"sweep": {"r0_length": [], "s0_length": [1], "angle": [0], "pi0": [0.5]}})")),
                 ConfigError);
    EXPECT_THROW(cmd_sweep(parse_config_text(R"({"sweep": {"r0_length": [1.5], "s0_length": [1], "angle": [0], "pi0": [0.5]}})")),
                 InvalidStateError);
}

class CliProcess : public ::testing::Test {
protected:
    std::filesystem::path dir = std::filesystem::temp_directory_path() / "qclass_cli_test";

    void SetUp() override { std::filesystem::create_directories(dir); }
    void TearDown() override { std::filesystem::remove_all(dir); }

    std::string write(const std::string& name, const std::string& text) {
        const auto p = dir / name;
        std::ofstream(p) << text;
        return p.string();
    }

    int run(const std::string& args) {
        const std::string cmd = std::string(QCLASS_CLI_PATH) + " " + args + " > " + (dir / "stdout").string() +
                                " 2> " + (dir / "stderr").string();
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    }
};

TEST_F(CliProcess, ExitCodes) {
    EXPECT_EQ(run("report --config " + write("ok.json", kPlanar)), kExitOk);
    EXPECT_EQ(run("report --config " + write("bad.json", "{\"nope\": 1}")), kExitConfig);
    EXPECT_EQ(run("report --config " + (dir / "missing.json").string()), kExitConfig);
    EXPECT_EQ(run("report --config " + write("state.json", R"({"problem": {"r0": [1, 1, 0], "s0": [0, 0, 1], "pi0": 0.5}})")),
              kExitConfig);
    EXPECT_EQ(run("report"), kExitConfig);
    EXPECT_EQ(run("report --config " + write("fmt.json", kPlanar) + " --format xml"), kExitConfig);
}

TEST_F(CliProcess, WritesOutputFile) {
    const auto out = (dir / "out.json").string();
    ASSERT_EQ(run("report --config " + write("ok.json", kPlanar) + " --format json --out " + out), kExitOk);
    std::ifstream in(out);
    const auto j = Json::parse(in);
    EXPECT_EQ(j[0]["value"], "Nontrivial");
}

}  // namespace
}  // namespace qclass::cli
