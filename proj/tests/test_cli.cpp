#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string data(const char* name) { return (fs::path(DRM_TEST_DATA) / name).string(); }

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = drm::cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
    args.insert(args.begin(), "--json");
    const CliRun r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return json::parse(r.out);
}

}  // namespace

TEST(cli, iphone_stockout_with_calibrated_radius) {
    const json j = run_json({"bound", "--kind", "uzpm", "--data", data("iphone.csv"), "--tau-quantile", "0.9",
                             "--beta", "0.95", "--r", "231", "--method", "dd"});
    EXPECT_NEAR(j["bound"].get<double>(), 0.38, 0.01);
    EXPECT_NEAR(j["classical"].get<double>(), 0.424, 5e-3);
    EXPECT_NEAR(j["problem"]["tau"].get<double>(), 221.77, 1e-2);
    EXPECT_NEAR(j["delta"].get<double>(), 289.4, 0.5);
}

TEST(cli, two_point_lower_tail_saturates) {
    const json j = run_json({"bound", "--kind", "lzpm", "--data", data("twopoint.csv"), "--tau", "11", "--delta", "2.0"});
    EXPECT_NEAR(j["bound"].get<double>(), 1.0, 1e-6);
}

TEST(cli, inconsistent_moments_exit_infeasible) {
    const CliRun r = run({"bound", "--kind", "lzpm", "--delta", "0", "--mu", "0", "--sigma", "1", "--data",
                       data("twopoint.csv"), "--tau", "0"});
    EXPECT_EQ(r.code, drm::cli::kInfeasible);
}

TEST(cli, usage_errors) {
    EXPECT_EQ(run({"bound", "--kind", "lzpm", "--data", data("twopoint.csv"), "--delta", "1"}).code,
              drm::cli::kUsage);  // no tau
    EXPECT_EQ(run({"bound", "--kind", "nope", "--data", data("twopoint.csv"), "--tau", "1", "--delta", "1"}).code,
              drm::cli::kUsage);
    EXPECT_EQ(run({"bound", "--kind", "lzpm", "--data", data("twopoint.csv"), "--tau", "1", "--delta", "1", "--beta",
                   "0.9"})
                  .code,
              drm::cli::kUsage);
    EXPECT_EQ(run({"trajectory", "--kind", "lzpm", "--data", data("twopoint.csv"), "--tau", "11", "--delta-range",
                   "2:1:3"})
                  .code,
              drm::cli::kUsage);
    EXPECT_EQ(run({"trajectory", "--kind", "lzpm", "--data", data("twopoint.csv"), "--tau", "11"}).code,
              drm::cli::kUsage);
    EXPECT_EQ(run({"frobnicate"}).code, drm::cli::kUsage);
}

TEST(cli, lower_tail_trajectory) {
    const json j = run_json({"trajectory", "--kind", "lzpm", "--data", data("twopoint.csv"), "--tau", "11",
                             "--deltas", "2.0,0.1,0.5,1.0,1.5"});
    const double expected[] = {0.589, 0.8043, 0.9286, 0.9839, 1.0};
    ASSERT_EQ(j["rows"].size(), 5u);
    EXPECT_TRUE(j["complete"].get<bool>());
    double last = -1;
    for (std::size_t k = 0; k < 5; ++k) {
        const json& row = j["rows"][k];
        EXPECT_NEAR(row["bound"].get<double>(), expected[k], 5e-4);
        EXPECT_GT(row["delta"].get<double>(), last);
        EXPECT_LE(row["bound"].get<double>(), row["classical"].get<double>() + 1e-6);
        last = row["delta"].get<double>();
    }
}

TEST(cli, trajectory_csv_rows) {
    const CliRun r = run({"trajectory", "--kind", "uzpm", "--data", data("twopoint.csv"), "--tau", "11.5",
                       "--delta-range", "0.1:1.0:4"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    EXPECT_EQ(lines, 5);
}

TEST(cli, both_methods_agree) {
    const json j = run_json({"--grid", "400x400", "bound", "--kind", "uzpm", "--data", data("twopoint.csv"), "--tau",
                             "11.5", "--delta", "0.5", "--method", "both"});
    EXPECT_NEAR(j["dd"].get<double>(), j["sm"].get<double>(), 1e-3);
}

TEST(cli, both_methods_mismatch_is_a_solver_failure) {
    // a 4x4 grid is far too coarse to resolve the optimum
    const CliRun r = run({"--grid", "4x4", "bound", "--kind", "uzpm", "--data", data("twopoint.csv"), "--tau", "11.5",
                       "--delta", "0.5", "--method", "both"});
    EXPECT_EQ(r.code, drm::cli::kSolverFailure);
    EXPECT_FALSE(r.err.empty());
}

TEST(cli, calibrate) {
    const json j = run_json({"calibrate", "--n", "60", "--r", "30", "--beta", "0.95"});
    EXPECT_NEAR(j["delta"].get<double>(), 15.4, 0.8);
}

TEST(cli, classical) {
    const CliRun r = run({"classical", "--kind", "ufpm", "--mu", "122.345", "--sigma", "85.326", "--tau", "221.77"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(std::stod(r.out), 15.80, 0.05);
}

TEST(cli, wasserstein_self_distance) {
    const CliRun r = run({"wasserstein", data("iphone.csv"), data("iphone.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(std::stod(r.out), 0.0);
}

TEST(cli, sqrt_reporting) {
    const json raw = run_json({"bound", "--kind", "uspm", "--data", data("twopoint.csv"), "--tau", "11", "--delta", "0.3"});
    const json root =
        run_json({"bound", "--kind", "uspm", "--data", data("twopoint.csv"), "--tau", "11", "--delta", "0.3", "--sqrt"});
    EXPECT_NEAR(root["bound"].get<double>(), std::sqrt(raw["bound"].get<double>()), 1e-12);
    EXPECT_EQ(root["scale"], "sqrt");
}

TEST(cli, json_round_trip) {
    const CliRun r = run({"--json", "bound", "--kind", "lfpm", "--data", data("twopoint.csv"), "--tau", "11.2", "--delta",
                       "0.4"});
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    for (const char* key : {"problem", "delta", "bound", "classical", "method", "runtime_ms"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(json::parse(j.dump()), j);
    EXPECT_EQ(j.dump() + "\n", r.out);
}

TEST(cli, oracle_sandwich) {
    const json j = run_json({"--seed", "3", "oracle", "--kind", "uzpm", "--data", data("twopoint.csv"), "--tau", "11.5",
                             "--delta", "0.5", "--step", "0.05"});
    EXPECT_LE(j["primal_lp"].get<double>(), j["dd"].get<double>() + 1e-7);
    EXPECT_LE(j["dd"].get<double>(), j["dual_lattice"].get<double>() + 1e-7);
}
