// Copyright 2026 The QVPG Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qvpg/cli.hpp"

namespace qvpg::cli {
namespace {

const std::string kIris = std::string(QVPG_DATA_DIR) + "/iris.csv";

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qvpg_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    RunOptions Options(const std::string &sub, std::size_t epochs) const {
        RunOptions o;
        o.data_path = kIris;
        o.out_dir = (dir_ / sub).string();
        o.config.epochs = epochs;
        return o;
    }

    static std::string Read(const fs::path &p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static std::size_t Lines(const fs::path &p) {
        std::ifstream in(p);
        std::size_t n = 0;
        std::string line;
        while (std::getline(in, line)) ++n;
        return n;
    }

    fs::path dir_;
};

TEST_F(CliTest, GroverReportsPerfectSearchOnTwoQubits) {
    std::ostringstream out, err;
    EXPECT_EQ(cmd_grover({2, {2}, std::nullopt, 0, 1}, out, err), kExitOk);
    EXPECT_NE(out.str().find("optimal_iterations 1"), std::string::npos);
    EXPECT_NE(out.str().find("\n1,1.000000,"), std::string::npos);
}

TEST_F(CliTest, GroverThreeQubits) {
    std::ostringstream out, err;
    EXPECT_EQ(cmd_grover({3, {5}, std::nullopt, 100, 7}, out, err), kExitOk);
    EXPECT_NE(out.str().find("\n2,0.945312,"), std::string::npos) << out.str();
    EXPECT_NE(out.str().find("counts after 2 iterations"), std::string::npos);
}

TEST_F(CliTest, GroverRejectsFullMarkedSet) {
    std::ostringstream out, err;
    EXPECT_EQ(cmd_grover({2, {0, 1, 2, 3}, std::nullopt, 0, 1}, out, err), kExitUsage);
    EXPECT_FALSE(err.str().empty());
}

TEST_F(CliTest, TrainWritesArtifacts) {
    std::ostringstream out, err;
    const auto opts = Options("run", 4);
    ASSERT_EQ(cmd_train(trainer::ModelKind::QVP, opts, out, err), kExitOk) << err.str();
    const fs::path run = opts.out_dir;
    EXPECT_EQ(Lines(run / "metrics.csv"), 5U);
    EXPECT_EQ(Read(run / "metrics.csv").rfind("iter,acc_train,acc_valid,loss_train\n", 0), 0U);

    const auto manifest = nlohmann::json::parse(Read(run / "manifest.json"));
    EXPECT_EQ(manifest["command"], "train");
    EXPECT_EQ(manifest["model"], "qvp");
    EXPECT_EQ(manifest["config"]["epochs"], 4);
    EXPECT_EQ(manifest["config"]["seed"], 42);
    EXPECT_TRUE(manifest.contains("timestamp"));

    const auto model = nlohmann::json::parse(Read(run / "final_model.json"));
    EXPECT_EQ(model["kind"], "qvp");
    EXPECT_EQ(model["shape"], nlohmann::json({2, 2, 3}));
    EXPECT_EQ(model["angles"].size(), 12U);
    EXPECT_FALSE(fs::exists(run / "metrics.csv.tmp"));
}

TEST_F(CliTest, TrainPerceptronModelFile) {
    std::ostringstream out, err;
    const auto opts = Options("cp", 10);
    ASSERT_EQ(cmd_train(trainer::ModelKind::CP, opts, out, err), kExitOk) << err.str();
    const auto model = nlohmann::json::parse(Read(fs::path(opts.out_dir) / "final_model.json"));
    EXPECT_EQ(model["kind"], "cp");
    EXPECT_EQ(model["w"].size(), 4U);
    EXPECT_TRUE(model.contains("b"));
}

TEST_F(CliTest, TrainIsBitIdenticalAcrossRepeats) {
    std::ostringstream out, err;
    const auto a = Options("a", 100);
    const auto b = Options("b", 100);
    ASSERT_EQ(cmd_train(trainer::ModelKind::QVP, a, out, err), kExitOk);
    ASSERT_EQ(cmd_train(trainer::ModelKind::QVP, b, out, err), kExitOk);
    EXPECT_EQ(Lines(fs::path(a.out_dir) / "metrics.csv"), 101U);
    EXPECT_EQ(Read(fs::path(a.out_dir) / "metrics.csv"), Read(fs::path(b.out_dir) / "metrics.csv"));
}

TEST_F(CliTest, GroverBlockHelpsOnGoldenSeed) {
    std::ostringstream out, err;
    const auto q = Options("qvp", 100);
    const auto g = Options("qvpg", 100);
    ASSERT_EQ(cmd_train(trainer::ModelKind::QVP, q, out, err), kExitOk);
    ASSERT_EQ(cmd_train(trainer::ModelKind::QVPG, g, out, err), kExitOk);
    auto last_valid = [](const fs::path &p) {
        std::ifstream in(p);
        std::string line, last;
        while (std::getline(in, line)) last = line;
        std::stringstream ss(last);
        std::string field;
        for (int i = 0; i < 3; ++i) std::getline(ss, field, ',');
        return std::stod(field);
    };
    EXPECT_GE(last_valid(fs::path(g.out_dir) / "metrics.csv"),
              last_valid(fs::path(q.out_dir) / "metrics.csv"));
}

TEST_F(CliTest, TrainMissingDataIsUsageError) {
    std::ostringstream out, err;
    auto opts = Options("missing", 2);
    opts.data_path = (dir_ / "missing.csv").string();
    EXPECT_EQ(cmd_train(trainer::ModelKind::CP, opts, out, err), kExitUsage);
    EXPECT_NE(err.str().find("cannot open"), std::string::npos);
}

TEST_F(CliTest, CompareWritesCombinedOutputs) {
    std::ostringstream out, err;
    CompareOptions opts;
    opts.run = Options("cmp", 12);
    opts.seeds = {1};
    ASSERT_EQ(cmd_compare(opts, out, err), kExitOk) << err.str();
    const fs::path run = opts.run.out_dir;
    EXPECT_EQ(Lines(run / "comparison.csv"), 1U + 3U * 12U);
    for (const char *model : {"cp", "qvp", "qvpg"}) {
        EXPECT_EQ(Lines(run / (std::string("loss_") + model + ".dat")), 13U);
    }
    const std::string table = Read(run / "table.txt");
    EXPECT_NE(table.find("\n1 "), std::string::npos);
    EXPECT_NE(table.find("\n10 "), std::string::npos);
    EXPECT_NE(table.find("\n12 "), std::string::npos);
    const auto manifest = nlohmann::json::parse(Read(run / "manifest.json"));
    EXPECT_EQ(manifest["seeds"], nlohmann::json({1}));
}

TEST_F(CliTest, UnwritableOutputIsUsageError) {
    std::ofstream(dir_ / "plain_file") << "x";
    std::ostringstream out, err;
    CompareOptions opts;
    opts.run = Options("unused", 2);
    opts.run.out_dir = (dir_ / "plain_file" / "sub").string();
    opts.seeds = {1};
    EXPECT_EQ(cmd_compare(opts, out, err), kExitUsage);
}

TEST(Median, OddAndEven) {
    EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
    EXPECT_DOUBLE_EQ(median({4, 1, 2, 3}), 2.5);
    EXPECT_THROW(median({}), ArgumentError);
}

TEST(TableIterations, OneTenThenEveryFive) {
    const auto it = table_iterations(100);
    EXPECT_EQ(it.front(), 1U);
    EXPECT_EQ(it[1], 10U);
    EXPECT_EQ(it[2], 15U);
    EXPECT_EQ(it.back(), 100U);
    EXPECT_EQ(it.size(), 20U);
}

// End-to-end through the real executable: exit codes are the scripting contract.
int RunCli(const std::string &args) {
    const std::string cmd = std::string(QVPG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(CliTest, ExecutableExitCodes) {
    EXPECT_EQ(RunCli("grover --qubits 2 --marked 2"), 0);
    EXPECT_EQ(RunCli("grover --qubits 2 --marked 0,1,2,3"), 2);
    EXPECT_EQ(RunCli("grover --qubits 2 --marked two"), 2);
    EXPECT_EQ(RunCli("train cp --data " + (dir_ / "missing.csv").string()), 2);
    EXPECT_EQ(RunCli("train nope --data " + kIris), 2);
    EXPECT_EQ(RunCli("train cp --data " + kIris + " --classes setosa"), 2);
    EXPECT_EQ(RunCli("train cp --data " + kIris + " --epochs 3 --out " + (dir_ / "exe").string()), 0);
    EXPECT_TRUE(fs::exists(dir_ / "exe" / "metrics.csv"));
    EXPECT_EQ(RunCli("train qvp --data " + kIris + " --epochs 2 --batch 1000 --out " +
                     (dir_ / "exe2").string()),
              2);
}

} // namespace
} // namespace qvpg::cli
