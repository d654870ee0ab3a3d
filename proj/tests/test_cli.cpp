// Copyright 2026 The pqk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "json.hpp"
#include "pqk/errors.hpp"
#include "pqk/random.hpp"

namespace pqk::cli {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("pqk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        SeededRng rng(1);
        std::ofstream csv(dir_ / "data.csv");
        csv << "illuminance,blinds,lamps,rh,co2,temp,occupancy\n";
        for (int i = 0; i < 40; ++i) {
            const int y = i % 2;
            for (int j = 0; j < 6; ++j) csv << (y * 2.0 + rng.uniform()) << ",";
            csv << y << "\n";
        }
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(std::vector<std::string> args) {
        out_.str("");
        err_.str("");
        return run_cli(args, out_, err_);
    }

    std::string data() const { return "--dataset.path=" + (dir_ / "data.csv").string(); }
    std::string output(const std::string &name) const { return "--output_dir=" + (dir_ / name).string(); }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

TEST(ParseConfig, MinimalConfigGetsDefaults) {
    const auto config = parse_config("", R"({"command": "cv", "dataset": {"path": "x.csv"}})", {});
    EXPECT_EQ(config.command, "cv");
    EXPECT_EQ(config.dataset.path, "x.csv");
    EXPECT_EQ(config.dataset.label_column, "occupancy");
    EXPECT_EQ(config.dataset.columns.columns.size(), 6u);
    EXPECT_EQ(config.kernel.kind, KernelKind::PQK);
    EXPECT_EQ(config.kernel.feature_map.family, FeatureMapFamily::ThreeD);
    EXPECT_TRUE(config.kernel.feature_map.with_cnot_ring);
    EXPECT_EQ(config.kernel.feature_map.n_qubits, 6);
    EXPECT_EQ(config.kernel.strategy, ProjectionMode::M2);
    EXPECT_FALSE(config.kernel.shots.has_value());
    EXPECT_EQ(config.svm.C, 1.0);
    EXPECT_EQ(config.cv.folds, 10);
    EXPECT_EQ(config.cv.scaling, ScalingMode::Global);
    EXPECT_EQ(config.seed, 42u);
    EXPECT_EQ(config.jobs, 1);
    EXPECT_TRUE(config.c_grid.empty());
    EXPECT_EQ(config.config_hash.size(), 16u);
}

TEST(ParseConfig, FlagsOverrideFile) {
    const auto config = parse_config("cv", R"({"seed": 3, "dataset": {"path": "x.csv"}})", {"--seed=7"});
    EXPECT_EQ(config.seed, 7u);
    EXPECT_EQ(config.resolved["seed"], 7);
}

TEST(ParseConfig, UnknownKeySuggestsNearest) {
    for (const char *text : {R"({"kernel": {"gama": 0.1}})", R"({"gama": 0.1})"}) {
        try {
            parse_config("validate", text, {});
            FAIL() << "expected ConfigError";
        } catch (const ConfigError &e) {
            const std::string message = e.what();
            EXPECT_NE(message.find("gama"), std::string::npos) << message;
            EXPECT_NE(message.find("\"gamma\""), std::string::npos) << message;
        }
    }
    EXPECT_THROW(parse_config("validate", "", {"--kernel.gama=1"}), ConfigError);
}

TEST(ParseConfig, TypeMismatchNamesPath) {
    try {
        parse_config("validate", R"({"kernel": {"feature_map": {"n_qubits": "six"}}})", {});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("kernel.feature_map.n_qubits"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_config("validate", "", {"--svm.C=abc"}), ConfigError);
    EXPECT_THROW(parse_config("validate", R"({"svm": 3})", {}), ConfigError);
}

TEST(ParseConfig, SemanticValidation) {
    const std::string base = R"({"dataset": {"path": "x.csv"}})";
    EXPECT_THROW(parse_config("cv", base, {"--svm.C=-1"}), ConfigError);
    EXPECT_THROW(parse_config("cv", base, {"--kernel.kind=Linear"}), ConfigError);
    EXPECT_THROW(parse_config("cv", base, {"--kernel.feature_map.family=rotx"}), ConfigError);
    EXPECT_THROW(parse_config("cv", base, {"--kernel.feature_map.n_qubits=5"}), ConfigError);
    EXPECT_THROW(parse_config("cv", base, {"--cv.folds=1"}), ConfigError);
    EXPECT_THROW(parse_config("cv", base, {"--cv.scaling=none"}), ConfigError);
    EXPECT_THROW(parse_config("cv", base, {"--cv.interval=[1,0]"}), ConfigError);
    EXPECT_THROW(parse_config("cv", base, {"--kernel.kind=RBF", "--kernel.shots=10"}), ConfigError);
    EXPECT_THROW(parse_config("cv", base, {"--jobs=0"}), ConfigError);
    EXPECT_THROW(parse_config("cv", base, {"--gram.format=xml"}), ConfigError);
    EXPECT_THROW(parse_config("cv", "", {}), ConfigError);  // dataset.path required
    EXPECT_THROW(parse_config("cv", "[1, 2]", {}), ConfigError);
    EXPECT_THROW(parse_config("cv", "{oops", {}), ConfigError);
    EXPECT_THROW(parse_config("cv", base, {"--seed"}), ConfigError);
    EXPECT_NO_THROW(parse_config("cv", base, {"--grid.C=[1, 10]", "--kernel.shots=100", "--cv.scaling=fold"}));
}

TEST(ParseConfig, HashIgnoresJobsAndOutputDirOnly) {
    const std::string base = R"({"dataset": {"path": "x.csv"}})";
    const auto a = parse_config("cv", base, {});
    EXPECT_EQ(a.config_hash, parse_config("cv", base, {"--jobs=4", "--output_dir=elsewhere"}).config_hash);
    EXPECT_NE(a.config_hash, parse_config("cv", base, {"--seed=1"}).config_hash);
}

TEST(ParseConfig, EditDistance) {
    EXPECT_EQ(edit_distance("gama", "gamma"), 1u);
    EXPECT_EQ(edit_distance("", "abc"), 3u);
    EXPECT_EQ(edit_distance("kitten", "sitting"), 3u);
}

TEST(ExitStatus, Mapping) {
    EXPECT_EQ(exit_status(ErrorCategory::Config), 2);
    EXPECT_EQ(exit_status(ErrorCategory::Ingestion), 3);
    EXPECT_EQ(exit_status(ErrorCategory::Degenerate), 3);
    EXPECT_EQ(exit_status(ErrorCategory::Convergence), 4);
    EXPECT_EQ(exit_status(ErrorCategory::Internal), 5);
}

TEST_F(CliTest, MissingDatasetIsIngestionError) {
    EXPECT_EQ(run({"cv", "--dataset.path=" + (dir_ / "missing.csv").string(), output("o")}), kExitIngestion);
    EXPECT_NE(err_.str().find("ingestion"), std::string::npos);
}

TEST_F(CliTest, ConfigErrorsExitWithConfigStatus) {
    EXPECT_EQ(run({"cv", data(), "--kernel.gama=1"}), kExitConfig);
    EXPECT_NE(err_.str().find("gamma"), std::string::npos);
    EXPECT_EQ(run({"nonsense"}), kExitConfig);
    EXPECT_EQ(run({"cv", "--config", (dir_ / "absent.json").string()}), kExitConfig);
    EXPECT_EQ(run({"cv", data(), "stray"}), kExitConfig);
}

TEST_F(CliTest, ConvergenceErrorExitStatus) {
    EXPECT_EQ(run({"cv", data(), output("o"), "--svm.max_iterations=1", "--kernel.kind=RBF"}), kExitConvergence);
}

TEST_F(CliTest, ConfigFileAndSpaceSeparatedFlags) {
    std::ofstream(dir_ / "c.json") << R"({"seed": 3, "kernel": {"kind": "RBF"}})";
    ASSERT_EQ(run({"cv", "--config", (dir_ / "c.json").string(), data(), output("o"), "--seed", "7"}), kExitOk)
        << err_.str();
    const auto echo = nlohmann::json::parse(read_file(dir_ / "o" / "resolved_config.json"));
    EXPECT_EQ(echo["seed"], 7);
    EXPECT_EQ(echo["config"]["kernel"]["kind"], "RBF");
    EXPECT_EQ(echo["tool_version"], PQK_VERSION_STRING);
}

TEST_F(CliTest, GramIsByteIdenticalAcrossRuns) {
    ASSERT_EQ(run({"gram", data(), output("a")}), kExitOk) << err_.str();
    EXPECT_EQ(out_.str().rfind("min_eigenvalue ", 0), 0u);
    ASSERT_EQ(run({"gram", data(), output("b"), "--jobs=3"}), kExitOk);
    const auto a = read_file(dir_ / "a" / "gram.csv");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, read_file(dir_ / "b" / "gram.csv"));
    EXPECT_EQ(a.rfind("# pqk ", 0), 0u);
}

TEST_F(CliTest, BinaryGramHasMetadataSidecar) {
    ASSERT_EQ(run({"gram", data(), output("g"), "--gram.format=binary"}), kExitOk);
    EXPECT_EQ(read_file(dir_ / "g" / "gram.bin").size(), 4u + 8u + 40u * 40u * 8u);
    const auto meta = nlohmann::json::parse(read_file(dir_ / "g" / "gram.meta.json"));
    EXPECT_EQ(meta["size"], 40);
    EXPECT_EQ(meta["seed"], 42);
    EXPECT_TRUE(meta.contains("config_hash"));
}

TEST_F(CliTest, CvResultsSchema) {
    ASSERT_EQ(run({"cv", data(), output("o"), "--cv.folds=4"}), kExitOk) << err_.str();
    const auto doc = nlohmann::json::parse(read_file(dir_ / "o" / "results.json"));
    EXPECT_EQ(doc["experiment"], "cv");
    EXPECT_EQ(doc["seed"], 42);
    EXPECT_EQ(doc["config_hash"].get<std::string>().size(), 16u);
    ASSERT_EQ(doc["rows"].size(), 1u);
    const auto &row = doc["rows"][0];
    EXPECT_EQ(row["kernel"], "PQK");
    EXPECT_EQ(row["feature_map"], "ThreeD+ring");
    EXPECT_EQ(row["strategy"], "M2");
    EXPECT_EQ(row["fold_accuracies"].size(), 4u);
    for (const char *key : {"C", "gamma", "mean", "ci95_half_width"}) EXPECT_TRUE(row[key].is_number()) << key;
}

TEST_F(CliTest, GridSearchReportsTableAndBest) {
    ASSERT_EQ(run({"grid-search", data(), output("o"), "--kernel.kind=RBF", "--grid.C=[1,10]",
                   "--grid.gamma=[0.1,1,10]", "--cv.folds=4"}),
              kExitOk)
        << err_.str();
    const auto doc = nlohmann::json::parse(read_file(dir_ / "o" / "results.json"));
    EXPECT_EQ(doc["rows"].size(), 6u);
    EXPECT_TRUE(doc["rows"][0]["strategy"].is_null());
    EXPECT_TRUE(doc.contains("best"));
}

TEST_F(CliTest, ShotSweepWritesCsv) {
    ASSERT_EQ(run({"shot-sweep", data(), output("o"), "--sweep.shots=[16,256]", "--cv.folds=4"}), kExitOk)
        << err_.str();
    const auto csv = read_file(dir_ / "o" / "shot_sweep.csv");
    EXPECT_NE(csv.find("\nshots,mean_accuracy,ci_half_width\n16,"), std::string::npos) << csv;
    const auto doc = nlohmann::json::parse(read_file(dir_ / "o" / "results.json"));
    EXPECT_EQ(doc["rows"][1]["shots"], 256);
    EXPECT_TRUE(doc.contains("exact"));
}

TEST_F(CliTest, EncodeWritesProjectedFeatures) {
    ASSERT_EQ(run({"encode", data(), output("o"), "--kernel.strategy=M1"}), kExitOk) << err_.str();
    const auto csv = read_file(dir_ / "o" / "features.csv");
    EXPECT_NE(csv.find("\nindex,label,X0,Y0,Z0,X1"), std::string::npos);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 42);
    EXPECT_EQ(run({"encode", data(), output("o"), "--kernel.kind=RBF"}), kExitConfig);
}

TEST_F(CliTest, ValidateIsDeterministic) {
    ASSERT_EQ(run({"validate", output("a"), "--seed=5"}), kExitOk) << out_.str();
    ASSERT_EQ(run({"validate", output("b"), "--seed=5"}), kExitOk);
    const auto a = read_file(dir_ / "a" / "validate.json");
    EXPECT_EQ(a, read_file(dir_ / "b" / "validate.json"));
    EXPECT_EQ(nlohmann::json::parse(a)["checks"].size(), 7u);
}

}  // namespace
}  // namespace pqk::cli
