/*
 * Copyright 2026 The e2ecov Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// End-to-end runs of the command-line binary.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "e2ecov/pipeline.hpp"
#include "e2ecov/serialize.hpp"

namespace e2ecov {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures(E2ECOV_FIXTURES);
const fs::path kExample = kFixtures / "worked_example";
const fs::path kCase = kFixtures / "case_study";

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("e2ecov_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the binary and returns its exit status; stderr lands in err_.
  int run(const std::string& args) {
    std::string cmd = std::string("'") + E2ECOV_CLI + "' " + args + " >'" + (dir_ / "stdout").string() + "' 2>'" +
                      (dir_ / "stderr").string() + "'";
    int raw = std::system(cmd.c_str());
    out_ = read_file(dir_ / "stdout");
    err_ = read_file(dir_ / "stderr");
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  }

  std::string example_args(const fs::path& out) const {
    return "--inventory '" + (kExample / "inventory.json").string() + "' --traces '" + (kExample / "calls.jsonl").string() +
           "' --manifest '" + (kExample / "manifest.json").string() + "' --out '" + out.string() + "'";
  }

  std::string case_args(const fs::path& out) const {
    return "--inventory '" + (kCase / "inventory.json").string() + "' --format skywalking-es --traces '" +
           (kCase / "traces.es.jsonl").string() + "' --manifest '" + (kCase / "manifest.json").string() +
           "' --gateway-service ts-gateway-service --out '" + out.string() + "'";
  }

  fs::path dir_;
  std::string out_;
  std::string err_;
};

const char* const kReports[] = {"coverage.json", "coverage.txt", "coverage.dot", "coverage.html"};

TEST_F(Cli, AnalyzeWritesEveryOutput) {
  ASSERT_EQ(run("analyze " + example_args(dir_ / "out")), 0) << err_;
  EXPECT_NE(out_.find("suite coverage 66.67% (4/6 endpoints)"), std::string::npos) << out_;
  for (const char* f : kReports) EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  for (const char* f : {"inventory.json", "tests.json", "calls/0000.jsonl", "calls/0001.jsonl", "orphans.jsonl",
                        "match_audit.jsonl"})
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  EXPECT_FALSE(fs::exists(dir_ / "out" / ".e2ecov.lock"));
  auto doc = read_json_file(dir_ / "out" / "coverage.json");
  EXPECT_NEAR(doc.at("suite_coverage").get<double>(), 4.0 / 6.0, 1e-12);
}

TEST_F(Cli, CheckGatesOnThreshold) {
  EXPECT_EQ(run("check " + example_args(dir_ / "a") + " --min-suite-coverage 50"), 0) << err_;
  EXPECT_NE(out_.find("PASS"), std::string::npos);
  EXPECT_EQ(run("check " + example_args(dir_ / "b") + " --min-suite-coverage 66.68"), 1);
  EXPECT_NE(out_.find("FAIL"), std::string::npos);
  EXPECT_EQ(run("check " + case_args(dir_ / "c") + " --min-suite-coverage 50"), 1) << err_;
  EXPECT_EQ(run("check " + example_args(dir_ / "d")), 2);
}

TEST_F(Cli, BadInputExitsWithTwo) {
  EXPECT_EQ(run("analyze --inventory /nonexistent.json --out '" + (dir_ / "o").string() + "'"), 2);
  EXPECT_NE(err_.find("error:"), std::string::npos);
  write_file(dir_ / "broken.json", "{");
  EXPECT_EQ(run("extract --inventory '" + (dir_ / "broken.json").string() + "' --out '" + (dir_ / "o").string() + "'"),
            2);
  EXPECT_EQ(run("analyze " + example_args(dir_ / "o") + " --format csv"), 2);
  EXPECT_EQ(run("analyze " + example_args(dir_ / "o") + " --color-scale 10:red"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("analyze --out '" + (dir_ / "empty").string() + "'"), 2);
}

TEST_F(Cli, StagesComposeIntoTheOneShotResult) {
  fs::path staged = dir_ / "staged";
  fs::path oneshot = dir_ / "oneshot";
  ASSERT_EQ(run("extract --inventory '" + (kExample / "inventory.json").string() + "' --out '" + staged.string() + "'"),
            0)
      << err_;
  ASSERT_EQ(run("ingest --traces '" + (kExample / "calls.jsonl").string() + "' --manifest '" +
                (kExample / "manifest.json").string() + "' --out '" + staged.string() + "'"),
            0)
      << err_;
  ASSERT_EQ(run("analyze --out '" + staged.string() + "'"), 0) << err_;
  ASSERT_EQ(run("analyze " + example_args(oneshot)), 0) << err_;
  for (const char* f : kReports) EXPECT_EQ(read_file(staged / f), read_file(oneshot / f)) << f;

  ASSERT_EQ(run("analyze --from-cache " + example_args(staged)), 0) << err_;
  for (const char* f : kReports) EXPECT_EQ(read_file(staged / f), read_file(oneshot / f)) << f;
}

TEST_F(Cli, FromCacheReusesAFreshInventory) {
  fs::path out = dir_ / "out";
  ASSERT_EQ(run("analyze " + example_args(out)), 0) << err_;
  // A hand-edited stage output survives only while its inputs are unchanged.
  auto inv = read_json_file(out / "inventory.json");
  inv["services"][1]["endpoints"].erase(0);
  write_file(out / "inventory.json", dump_canonical(inv));
  ASSERT_EQ(run("analyze --from-cache " + example_args(out)), 0) << err_;
  EXPECT_NE(out_.find("/5 endpoints"), std::string::npos) << out_;
  ASSERT_EQ(run("analyze " + example_args(out)), 0) << err_;
  EXPECT_NE(out_.find("/6 endpoints"), std::string::npos) << out_;
}

TEST_F(Cli, RepeatedRunsAreByteIdentical) {
  fs::path out = dir_ / "out";
  ASSERT_EQ(run("analyze " + case_args(out)), 0) << err_;
  std::map<std::string, std::string> first;
  for (const char* f : kReports) first[f] = read_file(out / f);
  ASSERT_EQ(run("analyze " + case_args(out)), 0) << err_;
  for (const char* f : kReports) EXPECT_EQ(read_file(out / f), first[f]) << f;
}

TEST_F(Cli, ConfigFileWithCommandLineOverride) {
  write_file(dir_ / "e2ecov.conf", "# example run\n"
                                   "inventory = " + (kExample / "inventory.json").string() + "\n"
                                   "traces = " + (kExample / "calls.jsonl").string() + "\n"
                                   "manifest = " + (kExample / "manifest.json").string() + "\n"
                                   "out = " + (dir_ / "from-config").string() + "\n"
                                   "min-suite-coverage = 90\n");
  std::string conf = "--config '" + (dir_ / "e2ecov.conf").string() + "'";
  EXPECT_EQ(run("check " + conf), 1) << err_;
  EXPECT_TRUE(fs::exists(dir_ / "from-config" / "coverage.json"));
  EXPECT_EQ(run("check " + conf + " --min-suite-coverage 60 --out '" + (dir_ / "cli").string() + "'"), 0) << err_;
  EXPECT_TRUE(fs::exists(dir_ / "cli" / "coverage.json"));
  write_file(dir_ / "bad.conf", "colour = red\n");
  EXPECT_EQ(run("analyze --config '" + (dir_ / "bad.conf").string() + "'"), 2);
}

TEST_F(Cli, GatewayOverrideChangesTheUniverse) {
  ASSERT_EQ(run("analyze " + example_args(dir_ / "out") + " --gateway-service MS-3"), 0) << err_;
  EXPECT_NE(out_.find("(3/4 endpoints)"), std::string::npos) << out_;
}

TEST_F(Cli, LiveLockBlocksAndStaleLockIsTakenOver) {
  fs::path out = dir_ / "out";
  fs::create_directories(out);
  write_file(out / ".e2ecov.lock", std::to_string(::getpid()) + "\n");
  EXPECT_EQ(run("analyze " + example_args(out)), 2);
  EXPECT_NE(err_.find("lock"), std::string::npos) << err_;
  // pid_max on Linux is at most 2^22.
  write_file(out / ".e2ecov.lock", "99999999\n");
  EXPECT_EQ(run("analyze " + example_args(out)), 0) << err_;
  EXPECT_NE(err_.find("warning:"), std::string::npos);
  EXPECT_FALSE(fs::exists(out / ".e2ecov.lock"));
}

TEST(OutputLock, SecondHolderInSameProcessFails) {
  fs::path out = fs::temp_directory_path() / ("e2ecov_lock_" + std::to_string(::getpid()));
  fs::create_directories(out);
  Diagnostics diag;
  {
    OutputLock lock(out, diag);
    EXPECT_THROW(OutputLock(out, diag), InputError);
  }
  EXPECT_NO_THROW(OutputLock(out, diag));
  fs::remove_all(out);
}

}  // namespace
}  // namespace e2ecov
