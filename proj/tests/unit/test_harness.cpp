/*
 * Copyright 2026 The cpwalk Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpwalk/errors.hpp"
#include "cpwalk/harness.hpp"
#include "cpwalk/oracles.hpp"

using namespace cpwalk;

namespace {

const char* kKernel = R"(
[kernel]
rates = [
  { state = 1, z = [1], rate = 2.0 },
  { state = 0, z = [-1], rate = 1.0 },
]
)";

std::pair<ErrorCode, std::string> error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        return {e.code(), e.what()};
    }
    ADD_FAILURE() << "config accepted:\n" << text;
    return {ErrorCode::invalid_argument, ""};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("cpwalk_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    args.insert(args.begin(), "cpwalk");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    CliHooks hooks;
    hooks.oracle_check = [](std::uint64_t seed, std::size_t n, std::ostream& log) {
        return oracle::oracle_check(seed, n, log);
    };
    const int rc = run_cli(int(argv.size()), argv.data(), hooks, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

} // namespace

TEST(Config, MinimalGetsDefaults) {
    const auto c = parse_config("[environment]\nlambda = 2.0\n");
    EXPECT_EQ(c.experiment, "exp");
    EXPECT_EQ(c.seed, 1u);
    EXPECT_EQ(c.replicas, 100u);
    EXPECT_DOUBLE_EQ(c.abort_budget, 0.01);
    EXPECT_DOUBLE_EQ(c.pad_factor, 4.0);
    EXPECT_EQ(c.boundary, Boundary::truncate);
    EXPECT_EQ(c.initial.law, InitialLaw::ones);
    EXPECT_FALSE(c.kernel.has_value());
    EXPECT_FALSE(c.radius.has_value());
    const std::string json = c.to_json();
    EXPECT_NE(json.find("\"radius_resolved\""), std::string::npos);
    EXPECT_NE(json.find("\"abort_budget\": 0.01"), std::string::npos);
}

TEST(Config, NegativeLambdaNamesTheField) {
    const auto [code, what] = error_of("[environment]\nlambda = -1.0\n");
    EXPECT_EQ(code, ErrorCode::validation_error);
    EXPECT_NE(what.find("environment.lambda"), std::string::npos) << what;
}

TEST(Config, OtherValidationErrors) {
    EXPECT_EQ(error_of("replicas = 0\n").first, ErrorCode::validation_error);
    EXPECT_NE(error_of("bogus = 1\n").second.find("bogus"), std::string::npos);
    EXPECT_NE(error_of("[environment]\nradius = 20\npad_factor = 2.0\n").second.find("pad_factor"), std::string::npos);
    EXPECT_EQ(error_of("[environment]\nradius = \"big\"\n").first, ErrorCode::validation_error);
    EXPECT_EQ(error_of("[environment]\ninitial = \"bernoulli(1.5)\"\n").first, ErrorCode::validation_error);
    EXPECT_EQ(error_of("[grids]\nt = []\n").first, ErrorCode::validation_error);
    EXPECT_EQ(error_of("[grids]\nK = [0]\n").first, ErrorCode::validation_error);
    EXPECT_EQ(error_of("[kernel]\nrates = [{ state = 1, z = [1], rate = -1.0 }, { state = 0, z = [1], rate = 1.0 }]\n")
                  .first,
              ErrorCode::validation_error);
    EXPECT_EQ(error_of("[environment]\ndimension = 2\n[density_lb]\nobserver = \"rightmost\"\n").first,
              ErrorCode::validation_error);
}

TEST(Config, ParseErrorHasLocation) {
    const auto [code, what] = error_of("seed = 3\nreplicas = = 4\n");
    EXPECT_EQ(code, ErrorCode::parse_error);
    EXPECT_NE(what.find("<string>:2:"), std::string::npos) << what;
    try {
        load_config("/nonexistent/config.toml");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::parse_error);
    }
}

TEST(Config, AutoRadiusSafetyRule) {
    const auto c = parse_config(std::string("[environment]\nlambda = 2.0\nradius = \"auto\"\npad_factor = 4.0\n") +
                                kKernel + "[grids]\nt = [50, 100]\n");
    EXPECT_DOUBLE_EQ(c.horizon, 100.0);
    EXPECT_GT(c.window, 0);
    EXPECT_GE(c.resolved_radius, 800 + c.window);
    EXPECT_EQ(c.resolved_radius, safety_radius(c.window, 2.0, 100.0, 4.0));
    EXPECT_NE(c.to_json().find("\"radius_resolved\": " + std::to_string(c.resolved_radius)), std::string::npos);
}

TEST(Config, ExplicitRadiusSetsThePad) {
    const auto c = parse_config(std::string("[environment]\nlambda = 2.0\nradius = 400\n") + kKernel +
                                "[grids]\nt = [100]\n");
    EXPECT_EQ(c.resolved_radius, 400);
    EXPECT_NEAR(c.pad_factor, double(400 - c.window) / 200.0, 1e-12);
}

TEST(Config, ExampleFilesLoad) {
    for (const auto& e : std::filesystem::recursive_directory_iterator(CPWALK_CONFIG_DIR)) {
        if (e.path().extension() != ".toml") continue;
        EXPECT_NO_THROW(load_config(e.path())) << e.path();
    }
}

TEST(Run, MissingGridIsAValidationError) {
    const auto c = parse_config(std::string("[environment]\nlambda = 2.0\n") + kKernel);
    try {
        run_estimator(Command::speed, c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::validation_error);
        EXPECT_NE(std::string(e.what()).find("grids.t"), std::string::npos);
    }
    const auto p = parse_config("[environment]\nboundary = \"periodic\"\n[grids]\nT = [2]\n");
    EXPECT_THROW(run_estimator(Command::coupling, p), Error);
}

TEST(Run, ReportIsDeterministicAcrossThreads) {
    const std::string text = std::string("experiment = \"det\"\nseed = 11\nreplicas = 24\n[environment]\nlambda = 2.0\n") +
                             kKernel + "[grids]\nt = [5, 10]\n";
    auto c = parse_config(text);
    c.threads = 1;
    const auto a = run_estimator(Command::speed, c);
    c.threads = 3;
    const auto b = run_estimator(Command::speed, c);
    EXPECT_EQ(report_json(Command::speed, c, a), report_json(Command::speed, c, b));
    EXPECT_EQ(replicas_csv(a), replicas_csv(b));
    const std::string csv = replicas_csv(a);
    EXPECT_EQ(csv.rfind("replica,rho[t=5],v0[t=5],res0[t=5],rho[t=10]", 0), 0u) << csv.substr(0, 80);
}

TEST(Run, ExitCodes) {
    EXPECT_EQ(exit_code(ErrorCode::parse_error), 5);
    EXPECT_EQ(exit_code(ErrorCode::validation_error), 5);
    EXPECT_EQ(exit_code(ErrorCode::inconclusive_fit), 3);
    EXPECT_EQ(exit_code(ErrorCode::abort_budget_exceeded), 4);
    EXPECT_EQ(exit_code(ErrorCode::resource_limit), 1);
    EstimatorOutput o;
    EXPECT_EQ(exit_code(o), 0);
    o.abort_budget_exceeded = true;
    EXPECT_EQ(exit_code(o), 4);
}

TEST(Cli, UsageErrorsExitTwo) {
    std::string err;
    EXPECT_EQ(cli({"speed", "--bogus"}, nullptr, &err), 2);
    EXPECT_NE(err.find("usage error"), std::string::npos);
    EXPECT_EQ(cli({}), 2);
    EXPECT_EQ(cli({"frobnicate"}), 2);
    EXPECT_EQ(cli({"speed"}), 2); // --config is required
    EXPECT_EQ(cli({"--help"}), 0);
}

TEST(Cli, ValidationErrorExitsFive) {
    const auto dir = scratch("bad");
    std::ofstream(dir / "bad.toml") << "[environment]\nlambda = -2.0\n";
    std::string err;
    EXPECT_EQ(cli({"speed", "--config", (dir / "bad.toml").string()}, nullptr, &err), 5);
    EXPECT_NE(err.find("environment.lambda"), std::string::npos);
    std::ofstream(dir / "broken.toml") << "seed = [\n";
    EXPECT_EQ(cli({"speed", "--config", (dir / "broken.toml").string()}), 5);
}

TEST(Cli, SpeedWritesThreeFilesAndRerunsIdentically) {
    const auto dir = scratch("speed");
    std::ofstream(dir / "c.toml") << "experiment = \"cli\"\nseed = 3\nreplicas = 10\n[environment]\nlambda = 2.0\n"
                                  << kKernel << "[grids]\nt = [5]\n";
    const std::string cfg = (dir / "c.toml").string();
    std::string out;
    ASSERT_EQ(cli({"speed", "--config", cfg, "--out", (dir / "a").string(), "--threads", "1"}, &out), 0);
    EXPECT_NE(out.find("speed"), std::string::npos);
    for (const char* f : {"manifest.json", "report.json", "replicas.csv"}) EXPECT_TRUE(std::filesystem::exists(dir / "a" / f));
    ASSERT_EQ(cli({"speed", "--config", cfg, "--out", (dir / "b").string(), "--threads", "2"}), 0);
    EXPECT_EQ(slurp(dir / "a" / "report.json"), slurp(dir / "b" / "report.json"));
    EXPECT_EQ(slurp(dir / "a" / "replicas.csv"), slurp(dir / "b" / "replicas.csv"));
    const std::string manifest = slurp(dir / "a" / "manifest.json");
    for (const char* key : {"\"argv\"", "\"streams\"", "\"roles\"", "\"wall_seconds\"", "\"versions\"", "\"config\""})
        EXPECT_NE(manifest.find(key), std::string::npos) << key;
    // A seed override changes the result.
    ASSERT_EQ(cli({"speed", "--config", cfg, "--out", (dir / "c").string(), "--seed", "4"}), 0);
    EXPECT_NE(slurp(dir / "a" / "replicas.csv"), slurp(dir / "c" / "replicas.csv"));
}

TEST(Cli, OracleCheck) {
    std::string out;
    EXPECT_EQ(cli({"oracle-check", "--instances", "100", "--seed", "9"}, &out), 0);
    EXPECT_NE(out.find("walk: "), std::string::npos);
}

TEST(Commands, NamesRoundTrip) {
    EXPECT_EQ(all_commands().size(), 11u);
    for (Command c : all_commands()) EXPECT_EQ(parse_command(to_string(c)), c);
    EXPECT_FALSE(parse_command("nope").has_value());
}
