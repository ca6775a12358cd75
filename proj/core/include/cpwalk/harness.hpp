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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpwalk/estimators.hpp"
#include "cpwalk/kernel.hpp"
#include "cpwalk/lattice.hpp"

namespace cpwalk {

enum class Command {
    speed,
    subadd,
    ldp_rho,
    ldp_walk,
    coupling,
    conemix,
    slab,
    edge,
    rho_curve,
    density_lb,
    oracle_check,
};

std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view name);
const std::vector<Command>& all_commands();

struct Grids {
    std::vector<double> t;
    std::vector<double> lambda;
    std::vector<double> T;
    std::vector<int> K;
    std::vector<double> L;
    std::vector<double> epsilon;
    std::vector<double> m;
};

/// A validated experiment. Every default is filled in; `to_json` echoes it.
struct ExperimentConfig {
    std::string source;
    std::string experiment = "exp";
    std::uint64_t seed = 1;
    std::size_t replicas = 100;
    std::string output = "out";
    double abort_budget = 0.01;
    double level = 0.95;
    /// Unset: the CPWALK_THREADS variable, else 1.
    std::optional<unsigned> threads;

    std::optional<KernelSpec> kernel;

    double lambda = 2.0;
    int dimension = 1;
    /// Explicit radius; empty means "auto".
    std::optional<int> radius;
    /// Radius from the safety rule (or the explicit value), for the echo.
    int resolved_radius = 0;
    /// Longest time and walker reach the radius rule was evaluated at.
    double horizon = 0.0;
    int window = 0;
    /// Longest time named outside the grids (subadd, slab, ...).
    double section_horizon = 0.0;
    double pad_factor = 4.0;
    Boundary boundary = Boundary::truncate;
    InitialSpec initial;

    Grids grids;

    struct Subadd {
        double t = 5.0;
        double s = 5.0;
        int k_max = 5;
        double ks_alpha = 0.01;
        bool shared = false;
    } subadd;
    struct Ldp {
        std::optional<double> center;
        std::optional<Vector> walk_center;
        std::size_t reference_replicas = 200;
    } ldp;
    struct Coupling {
        double density = 0.5;
        double window = 1.0;
        bool dual = true;
    } coupling;
    struct Cone {
        int reference = 1;
        double extra_horizon = 10.0;
        double grid_step = 1.0;
        bool exact = false;
    } cone;
    struct Slab {
        double t_end = 50.0;
    } slab;
    struct RhoCurve {
        double t = 40.0;
    } rho_curve;
    struct Density {
        ObserverKind observer = ObserverKind::d1_rightmost;
        double horizon = 100.0;
        int K = 5;
        double L = 0.0;
        double delta = 0.0;
        bool shared = false;
    } density;

    RunSpec run_spec() const;
    /// Resolved configuration as pretty JSON.
    std::string to_json() const;
};

/// Errors: parse_error with file:line:column, validation_error naming the field.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::string_view toml, std::string_view source = "<string>");

/// Re-runs the radius rule after fields were changed by hand.
void resolve_radius(ExperimentConfig& config);

/// Validates the fields a command needs and runs it. Not for oracle-check.
EstimatorOutput run_estimator(Command command, const ExperimentConfig& config);

/// Deterministic result document (no wall time, no thread count).
std::string report_json(Command command, const ExperimentConfig& config, const EstimatorOutput& out);
std::string replicas_csv(const EstimatorOutput& out);

struct RunInfo {
    double wall_seconds = 0.0;
    unsigned threads = 1;
    std::vector<std::string> argv;
};

std::string manifest_json(Command command, const ExperimentConfig& config, const EstimatorOutput& out,
                          const RunInfo& info);

/// Writes manifest.json, report.json and replicas.csv into `dir`.
void write_outputs(const std::filesystem::path& dir, Command command, const ExperimentConfig& config,
                   const EstimatorOutput& out, const RunInfo& info);

/// 0 ok, 3 inconclusive fit, 4 abort budget exceeded.
int exit_code(const EstimatorOutput& out);
/// 5 for parse and validation errors, 3 and 4 as above, else 1.
int exit_code(ErrorCode code);

struct CliHooks {
    /// oracle-check: returns 0 when every suite passes.
    std::function<int(std::uint64_t seed, std::size_t instances, std::ostream& log)> oracle_check;
};

/// Exit codes as above; 2 for usage errors.
int run_cli(int argc, char** argv, const CliHooks& hooks, std::ostream& out, std::ostream& err);

} // namespace cpwalk
