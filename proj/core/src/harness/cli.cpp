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

#include <chrono>
#include <ostream>

#include <CLI11.hpp>

#include "cpwalk/errors.hpp"
#include "cpwalk/harness.hpp"

namespace cpwalk {

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicas;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
    bool exact_cone = false;
    bool shared_rep = false;
    std::size_t instances = 2000;
};

void print_summary(std::ostream& os, const EstimatorOutput& o) {
    os << o.estimator << ": " << o.table.rows.size() << "/" << o.replicas << " replicas";
    if (!o.aborted.empty()) os << ", " << o.aborted.size() << " aborted";
    os << "\n";
    for (const auto& e : o.estimates)
        os << "  " << e.label << " = " << e.estimate << " [" << e.ci_low << ", " << e.ci_high << "]\n";
    for (const auto& [name, f] : o.fits)
        os << "  fit " << name << ": " << to_string(f.status) << " slope " << f.slope << " [" << f.slope_ci_low
           << ", " << f.slope_ci_high << "] R2 " << f.r_squared << "\n";
    for (const auto& c : o.checks) os << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << "\n";
    for (const auto& w : o.warnings) os << "  warning: " << w << "\n";
}

} // namespace

int run_cli(int argc, char** argv, const CliHooks& hooks, std::ostream& out, std::ostream& err) {
    CLI::App app{"cpwalk: contact-process random walk estimators"};
    app.require_subcommand(1);
    Overrides ov;
    std::vector<std::pair<Command, CLI::App*>> subs;
    for (Command c : all_commands()) {
        const std::string name(to_string(c));
        CLI::App* s = app.add_subcommand(name, c == Command::oracle_check
                                                   ? "run the brute-force oracle suites and print pass counts"
                                                   : "run the " + name + " estimator");
        if (c == Command::oracle_check) {
            s->add_option("--seed", ov.seed, "master seed");
            s->add_option("--instances", ov.instances, "instances per suite")->check(CLI::PositiveNumber);
        } else {
            s->add_option("--config", ov.config, "TOML experiment file")->required();
            s->add_option("--seed", ov.seed, "override the master seed");
            s->add_option("--replicas", ov.replicas, "override the replica count")->check(CLI::PositiveNumber);
            s->add_option("--out", ov.out, "output directory");
            s->add_option("--threads", ov.threads, "worker threads (default: CPWALK_THREADS or 1)")
                ->check(CLI::Range(1u, 4096u));
            s->add_flag("--exact-cone", ov.exact_cone, "conemix: exact event-time cone probing");
            s->add_flag("--shared-rep", ov.shared_rep, "subadd, density-lb: restart on the shared rep");
        }
        subs.emplace_back(c, s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        for (auto& [c, s] : subs)
            if (s->parsed()) {
                err << s->help();
                return 2;
            }
        err << app.help();
        return 2;
    }

    Command cmd = Command::speed;
    for (auto& [c, s] : subs)
        if (s->parsed()) cmd = c;

    try {
        if (cmd == Command::oracle_check) {
            if (!hooks.oracle_check) {
                err << "oracle-check is not available in this build\n";
                return 1;
            }
            return hooks.oracle_check(ov.seed.value_or(1), ov.instances, out);
        }
        ExperimentConfig config = load_config(ov.config);
        if (ov.seed) config.seed = *ov.seed;
        if (ov.replicas) config.replicas = *ov.replicas;
        if (ov.out) config.output = *ov.out;
        if (ov.threads) config.threads = *ov.threads;
        if (ov.exact_cone) config.cone.exact = true;
        if (ov.shared_rep) {
            config.subadd.shared = true;
            config.density.shared = true;
        }

        RunInfo info;
        for (int i = 0; i < argc; ++i) info.argv.emplace_back(argv[i]);
        info.threads = config.run_spec().threads;
        const auto t0 = std::chrono::steady_clock::now();
        EstimatorOutput o = run_estimator(cmd, config);
        info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_outputs(config.output, cmd, config, o, info);
        print_summary(out, o);
        out << "wrote " << config.output << "/{manifest.json,report.json,replicas.csv}\n";
        return exit_code(o);
    } catch (const Error& e) {
        err << to_string(e.code()) << ": " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cpwalk
