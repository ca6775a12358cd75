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

#include <boost/version.hpp>
#include <cstdio>
#include <fstream>
#include <toml.hpp>

#include "cpwalk/errors.hpp"
#include "cpwalk/harness.hpp"
#include "json_util.hpp"

#ifndef CPWALK_VERSION
#define CPWALK_VERSION "0.0.0"
#endif

namespace cpwalk {

namespace detail {

namespace {

Json number_list(const std::vector<double>& xs) {
    Json a = Json::array();
    for (double x : xs) a.push_back(x);
    return a;
}

std::string observer_name(ObserverKind k) { return k == ObserverKind::slab ? "slab" : "rightmost"; }

} // namespace

Json config_json(const ExperimentConfig& c) {
    Json j;
    j["source"] = c.source;
    j["experiment"] = c.experiment;
    j["seed"] = c.seed;
    j["replicas"] = c.replicas;
    j["output"] = c.output;
    j["abort_budget"] = c.abort_budget;
    j["level"] = c.level;
    j["threads"] = c.threads ? Json(*c.threads) : Json("env or 1");

    if (c.kernel) {
        Json k;
        k["dimension"] = c.kernel->dimension();
        k["gamma"] = c.kernel->gamma();
        Json rates = Json::array();
        for (const auto& e : c.kernel->input()) {
            Json r;
            r["state"] = e.state;
            r["z"] = e.displacement;
            r["rate"] = e.rate;
            rates.push_back(r);
        }
        k["rates"] = rates;
        const KernelProperties props = check_properties(*c.kernel);
        k["elliptic"] = props.elliptic;
        k["max_range"] = props.max_range;
        Json u0 = Json::array(), u1 = Json::array();
        for (int a = 0; a < c.kernel->dimension(); ++a) {
            u0.push_back(props.drift0[std::size_t(a)]);
            u1.push_back(props.drift1[std::size_t(a)]);
        }
        k["drift0"] = u0;
        k["drift1"] = u1;
        j["kernel"] = k;
    }

    Json env;
    env["lambda"] = c.lambda;
    env["dimension"] = c.dimension;
    env["radius"] = c.radius ? Json(*c.radius) : Json("auto");
    env["radius_resolved"] = c.resolved_radius;
    env["radius_rule_horizon"] = c.horizon;
    env["radius_rule_window"] = c.window;
    env["pad_factor"] = c.pad_factor;
    env["boundary"] = std::string(to_string(c.boundary));
    env["initial"] = c.initial.to_string();
    env["burn_in"] = c.initial.burn_in;
    j["environment"] = env;

    Json g;
    g["t"] = number_list(c.grids.t);
    g["lambda"] = number_list(c.grids.lambda);
    g["T"] = number_list(c.grids.T);
    g["K"] = c.grids.K;
    g["L"] = number_list(c.grids.L);
    g["epsilon"] = number_list(c.grids.epsilon);
    g["m"] = number_list(c.grids.m);
    j["grids"] = g;

    j["subadd"] = {{"t", c.subadd.t},
                   {"s", c.subadd.s},
                   {"k_max", c.subadd.k_max},
                   {"ks_alpha", c.subadd.ks_alpha},
                   {"shared", c.subadd.shared}};
    Json ldp;
    ldp["center"] = c.ldp.center ? Json(*c.ldp.center) : Json("ensemble mean");
    if (c.ldp.walk_center) {
        Json w = Json::array();
        for (int a = 0; a < c.dimension; ++a) w.push_back((*c.ldp.walk_center)[std::size_t(a)]);
        ldp["walk_center"] = w;
    } else {
        ldp["walk_center"] = "ensemble mean";
    }
    ldp["reference_replicas"] = c.ldp.reference_replicas;
    j["ldp"] = ldp;
    j["coupling"] = {{"density", c.coupling.density}, {"window", c.coupling.window}, {"dual", c.coupling.dual}};
    j["conemix"] = {{"reference", c.cone.reference},
                    {"extra_horizon", c.cone.extra_horizon},
                    {"grid_step", c.cone.grid_step},
                    {"exact", c.cone.exact}};
    j["slab"] = {{"t_end", c.slab.t_end}};
    j["rho_curve"] = {{"t", c.rho_curve.t}};
    j["density_lb"] = {{"observer", observer_name(c.density.observer)},
                       {"horizon", c.density.horizon},
                       {"K", c.density.K},
                       {"L", c.density.L},
                       {"delta", c.density.delta},
                       {"shared", c.density.shared}};
    return j;
}

} // namespace detail

namespace {

using detail::Json;

Json estimate_json(const EstimateReport& e) {
    return Json{{"label", e.label},           {"estimate", e.estimate}, {"std_error", e.std_error},
                {"replicas", e.replicas},     {"ci_low", e.ci_low},     {"ci_high", e.ci_high},
                {"level", e.level},           {"column", e.column}};
}

Json fit_json(const std::string& name, const TailFit& f) {
    Json j;
    j["name"] = name;
    j["status"] = std::string(to_string(f.status));
    j["t"] = f.t;
    j["hits"] = f.hits;
    j["trials"] = f.trials;
    j["probability"] = f.probability;
    j["log_probability"] = f.log_probability;
    j["used"] = f.used;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["r_squared"] = f.r_squared;
    j["slope_se"] = f.slope_se;
    j["slope_ci_low"] = f.slope_ci_low;
    j["slope_ci_high"] = f.slope_ci_high;
    j["level"] = f.level;
    j["strictly_decreasing"] = f.strictly_decreasing();
    return j;
}

std::string status_of(const EstimatorOutput& out) {
    if (out.abort_budget_exceeded) return "abort_budget_exceeded";
    if (out.inconclusive()) return "inconclusive_fit";
    return "ok";
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::resource_limit, "cannot write " + p.string());
    f << text;
    if (!f) fail(ErrorCode::resource_limit, "write failed: " + p.string());
}

std::string compiler() {
#if defined(__clang__)
    return "clang " __clang_version__;
#elif defined(__GNUC__)
    return "gcc " __VERSION__;
#else
    return "unknown";
#endif
}

} // namespace

std::string report_json(Command command, const ExperimentConfig& config, const EstimatorOutput& out) {
    Json j;
    j["command"] = std::string(to_string(command));
    j["estimator"] = out.estimator;
    j["experiment"] = config.experiment;
    j["seed"] = config.seed;
    j["replicas"] = out.replicas;
    j["completed"] = out.table.rows.size();
    j["status"] = status_of(out);
    Json aborted = Json::array();
    for (const auto& a : out.aborted) aborted.push_back({{"replica", a.replica}, {"reason", a.reason}});
    j["aborted"] = aborted;
    j["abort_budget"] = config.abort_budget;
    j["abort_budget_exceeded"] = out.abort_budget_exceeded;
    Json est = Json::array();
    for (const auto& e : out.estimates) est.push_back(estimate_json(e));
    j["estimates"] = est;
    Json fits = Json::array();
    for (const auto& [name, f] : out.fits) fits.push_back(fit_json(name, f));
    j["fits"] = fits;
    Json checks = Json::array();
    for (const auto& c : out.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = checks;
    Json values = Json::object();
    for (const auto& [k, v] : out.values) values[k] = v;
    j["values"] = values;
    j["warnings"] = out.warnings;
    return j.dump(2) + "\n";
}

std::string replicas_csv(const EstimatorOutput& out) {
    std::string s = "replica";
    for (const auto& c : out.table.columns) s += "," + c;
    s += "\n";
    char buf[40];
    for (std::size_t r = 0; r < out.table.rows.size(); ++r) {
        s += std::to_string(out.table.replica[r]);
        for (double v : out.table.rows[r]) {
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            s += buf;
        }
        s += "\n";
    }
    return s;
}

std::string manifest_json(Command command, const ExperimentConfig& config, const EstimatorOutput& out,
                          const RunInfo& info) {
    Json j;
    j["tool"] = "cpwalk";
    j["version"] = CPWALK_VERSION;
    j["command"] = std::string(to_string(command));
    j["argv"] = info.argv;
    j["config"] = detail::config_json(config);
    Json streams;
    streams["master_seed"] = config.seed;
    streams["experiment"] = config.experiment;
    streams["generator"] = "xoshiro256++";
    streams["derivation"] =
        "key = splitmix64 chain over (seed ^ fnv1a(experiment), replica, fnv1a(role), aux); label experiment/replica/role[/aux]";
    streams["replicas"] = {{"first", 0}, {"last", out.replicas ? out.replicas - 1 : 0}};
    streams["roles"] = out.stream_roles;
    j["streams"] = streams;
    j["threads"] = info.threads;
    j["wall_seconds"] = info.wall_seconds;
    j["versions"] = {{"cpwalk", CPWALK_VERSION},
                     {"compiler", compiler()},
                     {"cxx_standard", long(__cplusplus)},
                     {"boost", BOOST_LIB_VERSION},
                     {"tomlplusplus", std::to_string(TOML_LIB_MAJOR) + "." + std::to_string(TOML_LIB_MINOR) + "." +
                                          std::to_string(TOML_LIB_PATCH)},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    j["status"] = status_of(out);
    j["aborted"] = out.aborted.size();
    j["warnings"] = out.warnings;
    j["files"] = {"manifest.json", "report.json", "replicas.csv"};
    return j.dump(2) + "\n";
}

void write_outputs(const std::filesystem::path& dir, Command command, const ExperimentConfig& config,
                   const EstimatorOutput& out, const RunInfo& info) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorCode::resource_limit, "cannot create " + dir.string() + ": " + ec.message());
    write_file(dir / "report.json", report_json(command, config, out));
    write_file(dir / "replicas.csv", replicas_csv(out));
    write_file(dir / "manifest.json", manifest_json(command, config, out, info));
}

int exit_code(const EstimatorOutput& out) {
    if (out.abort_budget_exceeded) return 4;
    if (out.inconclusive()) return 3;
    return 0;
}

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::parse_error:
    case ErrorCode::validation_error: return 5;
    case ErrorCode::inconclusive_fit: return 3;
    case ErrorCode::abort_budget_exceeded: return 4;
    default: return 1;
    }
}

} // namespace cpwalk
