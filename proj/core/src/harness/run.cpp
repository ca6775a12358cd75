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

#include <algorithm>
#include <array>

#include "cpwalk/errors.hpp"
#include "cpwalk/harness.hpp"

namespace cpwalk {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 11> kNames{{
    {Command::speed, "speed"},
    {Command::subadd, "subadd"},
    {Command::ldp_rho, "ldp-rho"},
    {Command::ldp_walk, "ldp-walk"},
    {Command::coupling, "coupling"},
    {Command::conemix, "conemix"},
    {Command::slab, "slab"},
    {Command::edge, "edge"},
    {Command::rho_curve, "rho-curve"},
    {Command::density_lb, "density-lb"},
    {Command::oracle_check, "oracle-check"},
}};

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
    fail(ErrorCode::validation_error, "field '" + field + "': " + why);
}

const KernelSpec& need_kernel(const ExperimentConfig& c, Command cmd) {
    if (!c.kernel) invalid("kernel", std::string("required by ") + std::string(to_string(cmd)));
    return *c.kernel;
}

template <class T>
const std::vector<T>& need_grid(const std::vector<T>& g, const char* name) {
    if (g.empty()) invalid(std::string("grids.") + name, "required");
    return g;
}

double single(const std::vector<double>& g, const char* name, double fallback) {
    if (g.empty()) return fallback;
    if (g.size() != 1) invalid(std::string("grids.") + name, "this command takes a single value");
    return g.front();
}

std::vector<double> lambdas_or_default(const ExperimentConfig& c) {
    return c.grids.lambda.empty() ? std::vector<double>{c.lambda} : c.grids.lambda;
}

} // namespace

std::string_view to_string(Command c) {
    for (const auto& [k, n] : kNames)
        if (k == c) return n;
    return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    return std::nullopt;
}

const std::vector<Command>& all_commands() {
    static const std::vector<Command> all = [] {
        std::vector<Command> v;
        for (const auto& [k, n] : kNames) v.push_back(k);
        return v;
    }();
    return all;
}

EstimatorOutput run_estimator(Command cmd, const ExperimentConfig& c) {
    if (c.boundary != Boundary::truncate)
        invalid("environment.boundary", "estimators run on truncated boxes; periodic boxes are library-only");
    const RunSpec run = c.run_spec();
    switch (cmd) {
    case Command::speed: {
        SpeedParams p{need_kernel(c, cmd), c.lambda, c.initial, need_grid(c.grids.t, "t")};
        return estimate_speed(p, run);
    }
    case Command::subadd: {
        SubaddParams p{need_kernel(c, cmd), c.lambda, c.subadd.t, c.subadd.s, c.subadd.shared, c.subadd.k_max,
                       c.subadd.ks_alpha};
        return subadditive_X(p, run);
    }
    case Command::ldp_rho: {
        if (c.initial.law != InitialLaw::ones && c.initial.law != InitialLaw::zeros)
            invalid("environment.initial", "ldp-rho starts from \"ones\" or \"zeros\"");
        LdpRhoParams p{need_kernel(c, cmd), c.lambda, c.initial.law, single(c.grids.epsilon, "epsilon", 0.1),
                       need_grid(c.grids.t, "t"), c.ldp.center};
        return ldp_tail_rho(p, run);
    }
    case Command::ldp_walk: {
        LdpWalkParams p{need_kernel(c, cmd), c.lambda, single(c.grids.epsilon, "epsilon", 0.2),
                        need_grid(c.grids.t, "t"), c.initial, c.ldp.walk_center, c.ldp.reference_replicas};
        return ldp_tail_walker(p, run);
    }
    case Command::coupling: {
        CouplingParams p{c.lambda, c.coupling.density, need_grid(c.grids.T, "T"), c.dimension, c.coupling.window,
                         c.coupling.dual};
        return coupling_discrepancy(p, run);
    }
    case Command::conemix: {
        ConeParams p{c.lambda,          single(c.grids.m, "m", 1.0), need_grid(c.grids.T, "T"),
                     c.initial,         c.cone.reference,            c.dimension,
                     c.cone.extra_horizon, c.cone.grid_step,         c.cone.exact};
        return cone_mixing_phi(p, run);
    }
    case Command::slab: {
        SlabSurvivalParams p{lambdas_or_default(c), need_grid(c.grids.K, "K"),
                             c.grids.L.empty() ? std::vector<double>{0.0} : c.grids.L, c.dimension, c.slab.t_end};
        return slab_survival(p, run);
    }
    case Command::edge: {
        if (c.dimension != 1) invalid("environment.dimension", "edge needs dimension 1");
        EdgeParams p{lambdas_or_default(c), need_grid(c.grids.t, "t"), c.initial};
        return edge_speed(p, run);
    }
    case Command::rho_curve: {
        RhoCurveParams p{need_kernel(c, cmd), need_grid(c.grids.lambda, "lambda"), c.rho_curve.t};
        return rho_curve(p, run);
    }
    case Command::density_lb: {
        DensityParams p{need_kernel(c, cmd), c.lambda,    c.density.observer, c.density.horizon, c.initial,
                        c.density.K,         c.density.L, c.density.delta,    c.density.shared};
        return positive_density_lower_bound(p, run);
    }
    case Command::oracle_check: break;
    }
    fail(ErrorCode::invalid_argument, "oracle-check is not an estimator");
}

} // namespace cpwalk
