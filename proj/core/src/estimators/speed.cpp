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

#include <cmath>

#include "cpwalk/errors.hpp"
#include "cpwalk/graphical.hpp"
#include "cpwalk/walker.hpp"
#include "internal.hpp"

namespace cpwalk {

namespace detail {

std::vector<double> sorted_grid(std::vector<double> grid, const char* name) {
    if (grid.empty()) fail(ErrorCode::validation_error, std::string(name) + ": grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
            fail(ErrorCode::validation_error, std::string(name) + ": grid values must be positive");
        if (i && !(grid[i] > grid[i - 1]))
            fail(ErrorCode::validation_error, std::string(name) + ": grid must be strictly increasing");
    }
    return grid;
}

WalkSample sample_walk(const KernelSpec& k, double lambda, const InitialSpec& initial,
                       const std::vector<double>& grid, const RunSpec& run, std::size_t i, std::uint64_t aux) {
    const int d = k.dimension();
    const double T = grid.back();
    WalkDriver drv =
        sample_driver(k.gamma(), T, driver_streams(run, i, aux));
    WalkResult w;
    if (initial.law == InitialLaw::zeros) {
        ConstantEnvironment env(0);
        w = run_walk(k, env, drv);
    } else {
        const int pad = safety_pad(lambda, T + initial_lead(initial), run.pad_factor);
        const Box box = Box::cube(d, walk_reach(k, T) + pad);
        Sweeper sw(box, EventCursor(EventGenerator(box, lambda, T, run.stream(i, "rep", aux))));
        sw.add_lane(sample_initial(box, initial, lambda, run.stream(i, "init", aux)));
        SweepEnvironment env(sw, 0, pad);
        w = run_walk(k, env, drv);
    }
    WalkSample out;
    for (double t : grid) {
        out.rho.push_back(w.rho_at(t) / t);
        const Point& x = w.position_at(t);
        Vector v{};
        for (int a = 0; a < d; ++a) v[a] = double(x[a]) / t;
        out.velocity.push_back(v);
    }
    return out;
}

} // namespace detail

namespace {

struct SpeedRow {
    std::vector<double> rho;
    std::vector<Vector> v;
    std::vector<Vector> residual;
};

} // namespace

EstimatorOutput estimate_speed(const SpeedParams& p, const RunSpec& run) {
    const auto grid = detail::sorted_grid(p.t_grid, "t_grid");
    if (!(p.lambda >= 0.0)) fail(ErrorCode::validation_error, "lambda must be >= 0");
    const KernelSpec& k = p.kernel;
    const int d = k.dimension();
    const double T = grid.back();
    const Vector u0 = k.drift(0), u1 = k.drift(1);

    auto batch = run_replicas<SpeedRow>(run.replicas, run.threads, [&](std::size_t i) {
        detail::WalkSample w = detail::sample_walk(k, p.lambda, p.initial, grid, run, i);
        SpeedRow row;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            Vector r{};
            for (int a = 0; a < d; ++a) r[a] = w.velocity[g][a] - (w.rho[g] * u1[a] + (1.0 - w.rho[g]) * u0[a]);
            row.rho.push_back(w.rho[g]);
            row.v.push_back(w.velocity[g]);
            row.residual.push_back(r);
        }
        return row;
    });

    EstimatorOutput out;
    out.estimator = "speed";
    out.stream_roles = {"init", "rep", "jumps", "O", "V"};
    for (double t : grid) {
        out.table.columns.push_back(detail::at("rho", "t", t));
        for (int a = 0; a < d; ++a) out.table.columns.push_back(detail::at("v" + std::to_string(a), "t", t));
        for (int a = 0; a < d; ++a) out.table.columns.push_back(detail::at("res" + std::to_string(a), "t", t));
    }
    detail::collect(out, batch, run, [&](const SpeedRow& r) {
        std::vector<double> row;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            row.push_back(r.rho[g]);
            for (int a = 0; a < d; ++a) row.push_back(r.v[g][a]);
            for (int a = 0; a < d; ++a) row.push_back(r.residual[g][a]);
        }
        return row;
    });

    for (const auto& col : out.table.columns) {
        auto xs = out.table.values(col);
        out.estimates.push_back(mean_estimate(xs, run.level, col, col));
    }
    for (double t : grid) {
        for (int a = 0; a < d; ++a) {
            const auto* r = out.estimate(detail::at("res" + std::to_string(a), "t", t));
            out.checks.push_back({detail::at("identity" + std::to_string(a), "t", t), r->ci_contains(0.0),
                                  "residual CI [" + detail::fmt(r->ci_low) + ", " + detail::fmt(r->ci_high) + "]"});
        }
    }
    // Consecutive grid points share replicas, so the SE is that of the paired difference.
    for (std::size_t g = 1; g < grid.size(); ++g) {
        auto a = out.table.values(detail::at("rho", "t", grid[g - 1]));
        auto b = out.table.values(detail::at("rho", "t", grid[g]));
        std::vector<double> diff(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) diff[j] = b[j] - a[j];
        auto dr = mean_estimate(diff, run.level);
        const std::string key = "t=" + detail::fmt(grid[g - 1]) + "," + detail::fmt(grid[g]);
        out.values.emplace_back("rho_diff[" + key + "]", dr.estimate);
        out.values.emplace_back("rho_diff_se[" + key + "]", dr.std_error);
        out.checks.push_back({"rho_stable[" + key + "]", std::abs(dr.estimate) <= 3.0 * dr.std_error,
                              "paired difference " + detail::fmt(dr.estimate) + " vs 3 SE " +
                                  detail::fmt(3.0 * dr.std_error)});
    }
    const int pad = safety_pad(p.lambda, T + initial_lead(p.initial), run.pad_factor);
    out.values.emplace_back("box_radius", double(walk_reach(k, T) + pad));
    out.values.emplace_back("margin", double(pad));
    return out;
}

} // namespace cpwalk
