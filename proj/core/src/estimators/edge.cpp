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
#include "cpwalk/sweeper.hpp"
#include "internal.hpp"

namespace cpwalk {

EstimatorOutput edge_speed(const EdgeParams& p, const RunSpec& run) {
    const auto grid = detail::sorted_grid(p.t_grid, "t_grid");
    const auto lambdas = detail::sorted_grid(p.lambdas, "lambdas");
    if (lambdas.size() > std::size_t(Sweeper::kMaxLanes)) fail(ErrorCode::validation_error, "at most 8 lambdas");
    if (p.initial.law != InitialLaw::ones && p.initial.law != InitialLaw::upper_invariant)
        fail(ErrorCode::validation_error, "initial must be ones (all-ones-left) or upper-invariant");
    const double T = grid.back();
    const double lmax = lambdas.back();
    const double lead = initial_lead(p.initial);
    // The front moves right only along arrows, one site per arrow.
    const double mean = lmax * T;
    const int reach = int(std::ceil(mean + 8.0 * std::sqrt(mean) + 10.0));
    const int pad = std::max(1, safety_pad(lmax, T + lead, run.pad_factor));
    const int R = reach + pad;
    const Box box = Box::cube(1, R);
    const std::size_t G = grid.size(), M = lambdas.size();

    auto batch = run_replicas<std::vector<double>>(run.replicas, run.threads, [&](std::size_t i) {
        Configuration init = p.initial.law == InitialLaw::ones
                                 ? Configuration(box, true)
                                 : sample_initial(box, p.initial, lmax, run.stream(i, "init"));
        init = mask_left_of(std::move(init), 0);
        Sweeper sw(box, EventCursor(EventGenerator(box, lmax, T, run.stream(i, "rep"), M > 1)));
        for (double lam : lambdas) sw.add_lane(init, lam / lmax);
        std::vector<double> row;
        std::vector<int> prev(M);
        for (double t : grid) {
            sw.advance_to(t);
            for (std::size_t l = 0; l < M; ++l) {
                auto r = rightmost_occupied(sw, int(l), R);
                if (!r) fail(ErrorCode::walker_left_safe_region, "front vanished inside the box");
                if (*r > R - pad || *r < -R + pad) fail(ErrorCode::walker_left_safe_region, "front left the exact region");
                row.push_back(double(*r) / t);
                prev[l] = *r;
            }
            // Thinned lanes sit below the full one, so fronts are ordered.
            for (std::size_t l = 1; l < M; ++l) row.push_back(prev[l - 1] <= prev[l] ? 0.0 : 1.0);
        }
        return row;
    });

    EstimatorOutput out;
    out.estimator = "edge";
    out.stream_roles = {"init", "rep"};
    for (double t : grid) {
        for (double lam : lambdas)
            out.table.columns.push_back("alpha[lambda=" + detail::fmt(lam) + ",t=" + detail::fmt(t) + "]");
        for (std::size_t l = 1; l < M; ++l)
            out.table.columns.push_back("order_violation[lambda=" + detail::fmt(lambdas[l]) + ",t=" + detail::fmt(t) +
                                        "]");
    }
    detail::collect(out, batch, run, [](const std::vector<double>& r) { return r; });
    std::size_t violations = 0;
    for (const auto& row : out.table.rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            if (out.table.columns[c].starts_with("order_violation") && row[c] != 0.0) ++violations;
    out.checks.push_back({"front_order_pathwise", violations == 0, std::to_string(violations) + " violations"});
    for (double lam : lambdas) {
        for (double t : grid) {
            const auto col = "alpha[lambda=" + detail::fmt(lam) + ",t=" + detail::fmt(t) + "]";
            out.estimates.push_back(mean_estimate(out.table.values(col), run.level, col, col));
        }
        const auto* last = out.estimate("alpha[lambda=" + detail::fmt(lam) + ",t=" + detail::fmt(T) + "]");
        out.checks.push_back({"alpha_positive[lambda=" + detail::fmt(lam) + "]", last->ci_low > 0.0,
                              "CI low " + detail::fmt(last->ci_low)});
        for (std::size_t g = 1; g < G; ++g) {
            auto a = out.table.values("alpha[lambda=" + detail::fmt(lam) + ",t=" + detail::fmt(grid[g - 1]) + "]");
            auto b = out.table.values("alpha[lambda=" + detail::fmt(lam) + ",t=" + detail::fmt(grid[g]) + "]");
            std::vector<double> diff(a.size());
            for (std::size_t j = 0; j < a.size(); ++j) diff[j] = b[j] - a[j];
            auto dr = mean_estimate(diff, run.level);
            const std::string key = "lambda=" + detail::fmt(lam) + ",t=" + detail::fmt(grid[g - 1]) + "," +
                                    detail::fmt(grid[g]);
            out.values.emplace_back("alpha_diff[" + key + "]", dr.estimate);
            out.values.emplace_back("alpha_diff_se[" + key + "]", dr.std_error);
            out.checks.push_back({"alpha_stable[" + key + "]", std::abs(dr.estimate) <= 3.0 * dr.std_error,
                                  "paired difference " + detail::fmt(dr.estimate) + " vs 3 SE " +
                                      detail::fmt(3.0 * dr.std_error)});
        }
    }
    for (std::size_t l = 1; l < M; ++l) {
        const auto* a = out.estimate("alpha[lambda=" + detail::fmt(lambdas[l - 1]) + ",t=" + detail::fmt(T) + "]");
        const auto* b = out.estimate("alpha[lambda=" + detail::fmt(lambdas[l]) + ",t=" + detail::fmt(T) + "]");
        out.checks.push_back({"monotone_in_lambda[" + detail::fmt(lambdas[l]) + "]", b->estimate >= a->estimate,
                              "alpha-hat at the largest t"});
    }
    out.values.emplace_back("box_radius", double(R));
    return out;
}

} // namespace cpwalk
