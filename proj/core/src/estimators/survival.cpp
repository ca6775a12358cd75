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
#include "cpwalk/sparse.hpp"
#include "internal.hpp"

namespace cpwalk {

namespace {

struct Cell {
    double lambda;
    int K;
    double L;
    Box box;
};

Box survival_box(int dim, int K, double L, double t_end, int width) {
    Point lo{}, hi{};
    lo[0] = -K + int(std::floor(std::min(0.0, L * t_end)));
    hi[0] = K + int(std::ceil(std::max(0.0, L * t_end)));
    for (int a = 1; a < dim; ++a) {
        lo[a] = -width;
        hi[a] = width;
    }
    return Box(dim, lo, hi);
}

std::string cell_key(const Cell& c) {
    return "lambda=" + detail::fmt(c.lambda) + ",K=" + std::to_string(c.K) + ",L=" + detail::fmt(c.L);
}

} // namespace

EstimatorOutput slab_survival(const SlabSurvivalParams& p, const RunSpec& run) {
    if (p.lambdas.empty() || p.Ks.empty() || p.Ls.empty()) fail(ErrorCode::validation_error, "empty grid");
    if (p.dimension < 1 || p.dimension > kMaxDim) fail(ErrorCode::validation_error, "dimension out of range");
    if (!(p.t_end > 0.0)) fail(ErrorCode::validation_error, "t_end must be > 0");
    for (std::size_t j = 1; j < p.lambdas.size(); ++j)
        if (!(p.lambdas[j] > p.lambdas[j - 1])) fail(ErrorCode::validation_error, "lambdas must be increasing");
    std::vector<Cell> cells;
    for (int K : p.Ks) {
        if (K < 1) fail(ErrorCode::validation_error, "K must be >= 1");
        for (double L : p.Ls)
            for (double lam : p.lambdas) {
                if (!(lam >= 0.0)) fail(ErrorCode::validation_error, "lambda must be >= 0");
                const int width = std::max(1, safety_pad(lam, p.t_end, run.pad_factor));
                cells.push_back({lam, K, L, survival_box(p.dimension, K, L, p.t_end, width)});
            }
    }

    auto batch = run_replicas<std::vector<double>>(run.replicas, run.threads, [&](std::size_t i) {
        std::vector<double> row;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const Cell& cell = cells[c];
            SparseContact cp(cell.box, cell.lambda, run.stream(i, "rep", c), SlabSpec{cell.K, cell.L, 0});
            cp.occupy(Point{});
            const bool alive = cp.advance_to(p.t_end);
            row.push_back(alive ? 1.0 : 0.0);
        }
        return row;
    });

    EstimatorOutput out;
    out.estimator = "slab";
    out.stream_roles = {"rep/<cell>"};
    for (const auto& c : cells) out.table.columns.push_back("survived[" + cell_key(c) + "]");
    detail::collect(out, batch, run, [](const std::vector<double>& r) { return r; });
    const std::size_t n = out.table.rows.size();
    for (const auto& c : cells) {
        const auto col = "survived[" + cell_key(c) + "]";
        auto xs = out.table.values(col);
        std::size_t h = 0;
        for (double x : xs) h += x != 0.0;
        out.estimates.push_back(proportion_estimate(h, n, run.level, "survival[" + cell_key(c) + "]", col));
    }
    // Trend in lambda at fixed (K, L): each step up may not fall below the previous CI.
    for (int K : p.Ks)
        for (double L : p.Ls) {
            bool ok = true;
            const EstimateReport* prev = nullptr;
            for (double lam : p.lambdas) {
                const auto* e = out.estimate("survival[" + cell_key({lam, K, L, Box()}) + "]");
                if (prev && e->ci_high < prev->ci_low) ok = false;
                prev = e;
            }
            out.checks.push_back({"nondecreasing_in_lambda[K=" + std::to_string(K) + ",L=" + detail::fmt(L) + "]", ok,
                                  "consecutive lambda values, CI overlap or increase"});
        }
    return out;
}

} // namespace cpwalk
