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
#include "cpwalk/walker.hpp"
#include "internal.hpp"

namespace cpwalk {

namespace {

struct CurveRow {
    std::vector<double> rho;
    std::size_t walk_violations = 0;
    std::size_t env_violations = 0;
};

} // namespace

EstimatorOutput rho_curve(const RhoCurveParams& p, const RunSpec& run) {
    const auto lambdas = detail::sorted_grid(p.lambdas, "lambdas");
    if (lambdas.size() > std::size_t(Sweeper::kMaxLanes)) fail(ErrorCode::validation_error, "at most 8 lambdas");
    if (!(p.t > 0.0)) fail(ErrorCode::validation_error, "t must be > 0");
    const KernelSpec& k = p.kernel;
    const std::size_t M = lambdas.size();
    const double lmax = lambdas.back();
    const int pad = safety_pad(lmax, p.t, run.pad_factor);
    const Box box = Box::cube(k.dimension(), walk_reach(k, p.t) + pad);

    auto batch = run_replicas<CurveRow>(run.replicas, run.threads, [&](std::size_t i) {
        Sweeper sw(box, EventCursor(EventGenerator(box, lmax, p.t, run.stream(i, "rep"), true)));
        const Configuration ones(box, true);
        for (double lam : lambdas) sw.add_lane(ones, lam / lmax);
        WalkDriver drv = sample_driver(k.gamma(), p.t, detail::driver_streams(run, i));
        std::vector<SweepEnvironment> envs;
        std::vector<WalkStepper> walkers;
        for (std::size_t l = 0; l < M; ++l) {
            envs.emplace_back(sw, int(l), pad);
            walkers.emplace_back(k, drv);
        }
        CurveRow row;
        while (!walkers[0].done()) {
            const double j = walkers[0].next_time();
            for (std::size_t l = 0; l < M; ++l) walkers[l].step(envs[l].occupied(walkers[l].position(), j));
            for (std::size_t l = 1; l < M; ++l)
                if (walkers[l - 1].observed() > walkers[l].observed()) ++row.walk_violations;
        }
        sw.advance_to(p.t);
        // Lane l is contained in lane l + 1 at every site.
        for (std::uint32_t s = 0; s < box.size(); ++s) {
            const unsigned st = sw.state(s);
            for (std::size_t l = 1; l < M; ++l)
                if (((st >> (l - 1)) & 1u) && !((st >> l) & 1u)) ++row.env_violations;
        }
        for (std::size_t l = 0; l < M; ++l) row.rho.push_back(double(walkers[l].observed()) / k.gamma() / p.t);
        return row;
    });

    EstimatorOutput out;
    out.estimator = "rho-curve";
    out.stream_roles = {"rep", "jumps", "O", "V"};
    for (double lam : lambdas) out.table.columns.push_back(detail::at("rho", "lambda", lam));
    out.table.columns.push_back("walk_violations");
    out.table.columns.push_back("env_violations");
    std::size_t wv = 0, ev = 0;
    detail::collect(out, batch, run, [&](const CurveRow& r) {
        wv += r.walk_violations;
        ev += r.env_violations;
        std::vector<double> row = r.rho;
        row.push_back(double(r.walk_violations));
        row.push_back(double(r.env_violations));
        return row;
    });
    for (double lam : lambdas) {
        const auto col = detail::at("rho", "lambda", lam);
        out.estimates.push_back(mean_estimate(out.table.values(col), run.level, col, col));
    }
    out.checks.push_back({"monotone_pathwise", wv == 0 && ev == 0,
                          std::to_string(wv) + " walk and " + std::to_string(ev) + " environment violations"});
    // Adjacent values share replicas: compare with the paired-difference SE.
    bool ok = true;
    std::string detail;
    const double z = critical_value(run.level);
    for (std::size_t l = 1; l < M; ++l) {
        auto a = out.table.values(detail::at("rho", "lambda", lambdas[l - 1]));
        auto b = out.table.values(detail::at("rho", "lambda", lambdas[l]));
        std::vector<double> diff(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) diff[j] = b[j] - a[j];
        auto dr = mean_estimate(diff, run.level);
        if (dr.estimate < -z * dr.std_error) {
            ok = false;
            detail += "drop at lambda=" + detail::fmt(lambdas[l]) + "; ";
        }
    }
    out.checks.push_back({"nondecreasing_within_ci", ok, detail.empty() ? "no significant drop" : detail});
    out.values.emplace_back("box_radius", double(box.hi(0)));
    return out;
}

} // namespace cpwalk
